#include "fuzzy/repn.hpp"

#include <cmath>

namespace fz {

namespace {

std::vector<Mat> chevalley_basis_in(const ChevalleyRep& rep, const RootSystem& rs) {
  const int l = rs.diagram.rank, P = rs.num_positive(), n = rep.dim;
  std::vector<Mat> h(l), e(P), f(P);
  for (int i = 0; i < l; ++i) {
    h[i] = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k) h[i](k, k) = rep.weights[k][i];
  }
  for (int r = 0; r < P; ++r) {
    if (rs.parent[r] < 0) {
      e[r] = rep.E[rs.step[r]].cast<cplx>();
      f[r] = e[r].transpose();
    } else {
      e[r] = commutator(e[rs.step[r]], e[rs.parent[r]]);
      f[r] = commutator(f[rs.step[r]], f[rs.parent[r]]);
    }
  }
  std::vector<Mat> B;
  for (auto& x : h) B.push_back(std::move(x));
  for (auto& x : e) B.push_back(std::move(x));
  for (auto& x : f) B.push_back(std::move(x));
  return B;
}

Mat combine(const std::vector<Mat>& ops, const Mat& coeff, int row) {
  Mat out = Mat::Zero(ops[0].rows(), ops[0].cols());
  for (int k = 0; k < static_cast<int>(ops.size()); ++k)
    if (coeff(row, k) != cplx(0)) out += coeff(row, k) * ops[k];
  return out;
}

}  // namespace

ChevalleyOps chevalley_ops(const RepSpace& r) {
  const auto& g = *r.alg;
  const int l = g.rank(), P = g.roots.num_positive();
  ChevalleyOps ops;
  for (int k = 0; k < l + 2 * P; ++k) {
    Mat m = combine(r.J, g.from_chevalley, k);
    if (k < l)
      ops.h.push_back(m);
    else if (k < l + P)
      ops.e.push_back(m);
    else
      ops.f.push_back(m);
  }
  return ops;
}

Irrep build_irrep(const AlgebraPtr& alg, const Weight& lambda, long long size_cap, bool fast_a1) {
  const auto& rs = alg->roots;
  if (static_cast<int>(lambda.size()) != rs.diagram.rank) throw Error("weight length does not match rank");
  if (!is_dominant(lambda)) throw Error("highest weight must be dominant: " + to_string(lambda));
  Irrep out;
  out.alg = alg;
  out.hw = lambda;
  if (fast_a1 && rs.diagram.series == 'A' && rs.diagram.rank == 1) {
    if (lambda[0] + 1 > size_cap) throw Error("representation above the size cap");
    out.chev = build_chevalley_a1(lambda[0]);
  } else {
    out.chev = build_chevalley(rs, lambda, size_cap);
  }
  auto B = chevalley_basis_in(out.chev, rs);
  for (int a = 0; a < alg->dim; ++a) out.J.push_back(combine(B, alg->to_chevalley, a));
  // The construction is real up to rounding in the change of basis; symmetrize.
  for (auto& j : out.J) j = 0.5 * (j + j.adjoint()).eval();
  out.hw_vector = Vec::Zero(out.chev.dim);
  out.hw_vector(0) = 1.0;
  out.provenance = "irrep " + alg->name() + " " + to_string(lambda);
  return out;
}

RepSpace tensor(const RepSpace& a, const RepSpace& b) {
  if (a.alg != b.alg && (a.alg->name() != b.alg->name())) throw Error("tensor factors use different algebras");
  RepSpace t;
  t.alg = a.alg;
  const Mat Ia = Mat::Identity(a.dim(), a.dim()), Ib = Mat::Identity(b.dim(), b.dim());
  for (size_t k = 0; k < a.J.size(); ++k) t.J.push_back(kron(a.J[k], Ib) + kron(Ia, b.J[k]));
  t.provenance = "(" + a.provenance + ") x (" + b.provenance + ")";
  return t;
}

Mat casimir_matrix(const RepSpace& r) {
  const auto& gi = r.alg->inverse_metric;
  Mat c = Mat::Zero(r.dim(), r.dim());
  for (int a = 0; a < r.alg->dim; ++a)
    for (int b = 0; b < r.alg->dim; ++b)
      if (gi(a, b) != 0.0) c += gi(a, b) * r.J[a] * r.J[b];
  return c;
}

double casimir_eigenvalue(const RepSpace& r, double rel_tol) {
  Mat c = casimir_matrix(r);
  const int n = r.dim();
  double v = c.trace().real() / n;
  double dev = opnorm(c - v * Mat::Identity(n, n));
  if (dev > rel_tol * std::max(1.0, std::abs(v))) throw Error("Casimir is not scalar on this space");
  return v;
}

std::vector<WeightSpace> weight_spaces(const RepSpace& r) {
  const auto ops = chevalley_ops(r);
  const int n = r.dim(), l = static_cast<int>(ops.h.size());
  double off = 0, scale = 1;
  for (auto& h : ops.h) {
    Mat d = h.diagonal().asDiagonal();
    off = std::max(off, (h - d).cwiseAbs().maxCoeff());
    scale = std::max(scale, h.cwiseAbs().maxCoeff());
  }
  std::vector<WeightSpace> out;
  std::map<Weight, std::vector<Vec>> groups;
  std::vector<Weight> order;
  auto to_weight = [&](const std::vector<double>& x) {
    Weight w(l);
    for (int i = 0; i < l; ++i) {
      w[i] = static_cast<int>(std::lround(x[i]));
      if (std::abs(x[i] - w[i]) > 1e-6) throw Error("non-integral weight in representation");
    }
    return w;
  };
  if (off < 1e-12 * scale) {
    for (int k = 0; k < n; ++k) {
      std::vector<double> x(l);
      for (int i = 0; i < l; ++i) x[i] = ops.h[i](k, k).real();
      Weight w = to_weight(x);
      if (!groups.count(w)) order.push_back(w);
      groups[w].push_back(Vec::Unit(n, k));
    }
  } else {
    static const double c[] = {1.0, 1.4142135623730951, 1.7320508075688772, 2.23606797749979,
                               2.6457513110645907, 3.3166247903554, 3.605551275463989, 4.123105625617661};
    Mat H = Mat::Zero(n, n);
    for (int i = 0; i < l; ++i) H += c[i % 8] * (1.0 + 0.1 * (i / 8)) * ops.h[i];
    H = 0.5 * (H + H.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    for (int k = 0; k < n; ++k) {
      Vec v = es.eigenvectors().col(k);
      std::vector<double> x(l);
      for (int i = 0; i < l; ++i) x[i] = (v.adjoint() * ops.h[i] * v)(0, 0).real();
      Weight w = to_weight(x);
      if (!groups.count(w)) order.push_back(w);
      groups[w].push_back(v);
    }
  }
  for (auto& w : order) {
    auto& vs = groups[w];
    Mat b(n, static_cast<Eigen::Index>(vs.size()));
    for (size_t k = 0; k < vs.size(); ++k) b.col(k) = vs[k];
    out.push_back({w, b});
  }
  return out;
}

namespace {

// Orthonormal basis (columns, in weight-space coordinates) of the joint kernel
// of the simple raising operators restricted to `ws`.
Mat highest_vectors(const ChevalleyOps& ops, const WeightSpace& ws, int l) {
  const int n = static_cast<int>(ws.basis.rows()), m = static_cast<int>(ws.basis.cols());
  Mat S(static_cast<Eigen::Index>(l) * n, m);
  double scale = 1.0;
  for (int i = 0; i < l; ++i) {
    const Mat& e = ops.e[i];  // simple roots come first
    S.block(static_cast<Eigen::Index>(i) * n, 0, n, m) = e * ws.basis;
    scale = std::max(scale, e.cwiseAbs().maxCoeff());
  }
  Eigen::JacobiSVD<Mat> svd(S, Eigen::ComputeFullV);
  int rank = 0;
  for (int k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()(k) > tol::rank * scale) ++rank;
  return svd.matrixV().rightCols(m - rank);
}

}  // namespace

std::map<Weight, int> decompose(const RepSpace& r) {
  const auto ops = chevalley_ops(r);
  const int l = static_cast<int>(ops.h.size());
  std::map<Weight, int> out;
  for (const auto& ws : weight_spaces(r)) {
    if (!is_dominant(ws.mu)) continue;
    int k = static_cast<int>(highest_vectors(ops, ws, l).cols());
    if (k > 0) out[ws.mu] = k;
  }
  return out;
}

Isometry cartan_projection(const RepSpace& source, const Irrep& target) {
  const auto ops = chevalley_ops(source);
  const int l = static_cast<int>(ops.h.size());
  const int n = source.dim();
  const auto spaces = weight_spaces(source);
  const WeightSpace* top = nullptr;
  for (auto& ws : spaces)
    if (ws.mu == target.hw) top = &ws;
  if (!top) throw Error("weight " + to_string(target.hw) + " does not occur in the source");
  Mat hv = highest_vectors(ops, *top, l);
  if (hv.cols() != 1)
    throw Error("highest weight " + to_string(target.hw) + " occurs with multiplicity " +
                std::to_string(hv.cols()) + ", expected exactly 1");
  Vec v = top->basis * hv.col(0);
  v.normalize();
  const double vmax = v.cwiseAbs().maxCoeff();
  for (int k = 0; k < n; ++k)
    if (std::abs(v(k)) > tol::rank * vmax) {
      v *= std::conj(v(k)) / std::abs(v(k));
      break;
    }

  // Embedding of the target, block by block down the lowering words.
  const auto& tc = target.chev;
  Mat iota = Mat::Zero(n, tc.dim);
  iota.col(0) = v;
  for (size_t bi = 1; bi < tc.blocks.size(); ++bi) {
    const auto& blk = tc.blocks[bi];
    std::vector<Vec> src, img;
    for (int i = 0; i < l; ++i) {
      auto it = tc.block_of.find(blk.mu + [&] {
        Weight a(l);
        for (int k = 0; k < l; ++k) a[k] = target.alg->diagram().cartan(i, k);
        return a;
      }());
      if (it == tc.block_of.end()) continue;
      const auto& up = tc.blocks[it->second];
      Mat fimg = ops.f[i] * iota.middleCols(up.offset, up.dim);
      for (int b = 0; b < up.dim; ++b) {
        RVec coords = tc.E[i].block(up.offset + b, blk.offset, 1, blk.dim).transpose();
        src.push_back(coords.cast<cplx>());
        img.push_back(fimg.col(b));
      }
    }
    Mat A(blk.dim, static_cast<Eigen::Index>(src.size())), Bm(n, static_cast<Eigen::Index>(img.size()));
    for (size_t c = 0; c < src.size(); ++c) A.col(c) = src[c], Bm.col(c) = img[c];
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(A.transpose());
    if (cod.rank() != blk.dim) throw Error("lowering words do not span a target weight space");
    Mat X = cod.solve(Bm.transpose());  // blk.dim x n
    iota.middleCols(blk.offset, blk.dim) = X.transpose();
  }
  return {iota.adjoint(), target.hw};
}

Isometry cartan_projection(const RepSpace& source, const Weight& target_hw, long long size_cap) {
  return cartan_projection(source, build_irrep(source.alg, target_hw, size_cap));
}

SerreReport check_serre(const Irrep& r, int root) {
  const auto& rs = r.alg->roots;
  SerreReport rep;
  rep.root = root < 0 ? rs.highest : root;
  int M = 0;
  for (const auto& w : r.weight_of_basis()) M = std::max(M, rs.coroot_pairing(w, rep.root));
  rep.exponent = M + 1;
  const Mat e = chevalley_ops(r).e[rep.root];
  const double en = opnorm(e);
  if (en == 0.0) return rep;
  Mat p = Mat::Identity(r.dim(), r.dim());
  for (int k = 0; k < M; ++k) p = (p * e).eval();
  rep.last_nonzero = opnorm(p) / std::pow(en, M);
  p = (p * e).eval();
  rep.residual = opnorm(p) / std::pow(en, M + 1);
  return rep;
}

double commutation_residual(const RepSpace& r) {
  const auto& g = *r.alg;
  double jmax = 0, res = 0;
  for (auto& j : r.J) jmax = std::max(jmax, opnorm(j));
  if (jmax == 0.0) return 0.0;
  for (int a = 0; a < g.dim; ++a)
    for (int b = a + 1; b < g.dim; ++b) {
      Mat c = commutator(r.J[a], r.J[b]);
      for (int k = 0; k < g.dim; ++k)
        if (g.C(a, b, k) != 0.0) c -= cplx(0, g.C(a, b, k)) * r.J[k];
      res = std::max(res, opnorm(c));
    }
  return res / (jmax * jmax);
}

double hermiticity_residual(const RepSpace& r) {
  double res = 0;
  for (auto& j : r.J) res = std::max(res, (j - j.adjoint()).cwiseAbs().maxCoeff());
  return res;
}

double intertwiner_residual(const Isometry& p, const RepSpace& source, const RepSpace& target) {
  double res = 0;
  for (size_t a = 0; a < source.J.size(); ++a)
    res = std::max(res, opnorm(p.matrix * source.J[a] - target.J[a] * p.matrix));
  return res;
}

double isometry_residual(const Isometry& p) {
  const auto k = p.matrix.rows();
  return opnorm(p.matrix * p.matrix.adjoint() - Mat::Identity(k, k));
}

}  // namespace fz
