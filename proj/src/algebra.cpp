#include "fuzzy/chevalley.hpp"
#include "fuzzy/lie_core.hpp"

#include <cmath>

namespace fz {

namespace {

// Standard label (1-based) of the faithful reference representation.
int reference_node(const DynkinDiagram& d) {
  switch (d.series) {
    case 'F': return 4;
    case 'E': return d.rank == 6 ? 1 : d.rank;
    default: return 1;
  }
}

}  // namespace

AlgebraPtr algebra_data(const DynkinDiagram& d) {
  auto g = std::make_shared<LieAlgebraData>(LieAlgebraData{RootSystem(d), 0, {}, {}, {}, {}, {}, {}, {}, 1.0});
  const RootSystem& rs = g->roots;
  const int l = d.rank;
  const int P = rs.num_positive();
  g->dim = l + 2 * P;

  Weight ref(l, 0);
  ref[d.canon[reference_node(d) - 1]] = 1;
  g->reference_hw = ref;
  ChevalleyRep rep = build_chevalley(rs, ref, 4096);
  const int n = rep.dim;

  // Chevalley-type basis realized in the reference representation.
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
    if (e[r].norm() < 1e-9) throw Error("vanishing root vector in reference representation");
  }
  std::vector<Mat> B;
  for (auto& x : h) B.push_back(x);
  for (auto& x : e) B.push_back(x);
  for (auto& x : f) B.push_back(x);

  // Invariant form s*tr(XY), scaled so that h_theta/2 has unit norm.
  Mat htheta = Mat::Zero(n, n);
  for (int j = 0; j < l; ++j)
    htheta += static_cast<double>(rs.positive[rs.highest][j]) * d.len2[j] / rs.len2(rs.highest) * h[j];
  const double s = 1.0 / (0.25 * (htheta * htheta).trace().real());
  g->trace_scale = s;
  auto form = [s](const Mat& x, const Mat& y) { return s * (x * y).trace(); };

  std::vector<Mat> J;
  for (int r = 0; r < P; ++r) {
    Mat X = e[r] + e[r].adjoint();
    Mat Y = cplx(0, -1) * (e[r] - e[r].adjoint());
    J.push_back(X / std::sqrt(form(X, X).real()));
    J.push_back(Y / std::sqrt(form(Y, Y).real()));
  }
  std::vector<Mat> H;
  for (int i = 0; i < l; ++i) {
    Mat v = h[i];
    for (auto& u : H) v -= form(u, v) * u;
    H.push_back(v / std::sqrt(form(v, v).real()));
  }
  for (auto& x : H) J.push_back(x);
  const int dim = g->dim;

  // Change of basis J_a = sum_k M(a,k) B_k by least squares on vectorized matrices.
  Mat A(static_cast<Eigen::Index>(n) * n, dim), R(static_cast<Eigen::Index>(n) * n, dim);
  for (int k = 0; k < dim; ++k) {
    A.col(k) = Eigen::Map<const Vec>(B[k].data(), n * n);
    R.col(k) = Eigen::Map<const Vec>(J[k].data(), n * n);
  }
  Eigen::ColPivHouseholderQR<Mat> qr(A);
  if (qr.rank() != dim) throw Error("Chevalley basis is degenerate in the reference representation");
  Mat M = qr.solve(R);  // columns: coefficients of J_a
  if ((A * M - R).norm() > 1e-9 * R.norm()) throw Error("compact basis outside Chevalley span");
  g->to_chevalley = M.transpose();
  g->from_chevalley = g->to_chevalley.inverse();

  g->J = J;
  g->metric = RMat(dim, dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) g->metric(a, b) = form(J[a], J[b]).real();
  g->inverse_metric = g->metric.inverse();
  g->structure.assign(static_cast<size_t>(dim) * dim * dim, 0.0);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      Mat c = commutator(J[a], J[b]);
      for (int k = 0; k < dim; ++k) {
        cplx v = cplx(0, -1) * form(c, J[k]);
        g->structure[(a * dim + b) * dim + k] = v.real();
      }
    }
  return g;
}

double structure_antisymmetry_residual(const LieAlgebraData& g) {
  double r = 0;
  for (int a = 0; a < g.dim; ++a)
    for (int b = 0; b < g.dim; ++b)
      for (int c = 0; c < g.dim; ++c) r = std::max(r, std::abs(g.C(a, b, c) + g.C(b, a, c)));
  return r;
}

double structure_jacobi_residual(const LieAlgebraData& g) {
  // sum_d C^d_ab C^e_dc + C^d_bc C^e_da + C^d_ca C^e_db = 0
  double r = 0;
  const int n = g.dim;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int e = 0; e < n; ++e) {
          double s = 0;
          for (int d = 0; d < n; ++d)
            s += g.C(a, b, d) * g.C(d, c, e) + g.C(b, c, d) * g.C(d, a, e) + g.C(c, a, d) * g.C(d, b, e);
          r = std::max(r, std::abs(s));
        }
  return r;
}

}  // namespace fz
