#include "fuzzy/chevalley.hpp"

#include <cmath>
#include <set>

namespace fz {

namespace {

Weight simple_root_weight(const DynkinDiagram& d, int i) {
  Weight w(d.rank);
  for (int k = 0; k < d.rank; ++k) w[k] = d.cartan(i, k);
  return w;
}

}  // namespace

ChevalleyRep build_chevalley(const RootSystem& rs, const Weight& lambda, long long size_cap) {
  const auto& dg = rs.diagram;
  const int l = dg.rank;
  if (static_cast<int>(lambda.size()) != l) throw Error("weight length does not match rank");
  if (!is_dominant(lambda)) throw Error("highest weight must be dominant: " + to_string(lambda));
  const long long D = weyl_dim(rs, lambda);
  if (D > size_cap)
    throw Error("representation " + to_string(lambda) + " has dimension " + std::to_string(D) +
                " above the size cap " + std::to_string(size_cap));

  std::vector<Weight> alpha(l);
  for (int i = 0; i < l; ++i) alpha[i] = simple_root_weight(dg, i);

  ChevalleyRep rep;
  rep.hw = lambda;
  rep.dim = static_cast<int>(D);
  rep.E.assign(l, RMat::Zero(D, D));
  rep.blocks.push_back({lambda, 0, 0, 1});
  rep.block_of[lambda] = 0;
  rep.weights.push_back(lambda);
  int filled = 1;

  auto find_block = [&](const Weight& w) -> const WeightBlock* {
    auto it = rep.block_of.find(w);
    return it == rep.block_of.end() ? nullptr : &rep.blocks[it->second];
  };

  std::vector<int> frontier{0};
  int depth = 0;
  while (!frontier.empty()) {
    ++depth;
    std::vector<Weight> next;
    std::set<Weight> seen;
    for (int bi : frontier)
      for (int i = 0; i < l; ++i) {
        Weight nu = rep.blocks[bi].mu - alpha[i];
        if (!rep.block_of.count(nu) && seen.insert(nu).second) next.push_back(nu);
      }
    std::vector<int> new_frontier;
    for (const Weight& nu : next) {
      struct Cand {
        int i;
        int b;
      };
      std::vector<Cand> cands;
      for (int i = 0; i < l; ++i)
        if (auto* beta = find_block(nu + alpha[i]))
          for (int k = 0; k < beta->dim; ++k) cands.push_back({i, beta->offset + k});
      const int nc = static_cast<int>(cands.size());
      if (nc == 0) continue;

      // E_j applied to each candidate F_i b, in local coordinates of block(nu + a_j).
      std::vector<const WeightBlock*> gamma(l);
      for (int j = 0; j < l; ++j) gamma[j] = find_block(nu + alpha[j]);
      std::vector<std::vector<RVec>> ec(nc, std::vector<RVec>(l));
      for (int c = 0; c < nc; ++c) {
        const int i = cands[c].i, b = cands[c].b;
        for (int j = 0; j < l; ++j) {
          const WeightBlock* g = gamma[j];
          if (!g) continue;
          RVec v = RVec::Zero(g->dim);
          if (const WeightBlock* dl = find_block(nu + alpha[i] + alpha[j])) {
            v += rep.E[i].block(dl->offset, g->offset, dl->dim, g->dim).transpose() *
                 rep.E[j].block(dl->offset, b, dl->dim, 1);
          }
          if (i == j) v(b - g->offset) += (nu + alpha[i])[i];
          ec[c][j] = v;
        }
      }
      RMat G(nc, nc);
      for (int c = 0; c < nc; ++c)
        for (int cp = 0; cp < nc; ++cp) {
          const int i = cands[c].i;
          G(c, cp) = ec[cp][i](cands[c].b - gamma[i]->offset);
        }
      if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + G.cwiseAbs().maxCoeff()))
        throw Error("contravariant form is not symmetric at weight " + to_string(nu));
      G = 0.5 * (G + G.transpose());
      Eigen::SelfAdjointEigenSolver<RMat> es(G);
      // Gram entries are O(1) or larger for nonzero weight spaces.
      const double top = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
      if (es.eigenvalues().minCoeff() < -tol::rank * top)
        throw Error("contravariant form is not positive at weight " + to_string(nu));
      int r = 0;
      for (int k = 0; k < nc; ++k)
        if (es.eigenvalues()(k) > tol::rank * top) ++r;
      if (r == 0) continue;

      // Candidate x_c has coordinates Y(:, c) = sqrt(ev) V(c, :) in the orthonormal eigenbasis
      // e_b = x V_b / sqrt(ev_b). In-order Gram-Schmidt on Y keeps the triangular word ordering.
      const RVec ev = es.eigenvalues().tail(r);
      const RMat V = es.eigenvectors().rightCols(r);
      const RMat Y = ev.cwiseSqrt().asDiagonal() * V.transpose();
      RMat U(r, r);
      int found = 0;
      for (int c = 0; c < nc && found < r; ++c) {
        RVec v = Y.col(c);
        for (int pass = 0; pass < 2; ++pass) v -= U.leftCols(found) * (U.leftCols(found).transpose() * v);
        if (v.squaredNorm() > tol::rank * top) U.col(found++) = v.normalized();
      }
      if (found != r) throw Error("numerical degeneracy in weight space " + to_string(nu));
      const RMat coords = U.transpose() * Y;
      const RMat T = (ev.cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose()).transpose() * U;

      WeightBlock blk{nu, depth, filled, r};
      if (filled + r > D) throw Error("weight multiplicities exceed the Weyl dimension");
      for (int c = 0; c < nc; ++c) {
        const int i = cands[c].i, b = cands[c].b;
        for (int a = 0; a < r; ++a) rep.E[i](b, filled + a) = coords(a, c);
      }
      // Cross-check: E_j u_a from the candidate expansion.
      for (int j = 0; j < l; ++j) {
        if (!gamma[j]) continue;
        RMat Eu = RMat::Zero(gamma[j]->dim, r);
        for (int a = 0; a < r; ++a)
          for (int c = 0; c < nc; ++c) Eu.col(a) += T(c, a) * ec[c][j];
        double diff = (Eu - rep.E[j].block(gamma[j]->offset, filled, gamma[j]->dim, r)).cwiseAbs().maxCoeff();
        if (diff > 1e-7 * (1.0 + Eu.cwiseAbs().maxCoeff()))
          throw Error("raising operator mismatch at weight " + to_string(nu));
      }
      rep.block_of[nu] = static_cast<int>(rep.blocks.size());
      rep.blocks.push_back(blk);
      for (int a = 0; a < r; ++a) rep.weights.push_back(nu);
      new_frontier.push_back(static_cast<int>(rep.blocks.size()) - 1);
      filled += r;
    }
    frontier = new_frontier;
  }
  if (filled != D)
    throw Error("constructed dimension " + std::to_string(filled) + " differs from Weyl dimension " +
                std::to_string(D));
  return rep;
}

ChevalleyRep build_chevalley_a1(int n) {
  if (n < 0) throw Error("highest weight must be dominant");
  ChevalleyRep rep;
  rep.hw = {n};
  rep.dim = n + 1;
  rep.E.assign(1, RMat::Zero(n + 1, n + 1));
  const double j = 0.5 * n;
  for (int k = 0; k <= n; ++k) {
    Weight w{n - 2 * k};
    rep.blocks.push_back({w, k, k, 1});
    rep.block_of[w] = k;
    rep.weights.push_back(w);
    if (k > 0) {
      const double m = j - k;
      rep.E[0](k - 1, k) = std::sqrt((j - m) * (j + m + 1));
    }
  }
  return rep;
}

}  // namespace fz
