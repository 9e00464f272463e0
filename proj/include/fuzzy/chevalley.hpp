#pragma once

#include "fuzzy/lie_core.hpp"

#include <map>

namespace fz {

/// Weight-space block of a constructed highest-weight module.
struct WeightBlock {
  Weight mu;
  int depth = 0;
  int offset = 0;
  int dim = 0;
};

/// Highest-weight module with orthonormal weight basis and real simple raising
/// operators E_i (lowering operators are E_i^T). Basis vector 0 is the
/// highest-weight vector; blocks are ordered by depth below the highest weight.
struct ChevalleyRep {
  Weight hw;
  int dim = 0;
  std::vector<WeightBlock> blocks;
  std::vector<Weight> weights;
  std::vector<RMat> E;
  std::map<Weight, int> block_of;
};

/// Cyclic construction from the highest-weight vector: lowering words, contravariant
/// Gram matrices per weight space, rank-revealing selection and a triangular
/// factorization in word order.
ChevalleyRep build_chevalley(const RootSystem& rs, const Weight& lambda, long long size_cap);

/// Closed-form spin matrices for A1 in the same conventions.
ChevalleyRep build_chevalley_a1(int n);

}  // namespace fz
