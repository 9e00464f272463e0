#pragma once

#include "fuzzy/chevalley.hpp"
#include "fuzzy/lie_core.hpp"

#include <map>
#include <string>

namespace fz {

/// Default upper bound on representation dimensions.
inline constexpr long long default_size_cap = 2000;

/// Possibly reducible representation given by self-adjoint generators J_a.
struct RepSpace {
  AlgebraPtr alg;
  std::vector<Mat> J;
  std::string provenance;

  int dim() const { return J.empty() ? 0 : static_cast<int>(J[0].rows()); }
};

/// Irreducible highest-weight representation with its weight basis.
struct Irrep : RepSpace {
  Weight hw;
  ChevalleyRep chev;
  Vec hw_vector;

  const std::vector<Weight>& weight_of_basis() const { return chev.weights; }
};

/// Chevalley-type operators (h_i, e_r, f_r) acting on a representation.
struct ChevalleyOps {
  std::vector<Mat> h;
  std::vector<Mat> e;
  std::vector<Mat> f;
};

ChevalleyOps chevalley_ops(const RepSpace& r);

/// Generic construction, with closed-form matrix elements for A1 when `fast_a1` is set.
Irrep build_irrep(const AlgebraPtr& alg, const Weight& lambda, long long size_cap = default_size_cap,
                  bool fast_a1 = true);

/// Generators J_a (x) 1 + 1 (x) J_a; the left factor is the slow index.
RepSpace tensor(const RepSpace& a, const RepSpace& b);

/// Row-orthonormal intertwiner from `source` onto an irreducible `target`.
struct Isometry {
  Mat matrix;
  Weight target_hw;
};

Isometry cartan_projection(const RepSpace& source, const Irrep& target);
Isometry cartan_projection(const RepSpace& source, const Weight& target_hw,
                           long long size_cap = default_size_cap);

/// sum g^{ab} J_a J_b.
Mat casimir_matrix(const RepSpace& r);
/// Scalar value of the quadratic Casimir; throws when the operator is not scalar.
double casimir_eigenvalue(const RepSpace& r, double rel_tol = tol::identity);

struct WeightSpace {
  Weight mu;
  Mat basis;  // orthonormal columns
};

std::vector<WeightSpace> weight_spaces(const RepSpace& r);

/// Highest weights with multiplicities.
std::map<Weight, int> decompose(const RepSpace& r);

struct SerreReport {
  int root = -1;
  int exponent = 0;
  double residual = 0.0;
  double last_nonzero = 0.0;
};

/// ||e_r^{k}|| / ||e_r||^{k} in operator norm, with k one more than the longest
/// r-string through the weights of `r`. Defaults to the highest root; for A1 this
/// is the relation J_+^{N+1} = 0 (the ratio does not depend on the scale of J_+).
SerreReport check_serre(const Irrep& r, int root = -1);

/// max_{a,b} ||[J_a,J_b] - i C^c_ab J_c|| / max_a ||J_a||^2.
double commutation_residual(const RepSpace& r);
double hermiticity_residual(const RepSpace& r);
/// max_a ||Pi J^source_a - J^target_a Pi||.
double intertwiner_residual(const Isometry& p, const RepSpace& source, const RepSpace& target);
double isometry_residual(const Isometry& p);

}  // namespace fz
