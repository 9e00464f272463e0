#pragma once

#include "fuzzy/berezin.hpp"

namespace fz {

/// dim(N Lambda) and dim(N Lambda* + lambda); the module is zero when the
/// second weight is not dominant.
struct ModuleDims {
  int N = 0;
  bool zero = true;
  long long dim_algebra_factor = 0;
  long long dim_fiber_factor = 0;
  long long dim() const { return zero ? 0 : dim_algebra_factor * dim_fiber_factor; }
};

/// Level data of the module V^lambda_N = [A_N (x) (mu)] Q_N. The isometry W embeds
/// (N Lambda + lambda*) into (N Lambda) (x) (mu*) (left factor slow), Q = W W^*.
/// Module elements are d_N x dim(N Lambda + lambda*) matrices M; the full element
/// of A_N (x) (mu) is M W^*.
struct BundleLevel {
  int N = 0;
  bool zero = true;
  Weight nu_star;
  Mat W;
  Mat Q;
};

struct QInvariants {
  double idempotent = 0.0;
  double self_adjoint = 0.0;
  double equivariance = 0.0;
  long long rank = 0;
  long long expected_rank = 0;
};

struct RecursionReport {
  int N = 0;
  int target_level = 0;
  double residual = 0.0;
  double lhs_norm = 0.0;
  double rhs_norm = 0.0;
  bool transition = false;
};

struct CoarseGrainResult {
  Mat field;
  int level = 0;
  std::vector<double> dim_ratios;
};

class BundleQuantizer {
public:
  BundleQuantizer(std::shared_ptr<const Quantizer> q, Weight lambda);

  const Quantizer& base() const { return *q_; }
  const Weight& lambda() const { return lambda_; }
  const Weight& lambda_star() const { return lambda_star_; }
  /// Highest weight of the auxiliary factor (mu*): the dominant conjugate of lambda*.
  const Weight& mu_star() const { return mu_star_; }
  /// Smallest N with N Lambda* + lambda dominant (exact integer arithmetic).
  int transition_level() const { return transition_; }

  ModuleDims module_dims(int N) const;
  const BundleLevel& level(int N) const;
  QInvariants q_invariants(int N) const;

  /// [i_N (x) id] and [p_N (x) id] on A_N (x) End(mu*) or A_N (x) (mu).
  Mat i_tensor_id(const Mat& x, int N) const;
  Mat p_tensor_id(const Mat& x, int N, PForm form = PForm::trace) const;

  RecursionReport recursion_step_i(int N) const;
  RecursionReport recursion_step_p(int N) const;

  /// Pi_+ (1 (x) M) Pi_{lambda+}^*.
  Mat iota(const Mat& M, int N) const;
  /// [i_N (x) id](M W_N^*) W_{N+1}: the same map through the full algebra.
  Mat iota_chain(const Mat& M, int N) const;
  /// Restriction of p_N (x) id, expressed in the rectangular form at N-1.
  Mat pi(const Mat& M, int N) const;
  /// Pi_- (1 (x) M) Pi_{lambda-}^*, the analogue of iota through (Lambda*).
  Mat pi_minus_form(const Mat& M, int N) const;
  /// Distance of [p_N (x) id](M W_N^*) from the module V_{N-1}.
  double pi_landing_residual(const Mat& M, int N) const;

  /// Spectrum (sorted real parts) of pi_N o iota_{N-1} on V_{N-1}.
  std::vector<double> pi_iota_spectrum(int N) const;
  /// Rank of pi_N as a linear map V_N -> V_{N-1}.
  long long pi_rank(int N) const;

  /// Decomposition of V_N as a G-representation (N Lambda) (x) (N Lambda* + lambda).
  std::map<Weight, int> decompose_module(int N) const;

  CoarseGrainResult coarse_grain(const Mat& field, int N, int steps) const;

private:
  std::shared_ptr<const Quantizer> q_;
  Weight lambda_, lambda_star_, mu_star_;
  int transition_ = 0;
  std::unique_ptr<Irrep> mu_;
  mutable std::recursive_mutex mu_lock_;
  mutable std::map<int, std::unique_ptr<BundleLevel>> levels_;
  mutable std::map<int, std::unique_ptr<Irrep>> fibers_;
  mutable std::map<int, std::unique_ptr<Mat>> lplus_, lminus_;

  const Irrep& fiber_irrep(int N) const;
  const Mat& lambda_plus(int N) const;
  const Mat& lambda_minus(int N) const;
};

/// Smallest N with N Lambda* + lambda dominant; throws if there is none.
int transition_level(const DynkinDiagram& d, const Weight& Lambda, const Weight& lambda);

/// H-weight of the classical fiber [lambda*]^*, with H the isotropy group of Lambda.
struct FiberDescriptor {
  Weight weight;
  IsotropyDescriptor isotropy;
  bool one_dimensional = false;
};

FiberDescriptor classical_fiber(const DynkinDiagram& d, const Weight& Lambda, const Weight& lambda);

struct SectionLimitReport {
  int first_mismatch = -1;
  std::vector<std::map<Weight, int>> observed;
  std::vector<std::map<Weight, int>> expected;
};

/// A1: compares the decomposition of V^lambda_N with the initial segment
/// (|m|) + (|m|+1) + ... + (N-m) of the classical section space, m = -lambda/2.
SectionLimitReport verify_section_limit(const BundleQuantizer& b, int N_max);

}  // namespace fz
