#pragma once

#include "fuzzy/numerics.hpp"

#include <functional>
#include <memory>
#include <mutex>

namespace fz {

/// Sparse polynomial in the moment coordinates x_a.
struct Polynomial {
  struct Term {
    cplx coeff;
    std::vector<int> powers;
  };
  int vars = 0;
  std::vector<Term> terms;

  static Polynomial constant(int vars, cplx c);
  static Polynomial coordinate(int vars, int a);
  /// Parses "1", "x1", "x1*x2^2 - 0.5*x3", ...
  static Polynomial parse(int vars, const std::string& text);

  int degree() const;
  cplx operator()(const RVec& x) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial scaled(cplx c) const;
  bool is_real() const;
};

struct FunctionSamples {
  std::vector<OrbitPoint> points;
  std::vector<cplx> values;
  int degree = -1;
};

enum class PForm { trace, pi_minus };
enum class KernelForm { factorized, direct };

/// Coherent-state quantization of O_Lambda: representations (N Lambda), their
/// Cartan-product isometries and the maps I_N, P_N, i_N, p_N, K_N. Levels are
/// built lazily and cached; the cache is guarded so one instance may be shared
/// between threads.
class Quantizer {
public:
  Quantizer(AlgebraPtr alg, Weight Lambda, long long size_cap = default_size_cap);

  const AlgebraPtr& algebra() const { return alg_; }
  const Weight& Lambda() const { return Lambda_; }
  const Irrep& ref() const { return *ref_; }
  const Irrep& dual_ref() const { return *dual_; }
  long long size_cap() const { return cap_; }

  /// (N Lambda); N = 0 is the trivial representation.
  const Irrep& level(int N) const;
  int dim(int N) const { return level(N).dim(); }
  /// Pi_+ : (Lambda) (x) (N Lambda) -> ((N+1) Lambda).
  const Mat& pi_plus(int N) const;
  /// Pi_- : (Lambda*) (x) (N Lambda) -> ((N-1) Lambda), N >= 1.
  const Mat& pi_minus(int N) const;

  Vec coherent(int N, const OrbitPoint& x) const;
  Mat coherent_projector(int N, const OrbitPoint& x) const;

  std::vector<cplx> symbol_I(const Mat& a, int N, const std::vector<OrbitPoint>& pts) const;
  cplx symbol_I(const Mat& a, int N, const OrbitPoint& x) const;

  /// dim(N Lambda) sum_k w_k f(x_k) e_N(x_k), accumulated in index order with
  /// compensated summation. Grid rules must be exact at degree 2N + deg f.
  Mat quantize_P(const Polynomial& f, int N, const QuadratureRule& q) const;
  Mat quantize_P(const std::function<cplx(const RVec&)>& f, int N, const QuadratureRule& q) const;
  Mat quantize_P(const FunctionSamples& f, int N, const QuadratureRule& q) const;
  /// Largest entrywise standard error of a Monte-Carlo estimate of P_N(f).
  double quantize_P_stderr(const Polynomial& f, int N, const QuadratureRule& q) const;
  /// Exact sphere grid for A1, Haar Monte-Carlo otherwise.
  QuadratureRule default_rule(int N, int f_degree, const RngSpec& rng = {}, int samples = 20000) const;

  Mat inject_i(const Mat& a, int N) const;
  /// Adjoint of i_{N-1} for normalized traces (trace form), or Pi_-(1 (x) a)Pi_-^*.
  Mat project_p(const Mat& a, int N, PForm form = PForm::trace) const;

  cplx kernel_K(int N, const OrbitPoint& x, const OrbitPoint& y, const OrbitPoint& z,
                KernelForm form = KernelForm::factorized) const;

  std::vector<cplx> star(const Polynomial& f1, const Polynomial& f2, int N, const std::vector<OrbitPoint>& pts,
                         const QuadratureRule& q) const;
  std::vector<cplx> poisson_estimate(const Polynomial& f1, const Polynomial& f2, int N,
                                     const std::vector<OrbitPoint>& pts, const QuadratureRule& q) const;

  /// X_a = J_a / N on (N Lambda).
  std::vector<Mat> coordinates(int N) const;

private:
  AlgebraPtr alg_;
  Weight Lambda_;
  long long cap_;
  std::unique_ptr<Irrep> ref_, dual_;
  mutable std::recursive_mutex mu_;
  mutable std::map<int, std::unique_ptr<Irrep>> levels_;
  mutable std::map<int, std::unique_ptr<Mat>> plus_, minus_;
  bool a1_;
};

/// Poisson bracket {f1,f2} = C^c_ab x_c d_a f1 d_b f2 of polynomials in x.
Polynomial poisson_bracket(const LieAlgebraData& g, const Polynomial& f1, const Polynomial& f2);

struct LocalExpansionReport {
  double radius = 0.0;
  int samples = 0;
  double max_discrepancy = 0.0;    // against 1 - |u|^2 - |z|^2 + <u|z>
  double unnormalized_residual = 0.0;  // kernel vs the rescaled-vector quotient
};

/// Samples pairs of chart coordinates of norm `radius` and compares
/// dim(Lambda)^-2 K_1(o, y, z) with its second-order expansion.
LocalExpansionReport kernel_local_expansion(const Quantizer& q, double radius, int samples, Rng& rng);

/// A1 only: unit vector of a sphere point (twice the moment coordinates).
Eigen::Vector3d sphere_direction(const Irrep& ref, const OrbitPoint& p);

}  // namespace fz
