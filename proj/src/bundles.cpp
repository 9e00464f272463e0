#include "fuzzy/bundles.hpp"

#include <algorithm>
#include <cmath>

namespace fz {

namespace {

// Partial trace over the slow (Lambda) factor of a matrix with dl x dl blocks.
Mat trace_slow(const Mat& M, int dl) {
  const Eigen::Index r = M.rows() / dl, c = M.cols() / dl;
  Mat out = Mat::Zero(r, c);
  for (int s = 0; s < dl; ++s) out += M.block(s * r, s * c, r, c);
  return out;
}

}  // namespace

int transition_level(const DynkinDiagram& d, const Weight& Lambda, const Weight& lambda) {
  if (lambda.size() != Lambda.size()) throw Error("weight length does not match rank");
  const Weight Ls = dual_weight(d, Lambda);
  int T = 0;
  for (size_t j = 0; j < lambda.size(); ++j) {
    if (lambda[j] >= 0) continue;
    if (Ls[j] == 0)
      throw Error("weight " + to_string(lambda) + " is not admissible: N Lambda* + lambda is never dominant");
    T = std::max(T, (-lambda[j] + Ls[j] - 1) / Ls[j]);
  }
  return T;
}

FiberDescriptor classical_fiber(const DynkinDiagram& d, const Weight& Lambda, const Weight& lambda) {
  transition_level(d, Lambda, lambda);
  const Weight ls = dual_weight(d, lambda);
  std::vector<int> unmarked, marks;
  for (int j = 0; j < d.rank; ++j) {
    if (Lambda[j] == 0)
      unmarked.push_back(j);
    else
      marks.push_back(d.nodes[j]);
  }
  FiberDescriptor f;
  f.isotropy = classify_isotropy(MarkedDiagram{d, marks});
  Weight neg = -1 * ls;
  f.weight = unmarked.empty() ? neg : dominant_conjugate(d, neg, unmarked);
  f.one_dimensional = true;
  for (int j : unmarked) f.one_dimensional = f.one_dimensional && f.weight[j] == 0;
  return f;
}

BundleQuantizer::BundleQuantizer(std::shared_ptr<const Quantizer> q, Weight lambda)
    : q_(std::move(q)), lambda_(std::move(lambda)) {
  const auto& d = q_->algebra()->diagram();
  transition_ = fz::transition_level(d, q_->Lambda(), lambda_);
  lambda_star_ = dual_weight(d, lambda_);
  mu_star_ = dominant_conjugate(d, lambda_star_);
  mu_ = std::make_unique<Irrep>(build_irrep(q_->algebra(), mu_star_, q_->size_cap()));
}

ModuleDims BundleQuantizer::module_dims(int N) const {
  ModuleDims m;
  m.N = N;
  const auto& rs = q_->algebra()->roots;
  Weight nu = N * dual_weight(rs.diagram, q_->Lambda()) + lambda_;
  m.dim_algebra_factor = weyl_dim(rs, N * q_->Lambda());
  m.zero = !is_dominant(nu);
  m.dim_fiber_factor = m.zero ? 0 : weyl_dim(rs, nu);
  return m;
}

const Irrep& BundleQuantizer::fiber_irrep(int N) const {
  std::lock_guard<std::recursive_mutex> lock(mu_lock_);
  auto& slot = fibers_[N];
  if (!slot) slot = std::make_unique<Irrep>(build_irrep(q_->algebra(), N * q_->Lambda() + lambda_star_, q_->size_cap()));
  return *slot;
}

const BundleLevel& BundleQuantizer::level(int N) const {
  if (N < 0) throw Error("level must be nonnegative");
  std::lock_guard<std::recursive_mutex> lock(mu_lock_);
  auto& slot = levels_[N];
  if (slot) return *slot;
  auto L = std::make_unique<BundleLevel>();
  L->N = N;
  L->nu_star = N * q_->Lambda() + lambda_star_;
  const int big = q_->dim(N) * mu_->dim();
  L->zero = N < transition_;
  if (L->zero) {
    L->W = Mat::Zero(big, 0);
  } else {
    RepSpace src = tensor(q_->level(N), *mu_);
    L->W = cartan_projection(src, fiber_irrep(N)).matrix.adjoint();
  }
  L->Q = L->W * L->W.adjoint();
  slot = std::move(L);
  return *slot;
}

QInvariants BundleQuantizer::q_invariants(int N) const {
  const BundleLevel& L = level(N);
  QInvariants r;
  const Mat& Q = L.Q;
  r.idempotent = opnorm(Q * Q - Q);
  r.self_adjoint = opnorm(Q - Q.adjoint());
  RepSpace src = tensor(q_->level(N), *mu_);
  for (const auto& j : src.J) r.equivariance = std::max(r.equivariance, opnorm(commutator(j, Q)));
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (Q + Q.adjoint()), Eigen::EigenvaluesOnly);
  for (int k = 0; k < es.eigenvalues().size(); ++k)
    if (es.eigenvalues()(k) > 0.5) ++r.rank;
  r.expected_rank = L.zero ? 0 : weyl_dim(q_->algebra()->roots, L.nu_star);
  return r;
}

Mat BundleQuantizer::i_tensor_id(const Mat& x, int N) const {
  const int dn = q_->dim(N), dm = mu_->dim(), dl = q_->ref().dim();
  const Mat K = kron(q_->pi_plus(N), Mat::Identity(dm, dm));
  const Mat Il = Mat::Identity(dl, dl);
  if (x.rows() == static_cast<Eigen::Index>(dn) * dm && x.cols() == x.rows()) return K * kron(Il, x) * K.adjoint();
  if (x.rows() == dn && x.cols() == static_cast<Eigen::Index>(dn) * dm)
    return q_->pi_plus(N) * kron(Il, x) * K.adjoint();
  throw Error("element does not live at level " + std::to_string(N));
}

Mat BundleQuantizer::p_tensor_id(const Mat& x, int N, PForm form) const {
  if (N < 1) throw Error("p_N needs N >= 1");
  const int dn = q_->dim(N), dp = q_->dim(N - 1), dm = mu_->dim();
  const bool square = x.rows() == static_cast<Eigen::Index>(dn) * dm && x.cols() == x.rows();
  if (!square && !(x.rows() == dn && x.cols() == static_cast<Eigen::Index>(dn) * dm))
    throw Error("element does not live at level " + std::to_string(N));
  const Mat Im = Mat::Identity(dm, dm);
  if (form == PForm::pi_minus) {
    const Mat& P = q_->pi_minus(N);
    const int dd = q_->dual_ref().dim();
    const Mat K = kron(P, Im);
    const Mat Id = Mat::Identity(dd, dd);
    return (square ? K : P) * kron(Id, x) * K.adjoint();
  }
  const Mat& P = q_->pi_plus(N - 1);
  const Mat K = kron(P, Im);
  const Mat M = (square ? K : P).adjoint() * x * K;
  return trace_slow(M, q_->ref().dim()) * (static_cast<double>(dp) / dn);
}

RecursionReport BundleQuantizer::recursion_step_i(int N) const {
  RecursionReport r;
  r.N = N;
  r.target_level = N + 1;
  const Mat lhs = i_tensor_id(level(N).Q, N);
  const Mat& rhs = level(N + 1).Q;
  r.residual = (lhs - rhs).norm();
  r.lhs_norm = lhs.norm();
  r.rhs_norm = rhs.norm();
  r.transition = N + 1 == transition_ && transition_ > 0;
  return r;
}

RecursionReport BundleQuantizer::recursion_step_p(int N) const {
  RecursionReport r;
  r.N = N;
  r.target_level = N - 1;
  const Mat lhs = p_tensor_id(level(N).Q, N);
  const Mat& rhs = level(N - 1).Q;
  r.residual = (lhs - rhs).norm();
  r.lhs_norm = lhs.norm();
  r.rhs_norm = rhs.norm();
  r.transition = N == transition_ && transition_ > 0;
  return r;
}

const Mat& BundleQuantizer::lambda_plus(int N) const {
  std::lock_guard<std::recursive_mutex> lock(mu_lock_);
  auto& slot = lplus_[N];
  if (!slot)
    slot = std::make_unique<Mat>(cartan_projection(tensor(q_->ref(), fiber_irrep(N)), fiber_irrep(N + 1)).matrix);
  return *slot;
}

const Mat& BundleQuantizer::lambda_minus(int N) const {
  std::lock_guard<std::recursive_mutex> lock(mu_lock_);
  auto& slot = lminus_[N];
  if (!slot)
    slot = std::make_unique<Mat>(
        cartan_projection(tensor(q_->dual_ref(), fiber_irrep(N)), fiber_irrep(N - 1)).matrix);
  return *slot;
}

Mat BundleQuantizer::iota(const Mat& M, int N) const {
  const BundleLevel& L = level(N);
  if (M.rows() != q_->dim(N) || M.cols() != L.W.cols()) throw Error("module element has the wrong shape");
  if (L.zero) return Mat::Zero(q_->dim(N + 1), level(N + 1).W.cols());
  const int dl = q_->ref().dim();
  return q_->pi_plus(N) * kron(Mat::Identity(dl, dl), M) * lambda_plus(N).adjoint();
}

Mat BundleQuantizer::iota_chain(const Mat& M, int N) const {
  const BundleLevel& L = level(N);
  if (M.rows() != q_->dim(N) || M.cols() != L.W.cols()) throw Error("module element has the wrong shape");
  return i_tensor_id(M * L.W.adjoint(), N) * level(N + 1).W;
}

Mat BundleQuantizer::pi(const Mat& M, int N) const {
  const BundleLevel& L = level(N);
  if (M.rows() != q_->dim(N) || M.cols() != L.W.cols()) throw Error("module element has the wrong shape");
  return p_tensor_id(M * L.W.adjoint(), N) * level(N - 1).W;
}

Mat BundleQuantizer::pi_minus_form(const Mat& M, int N) const {
  const BundleLevel& L = level(N);
  if (M.rows() != q_->dim(N) || M.cols() != L.W.cols()) throw Error("module element has the wrong shape");
  if (level(N - 1).zero) return Mat::Zero(q_->dim(N - 1), 0);
  const int dd = q_->dual_ref().dim();
  return q_->pi_minus(N) * kron(Mat::Identity(dd, dd), M) * lambda_minus(N).adjoint();
}

double BundleQuantizer::pi_landing_residual(const Mat& M, int N) const {
  const Mat x = p_tensor_id(M * level(N).W.adjoint(), N);
  return (x - x * level(N - 1).Q).norm();
}

namespace {

Mat linear_map_matrix(int rows_in, int cols_in, const std::function<Mat(const Mat&)>& f) {
  const int n = rows_in * cols_in;
  Mat A;
  for (int k = 0; k < n; ++k) {
    Mat E = Mat::Zero(rows_in, cols_in);
    E(k % rows_in, k / rows_in) = 1.0;
    Mat y = f(E);
    if (k == 0) A = Mat::Zero(y.size(), n);
    A.col(k) = Eigen::Map<const Vec>(y.data(), y.size());
  }
  return A;
}

}  // namespace

std::vector<double> BundleQuantizer::pi_iota_spectrum(int N) const {
  const BundleLevel& L = level(N - 1);
  std::vector<double> out;
  if (L.zero) return out;
  Mat A = linear_map_matrix(q_->dim(N - 1), static_cast<int>(L.W.cols()),
                            [&](const Mat& E) { return pi(iota(E, N - 1), N); });
  Eigen::ComplexEigenSolver<Mat> es(A, false);
  for (int k = 0; k < es.eigenvalues().size(); ++k) out.push_back(es.eigenvalues()(k).real());
  std::sort(out.begin(), out.end());
  return out;
}

long long BundleQuantizer::pi_rank(int N) const {
  const BundleLevel& L = level(N);
  if (L.zero) return 0;
  Mat A = linear_map_matrix(q_->dim(N), static_cast<int>(L.W.cols()), [&](const Mat& E) { return pi(E, N); });
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(A);
  const auto& s = svd.singularValues();
  const double top = s.size() ? s(0) : 0.0;
  long long r = 0;
  for (int k = 0; k < s.size(); ++k)
    if (s(k) > tol::rank * std::max(top, 1e-300)) ++r;
  return r;
}

std::map<Weight, int> BundleQuantizer::decompose_module(int N) const {
  const ModuleDims m = module_dims(N);
  if (m.zero) return {};
  const auto& d = q_->algebra()->diagram();
  Irrep fib = build_irrep(q_->algebra(), N * dual_weight(d, q_->Lambda()) + lambda_, q_->size_cap());
  return decompose(tensor(q_->level(N), fib));
}

CoarseGrainResult BundleQuantizer::coarse_grain(const Mat& field, int N, int steps) const {
  if (steps < 0) throw Error("step count must be nonnegative");
  if (N - steps < transition_) throw Error("coarse-graining would step past the zero module");
  CoarseGrainResult r;
  r.field = field;
  r.level = N;
  for (int s = 0; s < steps; ++s) {
    const double num = static_cast<double>(module_dims(r.level).dim());
    const double den = static_cast<double>(module_dims(r.level - 1).dim());
    r.field = pi(r.field, r.level);
    r.dim_ratios.push_back(num / den);
    --r.level;
  }
  return r;
}

SectionLimitReport verify_section_limit(const BundleQuantizer& b, int N_max) {
  const auto& d = b.base().algebra()->diagram();
  if (d.series != 'A' || d.rank != 1) throw Error("section-limit comparison is implemented for A1");
  const int k = b.base().Lambda()[0];
  const int lam = b.lambda()[0];
  SectionLimitReport rep;
  for (int N = 0; N <= N_max; ++N) {
    auto obs = b.decompose_module(N);
    std::map<Weight, int> exp;
    if (!b.module_dims(N).zero)
      for (int w = std::abs(lam); w <= 2 * N * k + lam; w += 2) exp[{w}] = 1;
    if (obs != exp && rep.first_mismatch < 0) rep.first_mismatch = N;
    rep.observed.push_back(std::move(obs));
    rep.expected.push_back(std::move(exp));
  }
  return rep;
}

}  // namespace fz
