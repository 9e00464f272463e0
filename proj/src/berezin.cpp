#include "fuzzy/berezin.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

namespace fz {

namespace {

cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  while (n > 0) {
    if (n & 1) r *= z;
    z *= z;
    n >>= 1;
  }
  return r;
}

Polynomial derivative(const Polynomial& p, int a) {
  Polynomial d;
  d.vars = p.vars;
  for (const auto& t : p.terms)
    if (t.powers[a] > 0) {
      auto pw = t.powers;
      const double k = pw[a]--;
      d.terms.push_back({t.coeff * k, pw});
    }
  return d;
}

}  // namespace

Polynomial Polynomial::constant(int vars, cplx c) {
  Polynomial p;
  p.vars = vars;
  p.terms.push_back({c, std::vector<int>(vars, 0)});
  return p;
}

Polynomial Polynomial::coordinate(int vars, int a) {
  if (a < 0 || a >= vars) throw Error("coordinate index out of range");
  Polynomial p = constant(vars, 1.0);
  p.terms[0].powers[a] = 1;
  return p;
}

Polynomial Polynomial::parse(int vars, const std::string& text) {
  Polynomial out;
  out.vars = vars;
  size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto number = [&]() -> double {
    size_t used = 0;
    double v = std::stod(text.substr(i), &used);
    i += used;
    return v;
  };
  skip();
  if (i == text.size()) throw Error("empty polynomial");
  bool first = true;
  while (true) {
    skip();
    if (i == text.size()) break;
    double sign = 1.0;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1.0 : 1.0;
      ++i;
    } else if (!first) {
      throw Error("expected '+' or '-' in polynomial '" + text + "'");
    }
    first = false;
    Term t{sign, std::vector<int>(vars, 0)};
    bool factor = false;
    while (true) {
      skip();
      if (i < text.size() && text[i] == 'x') {
        ++i;
        size_t used = 0;
        int a = std::stoi(text.substr(i), &used) - 1;
        i += used;
        if (a < 0 || a >= vars) throw Error("variable index out of range in '" + text + "'");
        int pw = 1;
        skip();
        if (i < text.size() && text[i] == '^') {
          ++i;
          pw = std::stoi(text.substr(i), &used);
          i += used;
          if (pw < 0) throw Error("negative exponent in '" + text + "'");
        }
        t.powers[a] += pw;
      } else if (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) {
        t.coeff *= number();
      } else {
        throw Error("malformed polynomial '" + text + "'");
      }
      factor = true;
      skip();
      if (i < text.size() && text[i] == '*') {
        ++i;
        continue;
      }
      break;
    }
    if (!factor) throw Error("malformed polynomial '" + text + "'");
    out.terms.push_back(t);
  }
  return out;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms) {
    int s = 0;
    for (int p : t.powers) s += p;
    if (t.coeff != cplx(0)) d = std::max(d, s);
  }
  return d;
}

cplx Polynomial::operator()(const RVec& x) const {
  cplx s = 0;
  for (const auto& t : terms) {
    cplx v = t.coeff;
    for (int a = 0; a < vars; ++a)
      for (int k = 0; k < t.powers[a]; ++k) v *= x(a);
    s += v;
  }
  return s;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial p;
  p.vars = vars;
  for (const auto& a : terms)
    for (const auto& b : o.terms) {
      Term t{a.coeff * b.coeff, a.powers};
      for (int k = 0; k < vars; ++k) t.powers[k] += b.powers[k];
      p.terms.push_back(t);
    }
  return p;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial p = *this;
  p.terms.insert(p.terms.end(), o.terms.begin(), o.terms.end());
  return p;
}

Polynomial Polynomial::scaled(cplx c) const {
  Polynomial p = *this;
  for (auto& t : p.terms) t.coeff *= c;
  return p;
}

bool Polynomial::is_real() const {
  for (const auto& t : terms)
    if (t.coeff.imag() != 0.0) return false;
  return true;
}

Quantizer::Quantizer(AlgebraPtr alg, Weight Lambda, long long size_cap)
    : alg_(std::move(alg)), Lambda_(std::move(Lambda)), cap_(size_cap) {
  if (!is_dominant(Lambda_)) throw Error("orbit weight must be dominant");
  bool zero = true;
  for (int c : Lambda_) zero = zero && c == 0;
  if (zero) throw Error("the orbit of 0 is a point; choose a nonzero weight");
  ref_ = std::make_unique<Irrep>(build_irrep(alg_, Lambda_, cap_));
  dual_ = std::make_unique<Irrep>(build_irrep(alg_, dual_weight(alg_->diagram(), Lambda_), cap_));
  a1_ = alg_->diagram().series == 'A' && alg_->rank() == 1;
}

const Irrep& Quantizer::level(int N) const {
  if (N < 0) throw Error("level must be nonnegative");
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto& slot = levels_[N];
  if (!slot) slot = std::make_unique<Irrep>(build_irrep(alg_, N * Lambda_, cap_));
  return *slot;
}

const Mat& Quantizer::pi_plus(int N) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto& slot = plus_[N];
  if (!slot) slot = std::make_unique<Mat>(cartan_projection(tensor(*ref_, level(N)), level(N + 1)).matrix);
  return *slot;
}

const Mat& Quantizer::pi_minus(int N) const {
  if (N < 1) throw Error("Pi_- needs N >= 1");
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto& slot = minus_[N];
  if (!slot) slot = std::make_unique<Mat>(cartan_projection(tensor(*dual_, level(N)), level(N - 1)).matrix);
  return *slot;
}

Vec Quantizer::coherent(int N, const OrbitPoint& x) const {
  if (a1_) {
    // Symmetric power of the spin-1/2 coherent vector.
    RepSpace fund{alg_, alg_->J, "fundamental"};
    const Vec ab = group_element(fund, x.theta).col(0).normalized();
    const int n = N * Lambda_[0];
    Vec v(n + 1);
    for (int k = 0; k <= n; ++k) {
      const double lc = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
      v(k) = std::exp(lc) * ipow(ab(0), n - k) * ipow(ab(1), k);
    }
    return v.normalized();
  }
  const Irrep& r = level(N);
  return (group_element(r, x.theta) * r.hw_vector).normalized();
}

Mat Quantizer::coherent_projector(int N, const OrbitPoint& x) const {
  const Vec v = coherent(N, x);
  return v * v.adjoint();
}

cplx Quantizer::symbol_I(const Mat& a, int N, const OrbitPoint& x) const {
  if (a.rows() != dim(N) || a.cols() != dim(N)) throw Error("operator does not act on level " + std::to_string(N));
  const Vec v = coherent(N, x);
  return v.dot(a * v);
}

std::vector<cplx> Quantizer::symbol_I(const Mat& a, int N, const std::vector<OrbitPoint>& pts) const {
  std::vector<cplx> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(symbol_I(a, N, p));
  return out;
}

Mat Quantizer::quantize_P(const std::function<cplx(const RVec&)>& f, int N, const QuadratureRule& q) const {
  const int d = dim(N);
  KahanMatrix acc(d, d);
  for (size_t k = 0; k < q.nodes.size(); ++k) {
    const cplx c = static_cast<double>(d) * q.weights[k] * f(moment(*ref_, q.nodes[k]));
    if (c == cplx(0)) continue;
    const Vec v = coherent(N, q.nodes[k]);
    acc.add(c * (v * v.adjoint()));
  }
  return acc.sum();
}

Mat Quantizer::quantize_P(const Polynomial& f, int N, const QuadratureRule& q) const {
  if (q.kind == "gauss-s2") {
    const int need = 2 * N * Lambda_[0] + f.degree();
    if (q.degree < need)
      throw Error("quadrature degree " + std::to_string(q.degree) + " is below the required " + std::to_string(need));
  }
  return quantize_P([&f](const RVec& x) { return f(x); }, N, q);
}

Mat Quantizer::quantize_P(const FunctionSamples& f, int N, const QuadratureRule& q) const {
  if (f.values.size() != q.nodes.size()) throw Error("samples do not match the quadrature nodes");
  const int d = dim(N);
  KahanMatrix acc(d, d);
  for (size_t k = 0; k < q.nodes.size(); ++k) {
    const Vec v = coherent(N, q.nodes[k]);
    acc.add(static_cast<double>(d) * q.weights[k] * f.values[k] * (v * v.adjoint()));
  }
  return acc.sum();
}

double Quantizer::quantize_P_stderr(const Polynomial& f, int N, const QuadratureRule& q) const {
  const int d = dim(N);
  const double n = static_cast<double>(q.nodes.size());
  if (n < 2) return std::numeric_limits<double>::infinity();
  RMat s1 = RMat::Zero(d, d), s2 = RMat::Zero(d, d);
  for (size_t k = 0; k < q.nodes.size(); ++k) {
    const Vec v = coherent(N, q.nodes[k]);
    const Mat x = static_cast<double>(d) * f(moment(*ref_, q.nodes[k])) * (v * v.adjoint());
    s1 += x.cwiseAbs();
    s2 += x.cwiseAbs2();
  }
  RMat var = (s2 - s1.cwiseAbs2() / n) / (n - 1);
  return std::sqrt(var.maxCoeff() / n);
}

QuadratureRule Quantizer::default_rule(int N, int f_degree, const RngSpec& rng, int samples) const {
  if (a1_) return s2_grid(*ref_, 2 * N * Lambda_[0] + f_degree);
  return haar_rule(*ref_, rng, samples);
}

Mat Quantizer::inject_i(const Mat& a, int N) const {
  if (a.rows() != dim(N)) throw Error("operator does not act on level " + std::to_string(N));
  const Mat& P = pi_plus(N);
  return P * kron(Mat::Identity(ref_->dim(), ref_->dim()), a) * P.adjoint();
}

Mat Quantizer::project_p(const Mat& a, int N, PForm form) const {
  if (N < 1) throw Error("p_N needs N >= 1");
  if (a.rows() != dim(N)) throw Error("operator does not act on level " + std::to_string(N));
  if (form == PForm::pi_minus) {
    const Mat& P = pi_minus(N);
    return P * kron(Mat::Identity(dual_->dim(), dual_->dim()), a) * P.adjoint();
  }
  const Mat& P = pi_plus(N - 1);
  const Mat M = P.adjoint() * a * P;
  const int dl = ref_->dim(), dm = dim(N - 1);
  Mat out = Mat::Zero(dm, dm);
  for (int s = 0; s < dl; ++s) out += M.block(s * dm, s * dm, dm, dm);
  return out * (static_cast<double>(dm) / dim(N));
}

cplx Quantizer::kernel_K(int N, const OrbitPoint& x, const OrbitPoint& y, const OrbitPoint& z,
                         KernelForm form) const {
  const double d = dim(N);
  if (form == KernelForm::direct) {
    const Vec vx = coherent(N, x), vy = coherent(N, y), vz = coherent(N, z);
    return d * d * vx.dot(vy) * vy.dot(vz) * vz.dot(vx);
  }
  const Vec vx = x.coherent(*ref_), vy = y.coherent(*ref_), vz = z.coherent(*ref_);
  return d * d * ipow(vx.dot(vy), N) * ipow(vy.dot(vz), N) * ipow(vz.dot(vx), N);
}

std::vector<cplx> Quantizer::star(const Polynomial& f1, const Polynomial& f2, int N,
                                  const std::vector<OrbitPoint>& pts, const QuadratureRule& q) const {
  const Mat a = quantize_P(f1, N, q) * quantize_P(f2, N, q);
  return symbol_I(a, N, pts);
}

std::vector<cplx> Quantizer::poisson_estimate(const Polynomial& f1, const Polynomial& f2, int N,
                                              const std::vector<OrbitPoint>& pts, const QuadratureRule& q) const {
  const Mat p1 = quantize_P(f1, N, q), p2 = quantize_P(f2, N, q);
  auto v = symbol_I(commutator(p1, p2), N, pts);
  for (auto& c : v) c *= cplx(0, -static_cast<double>(N));
  return v;
}

std::vector<Mat> Quantizer::coordinates(int N) const {
  if (N < 1) throw Error("coordinates need N >= 1");
  std::vector<Mat> X;
  for (const auto& j : level(N).J) X.push_back(j / static_cast<double>(N));
  return X;
}

Polynomial poisson_bracket(const LieAlgebraData& g, const Polynomial& f1, const Polynomial& f2) {
  Polynomial out;
  out.vars = g.dim;
  std::vector<Polynomial> d1, d2;
  for (int a = 0; a < g.dim; ++a) d1.push_back(derivative(f1, a)), d2.push_back(derivative(f2, a));
  for (int a = 0; a < g.dim; ++a)
    for (int b = 0; b < g.dim; ++b) {
      if (d1[a].terms.empty() || d2[b].terms.empty()) continue;
      for (int c = 0; c < g.dim; ++c) {
        const double C = g.C(a, b, c);
        if (std::abs(C) < 1e-14) continue;
        out = out + (Polynomial::coordinate(g.dim, c) * d1[a] * d2[b]).scaled(C);
      }
    }
  return out;
}

LocalExpansionReport kernel_local_expansion(const Quantizer& q, double radius, int samples, Rng& rng) {
  const Irrep& ref = q.ref();
  const Chart chart = orbit_chart(ref);
  const int n = static_cast<int>(chart.roots.size());
  const double d = ref.dim();
  const OrbitPoint o = base_point(ref);
  LocalExpansionReport rep;
  rep.radius = radius;
  rep.samples = samples;
  auto draw = [&] {
    Vec u(n);
    for (int k = 0; k < n; ++k) {
      const double re = rng.normal(), im = rng.normal();
      u(k) = cplx(re, im);
    }
    return Vec(u * (radius / u.norm()));
  };
  for (int s = 0; s < samples; ++s) {
    const Vec u = draw(), z = draw();
    const OrbitPoint py = orbit_exp(ref, chart, u), pz = orbit_exp(ref, chart, z);
    const cplx k = q.kernel_K(1, o, py, pz) / (d * d);
    const cplx approx = 1.0 - u.squaredNorm() - z.squaredNorm() + u.dot(z);
    rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(k - approx));
    // Rescaled vectors with <Psi|y> = 1.
    Vec vy = py.coherent(ref), vz = pz.coherent(ref);
    vy /= ref.hw_vector.dot(vy);
    vz /= ref.hw_vector.dot(vz);
    const cplx simp = vy.dot(vz) / (vy.squaredNorm() * vz.squaredNorm());
    rep.unnormalized_residual = std::max(rep.unnormalized_residual, std::abs(simp - k));
  }
  return rep;
}

Eigen::Vector3d sphere_direction(const Irrep& ref, const OrbitPoint& p) {
  if (ref.alg->dim != 3) throw Error("sphere directions are defined for A1 only");
  RVec x = moment(ref, p);
  return Eigen::Vector3d(x(0), x(1), x(2)).normalized();
}

}  // namespace fz
