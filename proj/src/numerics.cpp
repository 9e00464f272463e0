#include "fuzzy/numerics.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fz {

namespace {

// Principal logarithm -i log(U) of a unitary matrix as a Hermitian matrix.
Mat hermitian_log(const Mat& U, bool traceless) {
  Eigen::ComplexSchur<Mat> cs(U);
  const Mat& Z = cs.matrixU();
  const int n = static_cast<int>(U.rows());
  std::vector<double> phi(n);
  for (int k = 0; k < n; ++k) phi[k] = std::arg(cs.matrixT()(k, k));
  if (traceless) {
    double total = 0;
    for (double p : phi) total += p;
    long m = std::lround(total / (2 * std::numbers::pi));
    std::vector<int> order(n);
    for (int k = 0; k < n; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return phi[a] > phi[b]; });
    for (long t = 0; t < std::abs(m); ++t) {
      if (m > 0)
        phi[order[t]] -= 2 * std::numbers::pi;
      else
        phi[order[n - 1 - t]] += 2 * std::numbers::pi;
    }
  }
  RVec d(n);
  for (int k = 0; k < n; ++k) d(k) = phi[k];
  Mat K = Z * d.cast<cplx>().asDiagonal() * Z.adjoint();
  return 0.5 * (K + K.adjoint());
}

// Coordinates of a Hermitian matrix on span{J_a} of the algebra's reference representation.
RVec algebra_coords(const LieAlgebraData& g, const Mat& K) {
  RVec t(g.dim);
  for (int a = 0; a < g.dim; ++a) t(a) = g.trace_scale * (K * g.J[a]).trace().real();
  return g.inverse_metric * t;
}

Mat random_unitary(Rng& rng, int n) {
  Mat Z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double re = rng.normal(), im = rng.normal();
      Z(i, j) = cplx(re, im) / std::sqrt(2.0);
    }
  Eigen::HouseholderQR<Mat> qr(Z);
  Mat Q = qr.householderQ();
  const Mat& R = qr.matrixQR();
  for (int k = 0; k < n; ++k) {
    const cplx r = R(k, k);
    if (std::abs(r) > 0) Q.col(k) *= r / std::abs(r);
  }
  return Q;
}

}  // namespace

Mat group_element(const RepSpace& r, const RVec& theta) {
  const int n = r.dim();
  Mat K = Mat::Zero(n, n);
  for (int a = 0; a < theta.size(); ++a)
    if (theta(a) != 0.0) K += theta(a) * r.J[a];
  if (K.cwiseAbs().maxCoeff() == 0.0) return Mat::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (K + K.adjoint()));
  Vec ph(n);
  for (int k = 0; k < n; ++k) ph(k) = std::exp(cplx(0, es.eigenvalues()(k)));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

OrbitPoint make_point(const Irrep& ref, const RVec& theta) { return {theta, group_element(ref, theta)}; }

OrbitPoint base_point(const Irrep& ref) { return make_point(ref, RVec::Zero(ref.alg->dim)); }

RVec moment(const Irrep& ref, const OrbitPoint& p) {
  const Vec v = p.coherent(ref);
  RVec x(ref.alg->dim);
  for (int a = 0; a < ref.alg->dim; ++a) x(a) = v.dot(ref.J[a] * v).real();
  return x;
}

Rng::Rng(RngSpec spec) : spec_(std::move(spec)), eng_(spec_.seed) {
  if (spec_.algorithm != "mt19937_64") throw Error("unsupported RNG algorithm " + spec_.algorithm);
}

double Rng::uniform() { return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform(), u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

nlohmann::json QuadratureRule::to_json() const {
  nlohmann::json j{{"kind", kind}, {"nodes", nodes.size()}};
  if (kind == "gauss-s2")
    j["degree"] = degree;
  else
    j["samples"] = samples, j["seed"] = seed;
  return j;
}

std::string QuadratureRule::nodes_csv(const Irrep& ref) const {
  std::ostringstream os;
  os.precision(17);
  os << "index,weight";
  for (int a = 0; a < ref.alg->dim; ++a) os << ",x" << a + 1;
  os << "\n";
  for (size_t k = 0; k < nodes.size(); ++k) {
    os << k << "," << weights[k];
    RVec x = moment(ref, nodes[k]);
    for (int a = 0; a < x.size(); ++a) os << "," << x(a);
    os << "\n";
  }
  return os.str();
}

QuadratureRule s2_grid(const Irrep& ref, int degree) {
  const auto& d = ref.alg->diagram();
  if (d.series != 'A' || d.rank != 1) throw Error("the exact sphere grid requires A1");
  if (degree < 0) throw Error("quadrature degree must be nonnegative");
  if ((ref.alg->J[2] - ref.alg->J[2].diagonal().asDiagonal().toDenseMatrix()).norm() > 1e-12)
    throw Error("unexpected A1 basis ordering");
  const int nt = degree / 2 + 1, np = degree + 1;

  std::vector<double> t, w;
  if (nt == 1) {
    t = {0.0};
    w = {2.0};
  } else {
    auto zeros = boost::math::legendre_p_zeros<double>(nt);
    for (double z : zeros) {
      const double dp = boost::math::legendre_p_prime(nt, z);
      const double wz = 2.0 / ((1 - z * z) * dp * dp);
      if (z == 0.0) {
        t.push_back(0.0), w.push_back(wz);
      } else {
        t.push_back(z), w.push_back(wz);
        t.push_back(-z), w.push_back(wz);
      }
    }
  }
  QuadratureRule q;
  q.kind = "gauss-s2";
  q.degree = degree;
  for (size_t i = 0; i < t.size(); ++i) {
    const double polar = std::acos(t[i]);
    for (int k = 0; k < np; ++k) {
      const double az = 2.0 * std::numbers::pi * k / np;
      RVec theta = RVec::Zero(3);
      theta(0) = polar * std::sin(az);
      theta(1) = -polar * std::cos(az);
      q.nodes.push_back(make_point(ref, theta));
      q.weights.push_back(w[i] / (2.0 * np));
    }
  }
  q.samples = static_cast<long>(q.nodes.size());
  return q;
}

OrbitPoint sphere_point(const Irrep& ref, const Eigen::Vector3d& n) {
  if (ref.alg->dim != 3) throw Error("sphere points are defined for A1 only");
  const Eigen::Vector3d u = n.normalized();
  const double polar = std::acos(std::clamp(u(2), -1.0, 1.0));
  const double az = std::atan2(u(1), u(0));
  RVec theta = RVec::Zero(3);
  theta(0) = polar * std::sin(az);
  theta(1) = -polar * std::cos(az);
  return make_point(ref, theta);
}

std::vector<OrbitPoint> haar_sample(const Irrep& ref, Rng& rng, int n) {
  const auto& g = *ref.alg;
  const int m = static_cast<int>(g.J[0].rows());
  const bool exact = g.diagram().series == 'A';
  std::vector<OrbitPoint> out;
  out.reserve(n);
  for (int s = 0; s < n; ++s) {
    Mat U;
    if (exact) {
      U = random_unitary(rng, m);
      const cplx det = U.determinant();
      U *= std::exp(cplx(0, -std::arg(det) / m));
    } else {
      // Random walk on the group; mixes to Haar measure geometrically in the step count.
      U = Mat::Identity(m, m);
      RepSpace defining{ref.alg, g.J, "reference"};
      for (int k = 0; k < 24; ++k) {
        RVec xi(g.dim);
        for (int a = 0; a < g.dim; ++a) xi(a) = rng.normal();
        U = group_element(defining, xi) * U;
      }
    }
    out.push_back(make_point(ref, algebra_coords(g, hermitian_log(U, exact))));
  }
  return out;
}

QuadratureRule haar_rule(const Irrep& ref, const RngSpec& spec, int n) {
  if (n <= 0) throw Error("sample count must be positive");
  Rng rng(spec);
  QuadratureRule q;
  q.kind = "haar-mc";
  q.nodes = haar_sample(ref, rng, n);
  q.weights.assign(n, 1.0 / n);
  q.samples = n;
  q.seed = spec.seed;
  return q;
}

Chart orbit_chart(const Irrep& ref) {
  const auto ops = chevalley_ops(ref);
  Chart c;
  std::vector<Vec> cols;
  for (size_t r = 0; r < ops.f.size(); ++r) {
    Vec v = ops.f[r] * ref.hw_vector;
    const double nv = v.norm();
    if (nv < 1e-9) continue;
    c.roots.push_back(static_cast<int>(r));
    c.scale.push_back(nv);
    cols.push_back(v / nv);
  }
  c.directions = Mat(ref.dim(), static_cast<Eigen::Index>(cols.size()));
  for (size_t k = 0; k < cols.size(); ++k) c.directions.col(k) = cols[k];
  if (c.directions.size() && (c.directions.adjoint() * ref.hw_vector).norm() > 1e-12)
    throw Error("chart directions are not orthogonal to the highest weight vector");
  return c;
}

OrbitPoint orbit_exp(const Irrep& ref, const Chart& chart, const Vec& u) {
  if (u.size() != static_cast<Eigen::Index>(chart.roots.size())) throw Error("chart coordinate count mismatch");
  if (u.norm() >= std::numbers::pi / 2) throw Error("coordinates outside the chart domain");
  const auto& g = *ref.alg;
  const int l = g.rank(), P = g.roots.num_positive();
  RVec theta = RVec::Zero(g.dim);
  for (size_t k = 0; k < chart.roots.size(); ++k) {
    const int row = l + P + chart.roots[k];
    for (int a = 0; a < g.dim; ++a) theta(a) += 2.0 * (u(k) * g.from_chevalley(row, a)).imag() / chart.scale[k];
  }
  return make_point(ref, theta);
}

KahanMatrix::KahanMatrix(Eigen::Index rows, Eigen::Index cols)
    : sre_(RMat::Zero(rows, cols)), sim_(RMat::Zero(rows, cols)), cre_(RMat::Zero(rows, cols)),
      cim_(RMat::Zero(rows, cols)), sum_(Mat::Zero(rows, cols)) {}

void KahanMatrix::add(const Mat& term) {
  for (Eigen::Index j = 0; j < term.cols(); ++j)
    for (Eigen::Index i = 0; i < term.rows(); ++i) {
      double y = term(i, j).real() - cre_(i, j);
      double t = sre_(i, j) + y;
      cre_(i, j) = (t - sre_(i, j)) - y;
      sre_(i, j) = t;
      y = term(i, j).imag() - cim_(i, j);
      t = sim_(i, j) + y;
      cim_(i, j) = (t - sim_(i, j)) - y;
      sim_(i, j) = t;
      sum_(i, j) = cplx(sre_(i, j), sim_(i, j));
    }
}

double kahan_sum(const std::vector<double>& v) {
  double s = 0, c = 0;
  for (double x : v) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("slope fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t k = 0; k < x.size(); ++k) {
    const double a = std::log(x[k]), b = std::log(y[k]);
    sx += a, sy += b, sxx += a * a, sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double s2_distance(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return 0.5 * std::atan2(a.cross(b).norm(), a.dot(b));
}

double s2_signed_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  const double num = a.dot(b.cross(c));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 0.25 * 2.0 * std::atan2(num, den);
}

}  // namespace fz
