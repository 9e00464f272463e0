#pragma once

#include "fuzzy/repn.hpp"

#include <cstdint>
#include <nlohmann/json.hpp>
#include <random>
#include <string>

namespace fz {

/// Point gH of the orbit O_Lambda, stored by exponential coordinates theta
/// (g = exp(i sum theta_a J_a)) and realized in the reference irrep (Lambda).
struct OrbitPoint {
  RVec theta;
  Mat g;

  /// g Psi^Lambda.
  Vec coherent(const Irrep& ref) const { return g * ref.hw_vector; }
};

/// exp(i sum theta_a J_a) on any representation.
Mat group_element(const RepSpace& r, const RVec& theta);
OrbitPoint make_point(const Irrep& ref, const RVec& theta);
/// Base point o (g = 1).
OrbitPoint base_point(const Irrep& ref);

/// Moment coordinates x_a = <g Psi|J_a|g Psi> in (Lambda); they coincide with
/// the symbols of X_a = J_a / N at every level.
RVec moment(const Irrep& ref, const OrbitPoint& p);

struct RngSpec {
  std::string algorithm = "mt19937_64";
  std::uint64_t seed = 0;
};

/// Seeded stream with fully specified arithmetic: 53-bit uniforms from
/// mt19937_64 and Box-Muller normals, so identical specs give identical streams.
class Rng {
public:
  explicit Rng(RngSpec spec);
  double uniform();
  double normal();
  const RngSpec& spec() const { return spec_; }

private:
  RngSpec spec_;
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct QuadratureRule {
  std::string kind;  // "gauss-s2" or "haar-mc"
  std::vector<OrbitPoint> nodes;
  std::vector<double> weights;
  int degree = -1;
  long samples = 0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  /// CSV dump of nodes (moment coordinates) and weights.
  std::string nodes_csv(const Irrep& ref) const;
};

/// Gauss-Legendre in cos(polar) times uniform azimuth on S^2 = O_(1) of A1;
/// exact for spherical polynomials of degree <= d.
QuadratureRule s2_grid(const Irrep& ref, int degree);

/// A1: the point of S^2 with unit direction n, reached from o by the rotation
/// about the axis orthogonal to n and the third axis.
OrbitPoint sphere_point(const Irrep& ref, const Eigen::Vector3d& n);

/// Approximately Haar-distributed group elements (exact for A_n): Gaussian
/// matrices in the defining representation are unitarized by QR, taken to the
/// group by exponential coordinates and transported to (Lambda).
std::vector<OrbitPoint> haar_sample(const Irrep& ref, Rng& rng, int n);
QuadratureRule haar_rule(const Irrep& ref, const RngSpec& spec, int n);

/// Complex chart at o: unit vectors t_r = f_r Psi / |f_r Psi| spanning the
/// tangent directions inside the orthogonal complement of Psi in (Lambda).
struct Chart {
  std::vector<int> roots;
  std::vector<double> scale;
  Mat directions;  // columns t_r
};

Chart orbit_chart(const Irrep& ref);

/// Group element exp(sum_r (u_r f_r - conj(u_r) f_r^*) / |f_r Psi|), so that
/// g Psi = Psi + sum_r u_r t_r to first order. Requires |u| < pi/2.
OrbitPoint orbit_exp(const Irrep& ref, const Chart& chart, const Vec& u);

/// Compensated summation with a fixed order.
class KahanMatrix {
public:
  KahanMatrix(Eigen::Index rows, Eigen::Index cols);
  void add(const Mat& term);
  const Mat& sum() const { return sum_; }

private:
  RMat sre_, sim_, cre_, cim_;
  Mat sum_;
};

double kahan_sum(const std::vector<double>& v);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Geodesic distance and triangle area on the radius-1/2 sphere from unit vectors.
double s2_distance(const Eigen::Vector3d& a, const Eigen::Vector3d& b);
/// Oriented area (positive for counter-clockwise seen from outside).
double s2_signed_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c);

}  // namespace fz
