#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace fz {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// Integer coordinates in the fundamental-weight basis.
using Weight = std::vector<int>;

/// Raised for malformed input, unsupported cases and failed preconditions.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace tol {
/// Relative tolerance for identity checks.
inline constexpr double identity = 1e-10;
/// Singular-value cutoff (relative to the largest) for rank decisions.
inline constexpr double rank = 1e-8;
}  // namespace tol

std::string to_string(const Weight& w);

Weight operator+(const Weight& a, const Weight& b);
Weight operator-(const Weight& a, const Weight& b);
Weight operator*(int n, const Weight& a);

/// Kronecker product, left factor is the slow index.
Mat kron(const Mat& a, const Mat& b);

/// Largest singular value.
double opnorm(const Mat& m);

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

}  // namespace fz
