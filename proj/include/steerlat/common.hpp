#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace steerlat {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Input violated a documented precondition (malformed file, non-orthonormal
// basis, parameter out of range).  CLI maps this to exit code 3.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Request is outside what the library can construct (e.g. more mutually
// unbiased bases than are known for a composite dimension).  Exit code 2.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;

// Fixed-width numeric formatting shared by the CSV and JSON writers so both
// carry bit-identical values: %.12g, round-tripped.
std::string format_number(double x);
double reparse_number(double x);

}  // namespace steerlat
