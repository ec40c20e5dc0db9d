#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kecone {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using IVec = Eigen::VectorXi;

constexpr double kPi = 3.14159265358979323846;

// A point of C^d in a fixed coordinate chart.
using CPoint = CVec;

class DomainViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidPeriodData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GroupClosureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kecone
