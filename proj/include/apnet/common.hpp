#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace apnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Weighted-average denominators below this are treated as "no active sensing".
inline constexpr double kActiveSensingFloor = 1e-12;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 1^T K2 1 vanished, so the weighted input average is undefined.
class NoActiveSensing : public Error {
 public:
  NoActiveSensing() : Error("no active sensing: total value-of-information weight is zero") {}
};

// No agent keeps a positive total weight over the whole horizon.
class DecompositionInfeasible : public Error {
 public:
  using Error::Error;
};

// The ultimate-bound expression divides by sigma.
class BoundUndefined : public Error {
 public:
  using Error::Error;
};

class NumericalDivergence : public Error {
 public:
  NumericalDivergence(double t, const std::string& what)
      : Error("numerical divergence at t=" + std::to_string(t) + ": " + what), time(t) {}
  double time;
};

// Scenario document problem, located by a JSON-pointer style path.
class ParseError : public Error {
 public:
  ParseError(std::string where, const std::string& reason)
      : Error(where + ": " + reason), path(std::move(where)) {}
  std::string path;
};

// A file could not be opened or written.
class IoError : public Error {
 public:
  IoError(std::string file, const std::string& reason)
      : Error(file + ": " + reason), path(std::move(file)) {}
  std::string path;
};

}  // namespace apnet
