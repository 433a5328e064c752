#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace colide {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
using Index = Eigen::Index;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// sI - W∘W is not a nonsingular M-matrix, so log det and its gradient are
// undefined for the requested (W, s).
class DomainViolation : public Error {
 public:
  using Error::Error;
};

// Malformed or unusable input data (CSV shape, constant rows, zero data).
class DataError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class FitDivergence : public Error {
 public:
  FitDivergence(const std::string& what, std::size_t stage, std::size_t iteration)
      : Error(what + " (stage " + std::to_string(stage) + ", iteration " +
              std::to_string(iteration) + ")"),
        stage_(stage),
        iteration_(iteration) {}

  std::size_t stage() const { return stage_; }
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t stage_;
  std::size_t iteration_;
};

}  // namespace colide
