#pragma once

#include <stdexcept>
#include <string>

namespace nvist {

/// Invalid grid, config or potential parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver or integrator failed; carries the stage that raised it.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string stage, const std::string& what);
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Reconstructed field is not real within tolerance.
class SymmetryViolation : public NumericalError {
 public:
  SymmetryViolation(double defect, double tol);
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

/// Positive solution changed sign where it must stay positive.
class ClassificationConflict : public NumericalError {
 public:
  explicit ClassificationConflict(const std::string& what)
      : NumericalError("classify", what) {}
};

/// The pipeline declines to invert scattering data of a supercritical potential.
class SupercriticalRefusal : public std::runtime_error {
 public:
  explicit SupercriticalRefusal(double lambda_min);
  /// Refusal on other evidence, e.g. exceptional points in the data; lambda_min is NaN.
  explicit SupercriticalRefusal(const std::string& reason);
  double lambda_min() const noexcept { return lambda_min_; }

 private:
  double lambda_min_;
};

}  // namespace nvist
