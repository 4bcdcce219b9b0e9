#include "nvist/errors.hpp"

#include <limits>
#include <sstream>

namespace nvist {

NumericalError::NumericalError(std::string stage, const std::string& what)
    : std::runtime_error(what), stage_(std::move(stage)) {}

namespace {
std::string describe_symmetry(double defect, double tol) {
  std::ostringstream os;
  os << "reconstruction reality defect " << defect << " exceeds tolerance " << tol;
  return os.str();
}

std::string describe_refusal(double lambda_min) {
  std::ostringstream os;
  os << "potential is supercritical (lambda_min = " << lambda_min
     << "); inverse scattering is not applicable";
  return os.str();
}
}  // namespace

SymmetryViolation::SymmetryViolation(double defect, double tol)
    : NumericalError("invert", describe_symmetry(defect, tol)), defect_(defect) {}

SupercriticalRefusal::SupercriticalRefusal(double lambda_min)
    : std::runtime_error(describe_refusal(lambda_min)), lambda_min_(lambda_min) {}

SupercriticalRefusal::SupercriticalRefusal(const std::string& reason)
    : std::runtime_error(reason), lambda_min_(std::numeric_limits<double>::quiet_NaN()) {}

}  // namespace nvist
