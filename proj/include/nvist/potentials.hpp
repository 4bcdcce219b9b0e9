#pragma once

#include <limits>
#include <string>

#include "nvist/grid.hpp"

namespace nvist {

enum class PotentialFamily { conductivity, perturbed };

struct PotentialSpec {
  PotentialFamily family = PotentialFamily::conductivity;
  double beta = 0.5;        // sigma = 1 + beta * bump
  Complex center{0.0, 0.0};
  double radius = 1.0;
  double epsilon = 0.0;     // perturbed family: q + epsilon * bump
};

std::string to_string(PotentialFamily f);
PotentialFamily potential_family_from_string(const std::string& s);

/// exp(-4 |x - c|^2 / R^2) with a smooth cutoff on [2.6 R, 3.4 R]; nonnegative, peak 1.
Field bump(const Grid2D& g, Complex center, double radius);

/// q = (dbar d sqrt(sigma)) / sqrt(sigma), sigma = 1 + beta * bump.
Field conductivity_potential(const Grid2D& g, const PotentialSpec& spec);
Field perturb(const Field& q, const Field& bump, double epsilon);
/// Dispatches on spec.family.
Field make_potential(const Grid2D& g, const PotentialSpec& spec);
/// sqrt(sigma) for the configured conductivity.
Field conductivity_root(const Grid2D& g, const PotentialSpec& spec);

enum class PotentialClass { critical, subcritical, supercritical, critical_or_subcritical, indeterminate };
std::string to_string(PotentialClass c);

struct ClassificationReport {
  double lambda_min = std::numeric_limits<double>::quiet_NaN();
  PotentialClass class_guess = PotentialClass::indeterminate;
  double a_est = std::numeric_limits<double>::quiet_NaN();
  double c_inf_est = std::numeric_limits<double>::quiet_NaN();
  double small_k_slope = std::numeric_limits<double>::quiet_NaN();
  double tol_eig = 0.0;
  int iterations = 0;
  std::string diagnostic;
};

struct FormOptions {
  double tol_eig_rel = 1e-6;  // tol_eig = tol_eig_rel * max(|q|_inf, 1e-300)
  double tol_eig_abs = 1e-10; // floor used when q vanishes
  int max_outer = 3000;
  double shift_margin = 0.1;
};

/// Smallest eigenvalue of -dbar d + q on the periodic grid by shifted inverse iteration.
ClassificationReport classify_by_form(const Field& q, const FormOptions& opt = {});

struct PositiveSolution {
  Field psi;
  double a_est = 0.0;
  double c_inf_est = 0.0;
  int iterations = 0;
};

struct PositiveSolutionOptions {
  double tol = 1e-10;
  int max_iter = 300;
};

/// Solves psi + G*(q psi) = 1 with G = -(2/pi) log|x|, then fits psi ~ a log|x| + c on
/// L/2 <= |x| <= 3L/4 and averages psi - a log|x| over |x| < 3L/4.
PositiveSolution positive_solution(const Field& q, const PositiveSolutionOptions& opt = {});

struct ClassifyOptions {
  FormOptions form;
  PositiveSolutionOptions positive;
  double a_critical = 1e-3;  // |a_est| at or below this reads as critical
};

/// Form test, refined by the positive solution's log growth when not supercritical.
ClassificationReport classify(const Field& q, const ClassifyOptions& opt = {});

}  // namespace nvist
