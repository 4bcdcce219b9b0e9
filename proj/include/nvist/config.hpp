#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nvist/potentials.hpp"
#include "nvist/scatter.hpp"

namespace nvist {

struct Tolerances {
  double cgo_tol = 1e-8;
  double dbar_tol = 1e-8;
  double tol_eig = 1e-6;  // relative to max|q|
  double reality_tol = 1e-3;
  double sym_tol = 1e-6;
};

/// Everything a pipeline run needs. The method is valid for initial data in weighted
/// Sobolev classes W^{5,p}_rho with p in (1, 2), rho > 1; none of these indices is
/// used at runtime.
struct RunConfig {
  double L = 4.0;
  int n = 128;
  double k_max = 6.0;
  int m = 64;
  int k_min_cells = 2;
  RaySpec ray{1e-3, 1e-1, 21, 0.3};
  PotentialSpec potential;
  Tolerances tol;
  std::vector<double> tau_schedule{0.0};
  double dtau = 1e-3;
  bool subk_model = false;
  int workers = 1;
  int recon_n = 64;
  int recon_extend = 2;
  bool allow_supercritical = false;
  std::string output_dir = "nvist_out";
};

/// INI text: [section] headers, "key = value" lines, '#' or ';' comments.
/// Unknown sections or keys and malformed values raise ConfigError.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);
/// Throws ConfigError on the first violated invariant.
void validate(const RunConfig& cfg);
/// Canonical INI form; parse_config(to_ini(cfg)) reproduces cfg.
std::string to_ini(const RunConfig& cfg);

KGrid kgrid_of(const RunConfig& cfg);
Grid2D xgrid_of(const RunConfig& cfg);

}  // namespace nvist
