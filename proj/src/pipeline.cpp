#include "nvist/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "nvist/errors.hpp"
#include "nvist/evolve.hpp"
#include "nvist/io.hpp"
#include "nvist/oracle.hpp"

namespace nvist {

using nlohmann::json;

namespace {

std::string tau_tag(double tau) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << tau;
  return os.str();
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

ReconstructOptions reconstruct_options(const RunConfig& cfg) {
  ReconstructOptions o;
  o.dbar.tol = cfg.tol.dbar_tol;
  o.dbar.subk_model = cfg.subk_model;
  o.recon_n = cfg.recon_n;
  o.extend = cfg.recon_extend;
  o.workers = cfg.workers;
  o.reality_tol = cfg.tol.reality_tol;
  return o;
}

// JSON has no NaN; unset estimates are written as null
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

Field generate_potential(const RunConfig& cfg) { return make_potential(xgrid_of(cfg), cfg.potential); }

ClassificationReport classify_potential(const Field& q, const RunConfig& cfg) {
  ClassifyOptions o;
  o.form.tol_eig_rel = cfg.tol.tol_eig;
  return classify(q, o);
}

ScatteringData forward_stage(const Field& q, const ClassificationReport& report, const RunConfig& cfg) {
  if (report.class_guess == PotentialClass::supercritical && !cfg.allow_supercritical)
    throw SupercriticalRefusal(report.lambda_min);
  ForwardOptions fo;
  fo.cgo.tol = cfg.tol.cgo_tol;
  fo.workers = cfg.workers;
  return scattering_transform(q, kgrid_of(cfg), fo);
}

ReconstructedState invert_stage(const ScatteringData& sd, const RunConfig& cfg) {
  const bool ray_exceptional = std::any_of(sd.ray.begin(), sd.ray.end(), [](const RaySample& r) { return r.exceptional; });
  if (!cfg.allow_supercritical && (sd.exceptional_count() > 0 || ray_exceptional || !sd.rings.empty()))
    throw SupercriticalRefusal("scattering data carry exceptional points; inverse scattering is not applicable");
  return reconstruct_q(sd, xgrid_of(cfg), reconstruct_options(cfg));
}

json to_json(const ClassificationReport& r) {
  return {{"lambda_min", number(r.lambda_min)},
          {"class", to_string(r.class_guess)},
          {"a_est", number(r.a_est)},
          {"c_inf_est", number(r.c_inf_est)},
          {"small_k_slope", number(r.small_k_slope)},
          {"tol_eig", r.tol_eig},
          {"iterations", r.iterations},
          {"diagnostic", r.diagnostic}};
}

json forward_summary(const ScatteringData& sd, const RunConfig& cfg) {
  json j = {{"symmetry_defect", symmetry_defect(sd)},
            {"exceptional_count", sd.exceptional_count()},
            {"max_iterations", sd.max_iterations},
            {"max_abs_t", sd.t.abs().maxCoeff()}};
  json rings = json::array();
  for (const auto& r : sd.rings) rings.push_back({{"radius", r.radius}, {"mu_sup_dev", r.mu_sup_dev}});
  j["exceptional_rings"] = rings;
  const XNorm xn = x_norm(sd, 1, 1.5, 0.1);
  j["x_norm"] = {{"value", xn.value}, {"symmetry_defect", xn.symmetry_defect}};
  j["symmetry_ok"] = symmetry_defect(sd) <= cfg.tol.sym_tol;
  return j;
}

json verify_stage(const ScatteringData& sd0, const ReconstructedState& st, const RunConfig& cfg, const Field* q0) {
  json j;
  j["tau"] = st.tau;
  j["reality_defect"] = st.reality_defect;
  j["max_iterations"] = st.max_iterations;
  const IdentityDefects id = identity_defects(st);
  j["identity_d1"] = id.d1;
  j["identity_d2"] = id.d2;
  const NvResidual nv = nv_residual(sd0, xgrid_of(cfg), st.tau, cfg.dtau, reconstruct_options(cfg));
  j["nv_residual"] = nv.rel_norm;
  if (q0) {
    if (st.tau == 0.0) {
      j["roundtrip_error"] = relative_sup_error(st.q, *q0);
    } else {
      const Field direct = step_nv_padded(*q0, st.tau, cfg.recon_extend);
      j["oracle_difference"] = relative_sup_error(st.q, direct);
    }
  }
  return j;
}

void write_manifest(const json& manifest, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json m = manifest;
  m["created"] = timestamp();
  std::ofstream os(dir / "manifest.json");
  if (!os) throw std::runtime_error("cannot write manifest in " + dir.string());
  os << std::setw(2) << m << '\n';
}

json run_pipeline(const RunConfig& cfg) {
  validate(cfg);
  const std::filesystem::path out = cfg.output_dir;
  std::filesystem::create_directories(out);
  json manifest;
  manifest["config"] = to_ini(cfg);
  manifest["status"] = "running";
  std::string stage = "gen-potential";
  try {
    const Field q0 = generate_potential(cfg);
    write_field(q0, out / "potential");
    manifest["gen_potential"] = {{"max_abs_q", q0.sup()}, {"integral_q", integrate(q0).real()}};

    stage = "classify";
    ClassificationReport report = classify_potential(q0, cfg);
    manifest["classify"] = to_json(report);

    stage = "forward";
    const ScatteringData sd0 = forward_stage(q0, report, cfg);
    write_scattering(sd0, out / "scattering");
    write_scattering_csv(sd0, out / "scattering.csv");
    manifest["forward"] = forward_summary(sd0, cfg);
    if (!sd0.ray.empty() && std::isfinite(report.c_inf_est)) {
      const SmallKFit fit = small_k_fit(sd0, report.c_inf_est);
      report.small_k_slope = fit.slope;
      manifest["classify"] = to_json(report);
      manifest["small_k_fit"] = {{"slope", fit.slope},
                                 {"a_est", number(fit.a_est)},
                                 {"degenerate", fit.degenerate},
                                 {"first_decade_max", fit.first_decade_max},
                                 {"final_decade_max", fit.final_decade_max}};
    }

    json taus = json::array();
    for (double tau : cfg.tau_schedule) {
      const std::string tag = tau_tag(tau);
      stage = "evolve";
      const ScatteringData sd = evolve(sd0, tau);
      write_scattering(sd, out / ("scattering_tau_" + tag));
      stage = "invert";
      const ReconstructedState st = invert_stage(sd, cfg);
      write_field(st.q, out / ("q_tau_" + tag));
      write_field(st.u, out / ("u_tau_" + tag));
      write_field(st.a1, out / ("a1_tau_" + tag));
      write_field(st.a2, out / ("a2_tau_" + tag));
      write_field_csv_row(st.q, st.q.grid.n / 2, out / ("q_tau_" + tag + ".csv"));
      stage = "verify";
      taus.push_back(verify_stage(sd0, st, cfg, &q0));
      manifest["tau"] = taus;
    }
    manifest["status"] = "ok";
  } catch (const std::exception& e) {
    manifest["status"] = "error";
    const auto* ne = dynamic_cast<const NumericalError*>(&e);
    manifest["error"] = {{"stage", ne ? ne->stage() : stage}, {"message", e.what()}};
    write_manifest(manifest, out);
    throw;
  }
  write_manifest(manifest, out);
  return manifest;
}

}  // namespace nvist
