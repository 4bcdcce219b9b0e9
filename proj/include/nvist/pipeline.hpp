#pragma once

#include <json.hpp>
#include <optional>

#include "nvist/config.hpp"
#include "nvist/potentials.hpp"
#include "nvist/reconstruct.hpp"

namespace nvist {

Field generate_potential(const RunConfig& cfg);
ClassificationReport classify_potential(const Field& q, const RunConfig& cfg);

/// Refuses supercritical input with SupercriticalRefusal unless cfg.allow_supercritical.
ScatteringData forward_stage(const Field& q, const ClassificationReport& report, const RunConfig& cfg);
ReconstructedState invert_stage(const ScatteringData& sd, const RunConfig& cfg);

/// Reality, identity defects, NV residual at sd's tau and, when q0 is given,
/// the roundtrip error (tau = 0) or the direct-integrator difference (tau > 0).
nlohmann::json verify_stage(const ScatteringData& sd0, const ReconstructedState& st, const RunConfig& cfg,
                            const Field* q0 = nullptr);

nlohmann::json to_json(const ClassificationReport& r);
nlohmann::json forward_summary(const ScatteringData& sd, const RunConfig& cfg);

/// gen-potential, classify, forward, then evolve, invert and verify for each tau.
/// Artifacts and manifest.json go to cfg.output_dir. A stage failure is recorded in the
/// manifest (written before rethrowing).
nlohmann::json run_pipeline(const RunConfig& cfg);

/// Writes manifest.json, replacing the volatile "created" field only.
void write_manifest(const nlohmann::json& manifest, const std::filesystem::path& dir);

}  // namespace nvist
