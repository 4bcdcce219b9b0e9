#pragma once

#include <filesystem>

#include "nvist/field.hpp"
#include "nvist/scatter.hpp"

namespace nvist {

namespace fs = std::filesystem;

/// stem.json holds {n, L, kind, dtype:"c128"}; stem.bin holds row-major
/// little-endian (re, im) float64 pairs.
void write_field(const Field& f, const fs::path& stem);
Field read_field(const fs::path& stem);

/// As write_field with kind "k", plus stem.mask.bin (one byte per sample),
/// the tau tag, the k-grid parameters and the small-k ray in the JSON sidecar.
void write_scattering(const ScatteringData& sd, const fs::path& stem);
ScatteringData read_scattering(const fs::path& stem);

/// Columns x1,x2,re,im along the row x2 = x2(col).
void write_field_csv_row(const Field& f, int col, const fs::path& path);
/// Columns k1,k2,re_t,im_t,masked.
void write_scattering_csv(const ScatteringData& sd, const fs::path& path);

}  // namespace nvist
