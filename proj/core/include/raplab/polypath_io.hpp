#pragma once

#include <filesystem>

#include "raplab/algebra.hpp"

namespace raplab {

/// Writes one coefficient CSV per a_k next to the manifest (named
/// <stem>_a<k>.csv) and the manifest `{n, files, grid: {t0, dt, size}, label}`.
/// File names in the manifest are relative to its directory.
void write_polypath(const std::filesystem::path& manifest, const PolyPath& p);

/// Reads a manifest written by write_polypath (or by hand). Every coefficient
/// must sit on the manifest grid; otherwise GridMismatch.
PolyPath read_polypath(const std::filesystem::path& manifest);

}  // namespace raplab
