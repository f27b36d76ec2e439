#pragma once

#include <filesystem>

#include "raplab/signal.hpp"

namespace raplab {

/// Sidecar descriptor path for a signal CSV: same stem, ".json" extension.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

/// Writes `t,v0[,v1,...]` CSV plus the `{dim, complex, label}` sidecar.
/// Complex components are written as re,im column pairs.
void write_signal_csv(const std::filesystem::path& csv, const SampledSignal& s);

/// Reads a signal CSV. Without a sidecar the signal is taken to be real with
/// one dimension per value column. Times must be strictly increasing and
/// uniformly spaced (relative jitter <= 1e-9).
SampledSignal read_signal_csv(const std::filesystem::path& csv);

}  // namespace raplab
