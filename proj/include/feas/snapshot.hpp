#pragma once

#include <string>

#include "feas/model.hpp"

namespace feas::io {

/// Flat binary state file, little-endian:
///   magic "FEAS" | version u8 = 1 | ndims u8 | per-axis sizes u64 |
///   time f64 | alpha f64 | rho values f64[] | u values f64[]
/// Round trips are bit-exact.
void write_snapshot(const State& s, double alpha, const std::string& path);

struct SnapshotData {
    State state;
    double alpha;
};

SnapshotData read_snapshot_full(const std::string& path);
State read_snapshot(const std::string& path);

} // namespace feas::io
