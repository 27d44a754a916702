#pragma once

#include <string>

#include "swflow/field.hpp"

namespace swflow {

struct SnapshotMeta {
  double time = 0.0;
  int k = 0;
  double s0 = 0.0;
};

/// Writes `base`.f64 (raw little-endian float64 (re, im) pairs, row-major
/// site order with the per-site tensor/spinor block fastest) and `base`.json
/// (UTF-8 metadata: n, sizes, lengths, rank, spinor_rank, time, k, S0).
void write_snapshot(const std::string& base, const Field& f, const SnapshotMeta& meta);

struct LoadedSnapshot {
  Field field;
  SnapshotMeta meta;
};

LoadedSnapshot read_snapshot(const std::string& base);

}  // namespace swflow
