#pragma once

#include <cstdint>
#include <filesystem>

#include "dsbu/field.hpp"

namespace dsbu {

/// Binary snapshot layout, all little-endian:
///   "DSBU" | version u32 | n u32 | box_length f64 | t f64 | nu i32 | gamma f64
///   | n^2 (re f64, im f64) pairs, row-major with x2 fastest
///   | CRC32 of the payload, u32
inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 40;

struct SnapshotMeta {
  double t = 0.0;
  int nu = 1;
  double gamma = 1.0;
};

struct LoadedSnapshot {
  Field u;
  SnapshotMeta meta;
};

/// Writes the physical field atomically (temporary file, then rename).
void write_snapshot(const std::filesystem::path& path, const Field& u, const SnapshotMeta& meta);

/// Throws FormatError for a bad magic, unsupported version, truncated file,
/// header/length mismatch, invalid header values, or checksum mismatch.
LoadedSnapshot read_snapshot(const std::filesystem::path& path);

}  // namespace dsbu
