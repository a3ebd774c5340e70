#pragma once

// Checkpoint container for collocation-space velocity fields.
//
// Layout (little-endian throughout):
//   bytes 0..3   magic "LPNS"
//   u32          format version (currently 1)
//   u32          spatial dimension d
//   u32          points per axis n
//   f64          box period
//   f64 x d*n^d  collocation values, component-major; within a component,
//                row-major with axis 0 slowest.
//
// Writing the same field twice produces byte-identical files.

#include <filesystem>

#include "lpns/field.hpp"

namespace lpns {

inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(const std::filesystem::path& path, const RealVectorField& f);

/// Throws std::runtime_error on bad magic, unsupported version, or a payload
/// whose size disagrees with the header.
RealVectorField read_checkpoint(const std::filesystem::path& path);

}  // namespace lpns
