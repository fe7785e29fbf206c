#pragma once

#include <filesystem>
#include <string>

#include "mhdlab/spacetime.hpp"

namespace mhdlab {

/// Field dump format: <base>.bin holds raw little-endian 8-byte IEEE-754
/// samples, row-major; <base>.json is the sidecar with grid metadata
/// ("n", "sizes", "period", plus "t0"/"dt"/"nt" for space-time dumps and
/// "tensor_shape" for tensors).
void dump_field(const std::filesystem::path& base, const Field& f);
Field load_field(const std::filesystem::path& base);

void dump_tensor(const std::filesystem::path& base, const TensorField& t);
TensorField load_tensor(const std::filesystem::path& base);

void dump_spacetime(const std::filesystem::path& base, const SpaceTimeField& u);
SpaceTimeField load_spacetime(const std::filesystem::path& base);

void write_text(const std::filesystem::path& path, const std::string& text);

/// FNV-1a of a file's bytes, for the run manifest.
std::uint64_t fnv1a_file(const std::filesystem::path& path);
std::uint64_t fnv1a_bytes(const void* data, size_t size, std::uint64_t h = 1469598103934665603ULL);

} // namespace mhdlab
