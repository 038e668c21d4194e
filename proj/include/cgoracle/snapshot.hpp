#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgoracle/call_graph.hpp"

namespace cgoracle {

/// Byte layout (all integers little-endian):
///
///   magic        8 bytes  "CGORSNAP"
///   format       u32      kSnapshotFormatVersion
///   version      u64      graph version at save time
///   functions    u32 n, then n x (u32 length, bytes)   in id order
///   files        u32 n, then n x (u32 length, bytes)   in id order
///   edges        u64 n, then n x (u32 caller, u32 callee, u32 file,
///                                 u8 style, u32 multiplicity)
///   checksum     u32      zlib crc32 of every preceding byte
inline constexpr std::uint32_t kSnapshotFormatVersion = 1;

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> encode_snapshot(const CallGraph& graph);
CallGraph decode_snapshot(std::span<const std::uint8_t> bytes);

void save_snapshot(const CallGraph& graph, const std::filesystem::path& path);
CallGraph load_snapshot(const std::filesystem::path& path);

}  // namespace cgoracle
