// Binary field snapshots.
//
// Layout (all little-endian):
//   bytes 0..3   magic "KSDK"
//   bytes 4..5   version (u16, currently 1)
//   bytes 6..7   resolution M (u16)
//   bytes 8..9   components (u16)
//   byte  10     is_real (u8)
//   bytes 11..15 zero padding
// followed by components * (2M+1)^2 pairs of f64 (re, im) in row-major
// (component, w1, w2) order with w_i = -M..M.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ksdk/spectral/field.hpp"

namespace ksdk {

inline constexpr std::uint16_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 16;

std::vector<std::uint8_t> encode_snapshot(const FourierField& f);
FourierField decode_snapshot(const std::vector<std::uint8_t>& bytes);

void write_snapshot(std::ostream& out, const FourierField& f);
FourierField read_snapshot(std::istream& in);

void save_snapshot(const std::string& path, const FourierField& f);
FourierField load_snapshot(const std::string& path);

}  // namespace ksdk
