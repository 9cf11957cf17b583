#include "ksdk/spectral/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

#include "ksdk/error.hpp"

namespace ksdk {
namespace {

void put_u16(std::vector<std::uint8_t>& b, std::size_t at, std::uint16_t v) {
  b[at] = static_cast<std::uint8_t>(v & 0xff);
  b[at + 1] = static_cast<std::uint8_t>(v >> 8);
}

std::uint16_t get_u16(const std::vector<std::uint8_t>& b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

void put_f64(std::vector<std::uint8_t>& b, std::size_t at, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) b[at + i] = static_cast<std::uint8_t>(bits >> (8 * i));
}

double get_f64(const std::vector<std::uint8_t>& b, std::size_t at) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[at + i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const FourierField& f) {
  if (f.resolution() > 0xffff || f.components() > 0xffff)
    throw InputError("snapshot: resolution/components exceed u16");
  const auto coeffs = f.coeffs();
  std::vector<std::uint8_t> b(kSnapshotHeaderBytes + coeffs.size() * 16, 0);
  std::memcpy(b.data(), "KSDK", 4);
  put_u16(b, 4, kSnapshotVersion);
  put_u16(b, 6, static_cast<std::uint16_t>(f.resolution()));
  put_u16(b, 8, static_cast<std::uint16_t>(f.components()));
  b[10] = f.is_real() ? 1 : 0;
  std::size_t at = kSnapshotHeaderBytes;
  for (const Complex& z : coeffs) {
    put_f64(b, at, z.real());
    put_f64(b, at + 8, z.imag());
    at += 16;
  }
  return b;
}

FourierField decode_snapshot(const std::vector<std::uint8_t>& b) {
  if (b.size() < kSnapshotHeaderBytes || std::memcmp(b.data(), "KSDK", 4) != 0)
    throw InputError("snapshot: bad magic");
  if (get_u16(b, 4) != kSnapshotVersion) throw InputError("snapshot: unsupported version");
  const int M = get_u16(b, 6);
  const int comps = get_u16(b, 8);
  FourierField f(M, comps, b[10] != 0);
  auto coeffs = f.coeffs();
  if (b.size() != kSnapshotHeaderBytes + coeffs.size() * 16)
    throw InputError("snapshot: payload size does not match header");
  std::size_t at = kSnapshotHeaderBytes;
  for (Complex& z : coeffs) {
    z = Complex{get_f64(b, at), get_f64(b, at + 8)};
    at += 16;
  }
  return f;
}

void write_snapshot(std::ostream& out, const FourierField& f) {
  const auto b = encode_snapshot(f);
  out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

FourierField read_snapshot(std::istream& in) {
  std::vector<std::uint8_t> header(kSnapshotHeaderBytes);
  if (!in.read(reinterpret_cast<char*>(header.data()), kSnapshotHeaderBytes))
    throw InputError("snapshot: truncated header");
  if (std::memcmp(header.data(), "KSDK", 4) != 0) throw InputError("snapshot: bad magic");
  const std::size_t side = 2 * static_cast<std::size_t>(get_u16(header, 6)) + 1;
  const std::size_t payload = get_u16(header, 8) * side * side * 16;
  header.resize(kSnapshotHeaderBytes + payload);
  if (!in.read(reinterpret_cast<char*>(header.data() + kSnapshotHeaderBytes),
               static_cast<std::streamsize>(payload)))
    throw InputError("snapshot: truncated payload");
  return decode_snapshot(header);
}

void save_snapshot(const std::string& path, const FourierField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("snapshot: cannot open " + path);
  write_snapshot(out, f);
}

FourierField load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("snapshot: cannot open " + path);
  return read_snapshot(in);
}

}  // namespace ksdk
