#include "ksdk/noise/philox.hpp"

#include <cmath>
#include <string>

#include "ksdk/error.hpp"

namespace ksdk {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline std::uint64_t bits53(std::uint32_t hi, std::uint32_t lo) {
  return ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter c, PhiloxKey k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

double uniform_open_closed(std::uint32_t hi, std::uint32_t lo) {
  return static_cast<double>(bits53(hi, lo) + 1) * kTwoPow53Inv;
}

double uniform_closed_open(std::uint32_t hi, std::uint32_t lo) {
  return static_cast<double>(bits53(hi, lo)) * kTwoPow53Inv;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t trajectory)
    : seed_(seed),
      trajectory_(trajectory),
      key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {
  if (trajectory > 0xffffffffull)
    throw InputError("RandomStream: trajectory id " + std::to_string(trajectory) +
                     " exceeds 32 bits");
}

PhiloxCounter RandomStream::block(std::uint64_t step, std::uint32_t slot, std::uint32_t lane,
                                  StreamPurpose purpose) const {
  if (step > 0xffffffffull || lane > 0xffffu)
    throw InputError("RandomStream: counter field out of range");
  const PhiloxCounter ctr{static_cast<std::uint32_t>(trajectory_), static_cast<std::uint32_t>(step),
                          slot, lane | (static_cast<std::uint32_t>(purpose) << 16)};
  return philox4x32_10(ctr, key_);
}

std::pair<double, double> RandomStream::normal_pair(std::uint64_t step, std::uint32_t slot,
                                                    std::uint32_t lane,
                                                    StreamPurpose purpose) const {
  const PhiloxCounter b = block(step, slot, lane, purpose);
  const double r = std::sqrt(-2.0 * std::log(uniform_open_closed(b[0], b[1])));
  const double a = kTwoPi * uniform_closed_open(b[2], b[3]);
  return {r * std::cos(a), r * std::sin(a)};
}

std::pair<double, double> RandomStream::uniform_pair(std::uint64_t step, std::uint32_t slot,
                                                     std::uint32_t lane,
                                                     StreamPurpose purpose) const {
  const PhiloxCounter b = block(step, slot, lane, purpose);
  return {uniform_closed_open(b[0], b[1]), uniform_closed_open(b[2], b[3])};
}

}  // namespace ksdk
