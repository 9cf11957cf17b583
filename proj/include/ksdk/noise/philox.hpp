// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// Every draw is a pure function of (key, counter), so sampling order and
// thread assignment never change a result.
#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace ksdk {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

/// Uniform in (0, 1] from two 32-bit words (53 bits).
double uniform_open_closed(std::uint32_t hi, std::uint32_t lo);
/// Uniform in [0, 1) from two 32-bit words (53 bits).
double uniform_closed_open(std::uint32_t hi, std::uint32_t lo);

/// Purpose tags that keep the counter spaces of different consumers disjoint.
enum class StreamPurpose : std::uint32_t {
  field_noise = 0,
  particle_noise = 1,
  initial_positions = 2,
  auxiliary = 3,
};

/// A keyed stream addressed by (trajectory, step, slot, lane).
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t trajectory);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t trajectory() const { return trajectory_; }

  PhiloxCounter block(std::uint64_t step, std::uint32_t slot, std::uint32_t lane,
                      StreamPurpose purpose = StreamPurpose::field_noise) const;
  /// Two independent standard normals (Box-Muller on one block).
  std::pair<double, double> normal_pair(std::uint64_t step, std::uint32_t slot,
                                        std::uint32_t lane,
                                        StreamPurpose purpose = StreamPurpose::field_noise) const;
  /// Two independent uniforms in [0, 1).
  std::pair<double, double> uniform_pair(std::uint64_t step, std::uint32_t slot,
                                         std::uint32_t lane,
                                         StreamPurpose purpose = StreamPurpose::field_noise) const;

 private:
  std::uint64_t seed_;
  std::uint64_t trajectory_;
  PhiloxKey key_;
};

}  // namespace ksdk
