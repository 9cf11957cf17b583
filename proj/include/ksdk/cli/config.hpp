// Run configuration: flat key = value text with [section] headers.
//
//   [run]        seed, workers, output_dir, snapshot_stride
//   [model]      eps, delta, chi, T, dt, M, blowup_threshold, negativity_level_L,
//                positivity_floor, gamma, scheme
//   [initial]    kind (uniform | cosine | snapshot), cos_x1, cos_x2, snapshot
//   [schedule]   eps_list, delta_rule, delta_coefficient, delta_exponent, gamma
//   [experiment] samples, level, L, chi_large, S, probes, delta_list, stride,
//                coupled, simulate_ou, tolerance, oracle_sigmas
//   [particles]  N, N_list, M_kernel, gamma, delta_coefficient, stride
//   [skeleton]   amplitude, k1, k2
//
// Values: integers, floats, true/false, "strings", [arrays] (nestable).
// '#' starts a comment.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ksdk/experiments/experiments.hpp"
#include "ksdk/spde/spde.hpp"

namespace ksdk {

struct InitialCondition {
  enum class Kind { uniform, cosine, snapshot };
  Kind kind = Kind::uniform;
  /// rho0 = 1 + cos_x1 cos(2 pi x1) + cos_x2 cos(2 pi x2)
  double cos_x1 = 0.2;
  double cos_x2 = 0.0;
  std::string snapshot;

  /// Builds rho0 at resolution M (snapshots are truncated or zero-padded).
  FourierField build(int M) const;
};

struct RunConfig {
  std::uint64_t seed = 1;
  int workers = 1;
  std::string output_dir;
  int snapshot_stride = 100;

  SpdeConfig model;
  InitialCondition initial;
  ScalingSchedule schedule{{1e-2, 3e-3, 1e-3}, DeltaRule::power(0.125), 0.0};

  struct Experiment {
    int samples = 200;
    double level = 0.05;
    double L = 1e3;
    double chi_large = 20.0;
    double S = 0.1;
    std::vector<ProbePoint> probes{{0.05, {1, 0}}, {0.05, {1, 1}}, {0.1, {0, 1}}, {0.1, {2, 1}}};
    std::vector<double> delta_list{0.0625, 0.03125, 0.015625};
    int stride = 200;
    bool coupled = true;
    bool simulate_ou = true;
    double tolerance = 0.15;
    double oracle_sigmas = 3.0;
  } experiment;

  struct Particles {
    std::size_t N = 1000;
    std::vector<std::size_t> N_list{250, 1000, 4000};
    int M_kernel = 32;
    double gamma = -1.0;
    double delta_coefficient = 1.0;
    int stride = 100;
  } particles;

  /// Constant-in-time control h = amplitude (cos(2 pi k.x), 0).
  struct Skeleton {
    double amplitude = 0.0;
    int k1 = 1;
    int k2 = 0;
  } skeleton;

  /// Filled by resolve(): schedule regime diagnostics.
  ScalingSchedule::Regime regime;
  std::vector<std::string> warnings;

  /// Validates every section (ConfigError naming the key) and computes the
  /// regime diagnostics. model.seed follows run.seed.
  void resolve();
  /// Echo in the input format; parsing it back gives the same config.
  std::string to_text() const;
};

/// Applies `text` on top of `cfg`. Unknown keys and type mismatches raise
/// ConfigError with the key path and line; `origin` prefixes the message.
void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin = "config");
/// One "section.key=value" assignment (used for command-line overrides).
void apply_override(RunConfig& cfg, const std::string& assignment);

/// Defaults, then the file (if non-empty), then overrides in order; resolved.
RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Every accepted key as "section.key".
std::vector<std::string> config_keys();

}  // namespace ksdk
