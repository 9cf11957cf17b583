#include <cmath>
#include <sstream>

#include "ksdk/error.hpp"
#include "ksdk/experiments/experiments.hpp"
#include "internal.hpp"

namespace ksdk {

double DeltaRule::operator()(double eps) const {
  double d = 0.0;
  switch (kind) {
    case Kind::fixed:
      d = coefficient;
      break;
    case Kind::power:
      if (!(eps > 0.0)) throw DomainError("delta rule: power law needs eps > 0");
      d = coefficient * std::pow(eps, exponent);
      break;
    case Kind::logarithmic:
      if (!(eps > 0.0 && eps < 1.0)) throw DomainError("delta rule: logarithmic law needs 0 < eps < 1");
      d = coefficient * std::pow(std::log(1.0 / eps), -exponent);
      break;
  }
  if (!(d > 0.0) || !std::isfinite(d))
    throw DomainError("delta rule produced delta = " + format_number(d) + " at eps = " + format_number(eps));
  return d;
}

std::string DeltaRule::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::fixed:
      os << "delta = " << format_number(coefficient);
      break;
    case Kind::power:
      os << "delta = " << format_number(coefficient) << " eps^" << format_number(exponent);
      break;
    case Kind::logarithmic:
      os << "delta = " << format_number(coefficient) << " log(1/eps)^-" << format_number(exponent);
      break;
  }
  return os.str();
}

DeltaRule::Kind parse_delta_rule_kind(const std::string& s) {
  if (s == "power") return DeltaRule::Kind::power;
  if (s == "log" || s == "logarithmic") return DeltaRule::Kind::logarithmic;
  if (s == "fixed") return DeltaRule::Kind::fixed;
  throw InputError("unknown delta rule '" + s + "' (expected power, log or fixed)");
}

std::string to_string(DeltaRule::Kind k) {
  switch (k) {
    case DeltaRule::Kind::power:
      return "power";
    case DeltaRule::Kind::logarithmic:
      return "log";
    case DeltaRule::Kind::fixed:
      return "fixed";
  }
  return "?";
}

void ScalingSchedule::validate() const {
  if (eps_list.empty()) throw InputError("schedule: eps_list is empty");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] >= 0.0)) throw InputError("schedule: eps values must be >= 0");
    if (eps_list[i] == 0.0 && i + 1 != eps_list.size())
      throw InputError("schedule: eps = 0 may only be the last entry");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw InputError("schedule: eps_list must be strictly decreasing");
  }
}

std::vector<double> ScalingSchedule::deltas() const {
  std::vector<double> out;
  for (double e : eps_list) {
    if (e == 0.0)
      out.push_back(out.empty() ? 1.0 : out.back());
    else
      out.push_back(delta_rule(e));
  }
  return out;
}

ScalingSchedule::Regime ScalingSchedule::regime() const {
  Regime r;
  const auto ds = deltas();
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    r.regular.push_back(std::sqrt(eps_list[i]) * std::pow(ds[i], -gamma - 2.0));
    r.rough.push_back(eps_list[i] * std::log(1.0 / ds[i]));
  }
  r.regular_decreasing = r.rough_decreasing = true;
  for (std::size_t i = 1; i < eps_list.size(); ++i) {
    if (!(r.regular[i] < r.regular[i - 1])) r.regular_decreasing = false;
    if (!(r.rough[i] < r.rough[i - 1])) r.rough_decreasing = false;
  }
  return r;
}

bool is_uniform_density(const FourierField& f) {
  if (f.components() != 1) return false;
  bool ok = true;
  for_each_mode(f.resolution(), [&](Mode w) {
    const Complex z = f.at(0, w);
    if (w == Mode{}) {
      if (z != Complex{1.0, 0.0}) ok = false;
    } else if (z != Complex{}) {
      ok = false;
    }
  });
  return ok;
}

bool decreasing_beyond(const std::vector<Estimate>& xs, double k, std::string* detail) {
  bool ok = true;
  std::ostringstream os;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double gap = xs[i - 1].mean - xs[i].mean;
    const double se = std::hypot(xs[i - 1].std_error, xs[i].std_error);
    os << (i > 1 ? "; " : "") << "drop " << i << ": " << format_number(gap) << " vs "
       << format_number(k * se);
    if (!(gap > k * se)) ok = false;
  }
  if (detail) *detail = os.str();
  return ok;
}

namespace detail {

nlohmann::ordered_json spde_config_json(const SpdeConfig& c) {
  nlohmann::ordered_json j;
  j["eps"] = c.eps;
  j["delta"] = c.delta;
  j["chi"] = c.chi;
  j["T"] = c.T;
  j["dt"] = c.dt;
  j["M"] = c.M;
  j["seed"] = c.seed;
  j["blowup_threshold"] = c.blowup_threshold;
  j["negativity_level_L"] = c.negativity_level_L;
  j["positivity_floor"] = c.positivity_floor;
  j["gamma"] = c.gamma;
  j["scheme"] = c.scheme == TimeScheme::etd1 ? "etd1" : "etdrk2";
  return j;
}

nlohmann::ordered_json field_json(const FourierField& f) {
  nlohmann::ordered_json modes = nlohmann::ordered_json::array();
  for_each_mode(f.resolution(), [&](Mode w) {
    const Complex z = f.at(0, w);
    if (z != Complex{} && (w == Mode{} || in_upper_half(w)))
      modes.push_back({w.k1, w.k2, z.real(), z.imag()});
  });
  return modes;
}

nlohmann::ordered_json rule_json(const DeltaRule& r) {
  return {{"kind", to_string(r.kind)}, {"coefficient", r.coefficient}, {"exponent", r.exponent}};
}

}  // namespace detail
}  // namespace ksdk
