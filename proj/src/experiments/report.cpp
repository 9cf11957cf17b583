#include "ksdk/experiments/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "ksdk/error.hpp"

namespace ksdk {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void ReportPoint::add(std::string quantity, double value, double std_error, std::size_t n) {
  values.push_back({std::move(quantity), value, std_error, n});
}

void ReportPoint::add(std::string quantity, const Estimate& e) {
  add(std::move(quantity), e.mean, e.std_error, e.n);
}

const ReportValue& ReportPoint::value(const std::string& quantity) const {
  for (const auto& v : values)
    if (v.quantity == quantity) return v;
  throw InputError("report point '" + label + "' has no quantity '" + quantity + "'");
}

double ReportPoint::param(const std::string& name) const {
  for (const auto& [k, v] : params)
    if (k == name) return v;
  throw InputError("report point '" + label + "' has no parameter '" + name + "'");
}

bool ExperimentReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

const ReportPoint& ExperimentReport::point(const std::string& label) const {
  for (const auto& p : points)
    if (p.label == label) return p;
  throw InputError("report '" + name + "' has no point '" + label + "'");
}

const ReportFit& ExperimentReport::fit(const std::string& fit_name) const {
  for (const auto& f : fits)
    if (f.name == fit_name) return f;
  throw InputError("report '" + name + "' has no fit '" + fit_name + "'");
}

const Verdict& ExperimentReport::verdict(const std::string& verdict_name) const {
  for (const auto& v : verdicts)
    if (v.name == verdict_name) return v;
  throw InputError("report '" + name + "' has no verdict '" + verdict_name + "'");
}

namespace {

nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

}  // namespace

nlohmann::ordered_json ExperimentReport::to_json() const {
  using J = nlohmann::ordered_json;
  J j;
  j["experiment"] = name;
  j["seed"] = seed;
  j["passed"] = passed();
  j["config"] = config;
  J pts = J::array();
  for (const auto& p : points) {
    J jp;
    jp["label"] = p.label;
    J params = J::object();
    for (const auto& [k, v] : p.params) params[k] = number(v);
    jp["params"] = params;
    J vals = J::array();
    for (const auto& v : p.values)
      vals.push_back(J{{"quantity", v.quantity},
                       {"value", number(v.value)},
                       {"std_error", number(v.std_error)},
                       {"n_samples", v.n_samples}});
    jp["values"] = vals;
    pts.push_back(jp);
  }
  j["points"] = pts;
  J fs = J::array();
  for (const auto& f : fits)
    fs.push_back(J{{"name", f.name},
                   {"x", f.x_axis},
                   {"y", f.y_axis},
                   {"slope", number(f.fit.slope)},
                   {"intercept", number(f.fit.intercept)},
                   {"slope_se", number(f.fit.slope_se)},
                   {"slope_ci", J::array({number(f.fit.slope_ci.lo), number(f.fit.slope_ci.hi)})},
                   {"points", f.fit.points},
                   {"weighted", f.fit.weighted}});
  j["fits"] = fs;
  J vs = J::array();
  for (const auto& v : verdicts)
    vs.push_back(J{{"name", v.name}, {"passed", v.passed}, {"rule", v.rule}, {"detail", v.detail}});
  j["verdicts"] = vs;
  j["warnings"] = warnings;
  return j;
}

std::string ExperimentReport::to_csv() const {
  std::vector<std::string> cols;
  for (const auto& p : points)
    for (const auto& [k, v] : p.params)
      if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
  std::ostringstream os;
  os << "experiment,point";
  for (const auto& c : cols) os << ',' << c;
  os << ",quantity,value,std_error,n_samples\n";
  for (const auto& p : points)
    for (const auto& v : p.values) {
      os << name << ',' << p.label;
      for (const auto& c : cols) {
        os << ',';
        for (const auto& [k, x] : p.params)
          if (k == c) {
            os << format_number(x);
            break;
          }
      }
      os << ',' << v.quantity << ',' << format_number(v.value) << ','
         << format_number(v.std_error) << ',' << v.n_samples << '\n';
    }
  return os.str();
}

}  // namespace ksdk
