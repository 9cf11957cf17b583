// Experiment reports: per-point estimates, fits, verdicts, config echo.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ksdk/experiments/stats.hpp"

namespace ksdk {

struct ReportValue {
  std::string quantity;
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

struct ReportPoint {
  std::string label;
  std::vector<std::pair<std::string, double>> params;
  std::vector<ReportValue> values;

  void add(std::string quantity, double value, double std_error, std::size_t n);
  void add(std::string quantity, const Estimate& e);
  /// InputError if absent.
  const ReportValue& value(const std::string& quantity) const;
  double param(const std::string& name) const;
};

struct ReportFit {
  std::string name;
  std::string x_axis;
  std::string y_axis;
  LineFit fit;
};

struct Verdict {
  std::string name;
  bool passed = false;
  /// Decision rule in words.
  std::string rule;
  std::string detail;
};

struct ExperimentReport {
  std::string name;
  std::uint64_t seed = 0;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<ReportPoint> points;
  std::vector<ReportFit> fits;
  std::vector<Verdict> verdicts;
  std::vector<std::string> warnings;

  bool passed() const;
  const ReportPoint& point(const std::string& label) const;
  const ReportFit& fit(const std::string& name) const;
  const Verdict& verdict(const std::string& name) const;

  nlohmann::ordered_json to_json() const;
  /// Long format: experiment,point,<params...>,quantity,value,std_error,n_samples.
  std::string to_csv() const;
};

/// Shortest round-trip decimal form used in every CSV and JSON output.
std::string format_number(double x);

}  // namespace ksdk
