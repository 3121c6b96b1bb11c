#include "lcat/protection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "lcat/errors.hpp"
#include "lcat/swing.hpp"

namespace lcat {

using json = nlohmann::ordered_json;

FrequencyStandard nerc_standard() { return {"NERC", 59.50, 62.20}; }
FrequencyStandard ercot_standard() { return {"ERCOT", 59.30, 61.80}; }
FrequencyStandard nyiso_standard() { return {"NYISO", 59.90, 60.10}; }

FrequencyStandard standard_by_name(const std::string& name) {
  if (name == "NERC") return nerc_standard();
  if (name == "ERCOT") return ercot_standard();
  if (name == "NYISO") return nyiso_standard();
  throw Error(ErrorCode::MalformedInput, "unknown frequency standard '" + name + "'");
}

FrequencyStandard read_standard_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, path + ": " + e.what());
  }
  FrequencyStandard std_;
  std_.name = j.at("name").get<std::string>();
  std_.under_hz = j.at("under_hz").get<double>();
  std_.over_hz = j.at("over_hz").get<double>();
  if (!(std_.under_hz < 60.0 && 60.0 < std_.over_hz))
    throw Error(ErrorCode::MalformedInput, path + ": thresholds must straddle 60 Hz");
  return std_;
}

void UflsScheme::validate() const {
  if (stages.empty()) throw Error(ErrorCode::MalformedInput, "UFLS scheme has no stages");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (!(stages[i].shed_fraction > 0.0 && stages[i].shed_fraction < 1.0))
      throw Error(ErrorCode::MalformedInput, "UFLS shed fraction must lie in (0,1)");
    if (i > 0 && !(stages[i].trigger_hz < stages[i - 1].trigger_hz))
      throw Error(ErrorCode::MalformedInput, "UFLS triggers must be strictly decreasing");
  }
}

UflsScheme nyiso_ufls_scheme() {
  return {"NYISO", {{59.5, 0.07}, {59.3, 0.07}, {59.1, 0.07}, {58.9, 0.07}}};
}

UflsScheme ercot_ufls_scheme() {
  return {"ERCOT", {{59.3, 0.05}, {58.9, 0.10}, {58.5, 0.10}}};
}

UflsScheme read_ufls_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, path + ": " + e.what());
  }
  UflsScheme scheme;
  scheme.name = j.value("name", "custom");
  for (const auto& s : j.at("stages"))
    scheme.stages.push_back(
        {s.at("trigger_hz").get<double>(), s.at("shed_fraction").get<double>()});
  scheme.validate();
  return scheme;
}

UflsState make_ufls_state(const UflsScheme& scheme) {
  return {std::vector<bool>(scheme.stages.size(), false)};
}

double apply_ufls(const UflsScheme& scheme, double frequency_hz, UflsState& state) {
  if (state.fired.size() != scheme.stages.size())
    throw Error(ErrorCode::DimensionMismatch, "UFLS state does not match scheme");
  double shed_now = 0.0;
  for (std::size_t i = 0; i < scheme.stages.size(); ++i) {
    if (!state.fired[i] && frequency_hz < scheme.stages[i].trigger_hz) {
      state.fired[i] = true;
      shed_now += scheme.stages[i].shed_fraction;
    }
  }
  return shed_now;
}

ViolationReport check_thresholds(const SimulationTrace& trace,
                                 const FrequencyStandard& standard) {
  ViolationReport report;
  report.standard = standard.name;
  report.under_hz = standard.under_hz;
  report.over_hz = standard.over_hz;
  const auto& f = trace.system_frequency_hz;
  if (f.empty()) return report;
  report.peak_hz = *std::max_element(f.begin(), f.end());
  report.min_hz = *std::min_element(f.begin(), f.end());

  // contiguous runs of samples outside the band, one direction per run
  std::size_t i = 0;
  while (i < f.size()) {
    const bool over = f[i] > standard.over_hz;
    const bool under = f[i] < standard.under_hz;
    if (!over && !under) {
      ++i;
      continue;
    }
    Excursion ex;
    ex.over = over;
    ex.start_s = trace.time_s[i];
    ex.extremum_hz = f[i];
    ex.extremum_time_s = trace.time_s[i];
    std::size_t j = i;
    while (j < f.size() && (over ? f[j] > standard.over_hz : f[j] < standard.under_hz)) {
      const bool more_extreme = over ? f[j] > ex.extremum_hz : f[j] < ex.extremum_hz;
      if (more_extreme) {
        ex.extremum_hz = f[j];
        ex.extremum_time_s = trace.time_s[j];
      }
      ++j;
    }
    ex.end_s = trace.time_s[j - 1];
    const double span = static_cast<double>(j - i) * trace.step_s;
    (over ? report.time_over_s : report.time_under_s) += span;
    report.excursions.push_back(ex);
    i = j;
  }
  if (standard.name == "NYISO" && !report.excursions.empty()) report.major_disturbance = true;
  return report;
}

std::vector<std::string> overfrequency_actions(const SimulationTrace& trace,
                                               const FrequencyStandard& standard,
                                               double dwell_s) {
  if (standard.name != "NYISO") return {};
  const ViolationReport base = check_thresholds(trace, standard);
  bool sustained = false;
  for (const auto& ex : base.excursions) {
    if (!ex.over) continue;
    if (ex.end_s - ex.start_s + trace.step_s >= dwell_s) {
      sustained = true;
      break;
    }
  }
  if (!sustained) return {};
  return {
      "request overgenerating suppliers to adjust output to match schedules",
      "reduce dispatchable generation to minimum operating limits",
      "request internal generators to run manually below minimum dispatch",
      "schedule variable load or storage against the imbalance",
      "request reduction or cancellation of transactions feeding the imbalance",
      "declare a major emergency and de-commit internal generators until cleared",
  };
}

ViolationReport build_violation_report(const SimulationTrace& trace,
                                       const FrequencyStandard& standard, double dwell_s) {
  ViolationReport report = check_thresholds(trace, standard);
  report.advisories = overfrequency_actions(trace, standard, dwell_s);
  return report;
}

void write_violation_json(const ViolationReport& report, const std::string& path) {
  json j;
  j["standard"] = report.standard;
  j["under_hz"] = report.under_hz;
  j["over_hz"] = report.over_hz;
  j["peak_f_hz"] = report.peak_hz;
  j["min_f_hz"] = report.min_hz;
  j["time_over_s"] = report.time_over_s;
  j["time_under_s"] = report.time_under_s;
  j["major_disturbance"] = report.major_disturbance;
  json exs = json::array();
  for (const auto& ex : report.excursions)
    exs.push_back({{"start_s", ex.start_s},
                   {"end_s", ex.end_s},
                   {"extremum_hz", ex.extremum_hz},
                   {"extremum_time_s", ex.extremum_time_s},
                   {"direction", ex.over ? "over" : "under"}});
  j["excursions"] = std::move(exs);
  j["advisories"] = report.advisories;
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace lcat
