#ifndef LCAT_PROTECTION_HPP
#define LCAT_PROTECTION_HPP

#include <string>
#include <vector>

namespace lcat {

struct SimulationTrace;  // swing.hpp

/// Operational frequency band; anything outside is an excursion.
struct FrequencyStandard {
  std::string name;
  double under_hz = 0.0;
  double over_hz = 0.0;
};

// NERC 59.50/62.20, ERCOT 59.30/61.80, NYISO 59.90/60.10.
FrequencyStandard nerc_standard();
FrequencyStandard ercot_standard();
FrequencyStandard nyiso_standard();
FrequencyStandard standard_by_name(const std::string& name);
FrequencyStandard read_standard_json(const std::string& path);

struct UflsStage {
  double trigger_hz = 0.0;
  double shed_fraction = 0.0;  // of the system load at firing time
};

/// Staged, latched shedding: triggers strictly decreasing, each stage fires
/// once per run the first time frequency drops below it.
struct UflsScheme {
  std::string name;
  std::vector<UflsStage> stages;

  void validate() const;
};

// NYISO: 7% at each of 59.5/59.3/59.1/58.9. ERCOT: 5% at 59.3 then 10% at
// 58.9 and 10% at 58.5.
UflsScheme nyiso_ufls_scheme();
UflsScheme ercot_ufls_scheme();
UflsScheme read_ufls_json(const std::string& path);

struct UflsState {
  std::vector<bool> fired;
};

UflsState make_ufls_state(const UflsScheme& scheme);

// Returns the fraction of the current system load to shed now (sum of the
// stages newly fired by this sample); latched stages never re-fire.
double apply_ufls(const UflsScheme& scheme, double frequency_hz, UflsState& state);

struct Excursion {
  double start_s = 0.0;
  double end_s = 0.0;
  double extremum_hz = 0.0;
  double extremum_time_s = 0.0;
  bool over = false;  // false = underfrequency
};

struct ViolationReport {
  std::string standard;
  double under_hz = 0.0;
  double over_hz = 0.0;
  std::vector<Excursion> excursions;
  double time_over_s = 0.0;
  double time_under_s = 0.0;
  double peak_hz = 0.0;
  double min_hz = 0.0;
  bool major_disturbance = false;      // any excursion under the NYISO band
  std::vector<std::string> advisories; // sustained-overfrequency action list
};

ViolationReport check_thresholds(const SimulationTrace& trace, const FrequencyStandard& standard);

// The staged operator response to sustained overfrequency (>= dwell above
// the limit); empty unless the standard is NYISO.
std::vector<std::string> overfrequency_actions(const SimulationTrace& trace,
                                               const FrequencyStandard& standard,
                                               double dwell_s = 10.0);

// check_thresholds + advisories in one JSON-ready report.
ViolationReport build_violation_report(const SimulationTrace& trace,
                                       const FrequencyStandard& standard, double dwell_s = 10.0);

void write_violation_json(const ViolationReport& report, const std::string& path);

}  // namespace lcat

#endif  // LCAT_PROTECTION_HPP
