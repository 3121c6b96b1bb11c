// Writes the bundled two-day, two-year synthetic NYISO-shaped sample under
// data/sample/. Shapes are closed-form (no RNG): a double-peak day curve,
// per-zone shares with a planted share swing, and one study day whose demand
// suppression window overlaps that swing while the other day keeps them
// apart.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "lcat/grid.hpp"
#include "lcat/time_util.hpp"

using namespace lcat;
namespace fs = std::filesystem;

namespace {

double gauss(double x, double center, double width) {
  const double z = (x - center) / width;
  return std::exp(-z * z);
}

// baseline day curve in [0.55, 0.85]: morning and evening peaks
double day_shape(double h) {
  return 0.55 + 0.25 * gauss(h, 8.5, 2.5) + 0.20 * gauss(h, 18.5, 3.0);
}

struct DaySpec {
  int month;
  int day;
  // demand suppression applied to the 2020 total (fraction of shape)
  double (*suppression)(double h);
  // share swing between GENESE (+) and N.Y.C. (-) in the 2020 system
  double bump_center_h;
};

// day 1: suppression pinned to early morning and evening, far from the
// midday share swing -> no aligned target
double suppression_day1(double h) {
  return 0.17 * gauss(h, 7.0, 0.8) + 0.15 * gauss(h, 17.5, 1.2);
}

// day 2: one broad morning-to-noon suppression covering the share swing
double suppression_day2(double h) {
  return 0.32 * gauss(h, 8.2, 1.8) + 0.28 * gauss(h, 10.5, 1.5);
}

const std::vector<std::pair<std::string, double>> kShares2019 = {
    {"WEST", 0.060},  {"GENESE", 0.370}, {"CENTRL", 0.050}, {"NORTH", 0.020},
    {"MHK VL", 0.040}, {"CAPITL", 0.100}, {"HUD VL", 0.050}, {"MILLWD", 0.025},
    {"DUNWOD", 0.030}, {"N.Y.C.", 0.200}, {"LONGIL", 0.055}};

const std::vector<std::pair<std::string, double>> kShares2020 = {
    {"WEST", 0.060},  {"GENESE", 0.360}, {"CENTRL", 0.052}, {"NORTH", 0.020},
    {"MHK VL", 0.040}, {"CAPITL", 0.100}, {"HUD VL", 0.050}, {"MILLWD", 0.025},
    {"DUNWOD", 0.030}, {"N.Y.C.", 0.205}, {"LONGIL", 0.058}};

void write_loads(const std::string& path, int year, const std::vector<DaySpec>& days,
                 bool pandemic) {
  std::ofstream out(path);
  out << "timestamp,region,value\n";
  char buf[160];
  for (const auto& spec : days) {
    for (int i = 0; i < 288; ++i) {
      const double h = 5.0 * i / 60.0;
      double total = pandemic
                         ? 12800.0 * (day_shape(h) - spec.suppression(h))
                         : 15000.0 * day_shape(h);
      const CivilTime t{year, spec.month, spec.day, i / 12, (i % 12) * 5, 0};
      const auto& shares = pandemic ? kShares2020 : kShares2019;

      // zones lead or lag the state curve a little; identical modulation in
      // both years so the share comparison stays driven by the planted swing
      double norm = 0.0;
      int zi = 0;
      std::vector<double> modulated;
      for (const auto& [zone, base_share] : shares) {
        const double phase = 2.0 * M_PI * (h - 2.1 * zi) / 24.0;
        const double m = base_share * (1.0 + 0.08 * std::cos(phase));
        modulated.push_back(m);
        norm += m;
        ++zi;
      }

      zi = 0;
      for (const auto& [zone, base_share] : shares) {
        double share = modulated[static_cast<std::size_t>(zi)] / norm;
        if (pandemic) {
          const double swing = 0.025 * gauss(h, spec.bump_center_h, 0.5);
          if (zone == "GENESE") share += swing;
          if (zone == "N.Y.C.") share -= swing;
        }
        std::snprintf(buf, sizeof buf, "%s,%s,%.6f", format_iso8601(seconds_from_civil(t)).c_str(),
                      zone.c_str(), total * share);
        out << buf << '\n';
        ++zi;
      }
    }
  }
}

void write_temperature(const std::string& path, int year, const std::vector<DaySpec>& days,
                       bool pandemic) {
  std::ofstream out(path);
  out << "timestamp,region,value\n";
  char buf[96];
  for (const auto& spec : days) {
    for (int hh = 0; hh < 24; ++hh) {
      double celsius = 9.0 + 5.5 * std::sin(M_PI * (hh - 5.0) / 14.0) + 0.3 * spec.day;
      // the second study day is the planted most-similar day across years
      if (pandemic) celsius += (spec.day == 12) ? 0.05 : 1.4 + 0.1 * hh / 24.0;
      const CivilTime t{year, spec.month, spec.day, hh, 0, 0};
      std::snprintf(buf, sizeof buf, "%s,NYC,%.4f",
                    format_iso8601(seconds_from_civil(t)).c_str(), celsius);
      out << buf << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out_dir = argc > 1 ? argv[1] : "data/sample";
  fs::create_directories(out_dir);

  const std::vector<DaySpec> days = {
      {4, 11, suppression_day1, 12.75},
      {4, 12, suppression_day2, 10.583},  // share swing centered 10:35
  };

  write_loads(out_dir + "/load_2019.csv", 2019, days, false);
  write_loads(out_dir + "/load_2020.csv", 2020, days, true);
  write_temperature(out_dir + "/temperature_2019.csv", 2019, days, false);
  write_temperature(out_dir + "/temperature_2020.csv", 2020, days, true);

  // a canned explicit scenario: 5 s disconnect of the bus-9 load at 200 s
  std::ofstream scenario(out_dir + "/scenario_bus9.json");
  scenario << R"({
  "label": "bus9-disconnect",
  "compromised_buses": [9],
  "window": {"start": "2020-04-12T10:30:00", "end": "2020-04-12T10:35:00"},
  "threat": {
    "knowledge": "semi-oblivious",
    "access": "non-possession",
    "specificity": "targeted",
    "resources": "class-ii",
    "frequency": "iterative",
    "reproducibility": "multiple-times",
    "level": "l2",
    "assets": ["smart HVAC", "IoT-connected motors", "PLCs", "EV chargers", "water heaters"],
    "technique": "modify control logic or wireless compromise",
    "premise": "cyber: integrity"
  },
  "events": [
    {"time_s": 200.0, "bus": 9, "scale": 0.0, "restore_time_s": 205.0,
     "label": "disconnect load at bus 9"}
  ],
  "zone_mw": {
    "WEST": 840.0, "GENESE": 5040.0, "CENTRL": 728.0, "NORTH": 280.0,
    "MHK VL": 560.0, "CAPITL": 1400.0, "HUD VL": 700.0, "MILLWD": 350.0,
    "DUNWOD": 420.0, "N.Y.C.": 2870.0, "LONGIL": 812.0
  }
})";
  scenario << "\n";

  // run configuration for the bundled pipeline
  std::ofstream config(out_dir + "/config.json");
  config << R"({
  "years": [
    {"label": "2019", "load_csv": "data/sample/load_2019.csv",
     "temperature_csv": "data/sample/temperature_2019.csv"},
    {"label": "2020", "load_csv": "data/sample/load_2020.csv",
     "temperature_csv": "data/sample/temperature_2020.csv"}
  ],
  "resample_s": 3600,
  "dmd": {"rank": "auto"},
  "fixture": "ieee14",
  "preselect": {"quantile": 0.9},
  "simulation": {"duration_s": 300.0, "step_s": 0.005,
                 "attack_time_s": 200.0, "attack_duration_s": 5.0},
  "standards": ["NYISO", "NERC", "ERCOT"],
  "output_dir": "out/sample"
})";
  config << "\n";

  std::printf("sample data written under %s\n", out_dir.c_str());
  return 0;
}
