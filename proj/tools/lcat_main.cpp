// lcat: batch front-end for the load-change feasibility pipeline.
//
//   lcat ingest    config.json   clean + resample + normalize the input panels
//   lcat dmd       config.json   decompose the normalized panels
//   lcat preselect config.json   LD/LIID preliminary analysis per day
//   lcat simulate  config.json   run the attack scenarios on the fixture
//   lcat report    config.json   consolidate everything into report.json
//
// Exit codes: 0 success, 2 validation, 3 numeric failure, 4 I/O.

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include <nlohmann/json.hpp>

#include "lcat/attack.hpp"
#include "lcat/dmd.hpp"
#include "lcat/grid.hpp"
#include "lcat/load_panel.hpp"
#include "lcat/protection.hpp"
#include "lcat/swing.hpp"
#include "lcat/time_util.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace lcat;

namespace {

struct YearInput {
  std::string label;
  std::string load_csv;
  std::string temperature_csv;  // optional
};

struct RunConfig {
  std::vector<YearInput> years;
  CsvSchema schema;
  std::int64_t resample_s = 0;  // 0 = keep source resolution
  bool weekday_only = false;
  int dmd_rank = kDmdAutoRank;
  std::string fixture = "ieee14";
  std::string scenario;  // empty = derive from preselection
  double quantile = 0.9;
  double duration_s = 300.0;
  double step_s = 0.005;
  double attack_time_s = 200.0;
  double attack_duration_s = 5.0;
  bool governor = false;
  std::string ufls;  // "", "NYISO", "ERCOT", or a JSON path
  std::vector<std::string> standards = {"NYISO"};
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  int jobs = 1;
};

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, path + ": " + e.what());
  }

  RunConfig cfg;
  try {
    for (const auto& y : j.at("years")) {
      YearInput yi;
      yi.label = y.at("label").get<std::string>();
      yi.load_csv = y.at("load_csv").get<std::string>();
      yi.temperature_csv = y.value("temperature_csv", "");
      cfg.years.push_back(yi);
    }
    if (j.contains("schema")) {
      cfg.schema.timestamp_col = j["schema"].value("timestamp", "timestamp");
      cfg.schema.region_col = j["schema"].value("region", "region");
      cfg.schema.value_col = j["schema"].value("value", "value");
    }
    cfg.resample_s = j.value("resample_s", static_cast<std::int64_t>(0));
    cfg.weekday_only = j.value("weekday_only", false);
    if (j.contains("dmd") && j["dmd"].contains("rank") && !j["dmd"]["rank"].is_string())
      cfg.dmd_rank = j["dmd"]["rank"].get<int>();
    cfg.fixture = j.value("fixture", "ieee14");
    if (j.contains("scenario") && j["scenario"].is_string())
      cfg.scenario = j["scenario"].get<std::string>();
    if (j.contains("preselect")) cfg.quantile = j["preselect"].value("quantile", 0.9);
    if (j.contains("simulation")) {
      const auto& s = j["simulation"];
      cfg.duration_s = s.value("duration_s", 300.0);
      cfg.step_s = s.value("step_s", 0.005);
      cfg.attack_time_s = s.value("attack_time_s", 200.0);
      cfg.attack_duration_s = s.value("attack_duration_s", 5.0);
      cfg.governor = s.value("governor", false);
      if (s.contains("ufls") && s["ufls"].is_string()) cfg.ufls = s["ufls"].get<std::string>();
    }
    if (j.contains("standards"))
      cfg.standards = j["standards"].get<std::vector<std::string>>();
    cfg.output_dir = j.value("output_dir", "out");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, path + ": " + e.what());
  }
  if (cfg.years.empty())
    throw Error(ErrorCode::MalformedInput, path + ": at least one year entry required");
  return cfg;
}

// referenced inputs must exist before any output is touched
void validate_inputs(const RunConfig& cfg, bool need_loads) {
  if (!(cfg.duration_s > 0.0))
    throw Error(ErrorCode::MalformedInput, "duration must be positive");
  if (!(cfg.step_s > 0.0))
    throw Error(ErrorCode::MalformedInput, "step must be positive");
  if (need_loads)
    for (const auto& y : cfg.years) {
      if (!fs::exists(y.load_csv))
        throw Error(ErrorCode::MalformedInput, "missing input: " + y.load_csv);
      if (!y.temperature_csv.empty() && !fs::exists(y.temperature_csv))
        throw Error(ErrorCode::MalformedInput, "missing input: " + y.temperature_csv);
    }
  if (cfg.fixture != "ieee14" && !fs::exists(cfg.fixture))
    throw Error(ErrorCode::MalformedInput, "missing fixture: " + cfg.fixture);
  if (!cfg.scenario.empty() && !fs::exists(cfg.scenario))
    throw Error(ErrorCode::MalformedInput, "missing scenario: " + cfg.scenario);
  for (const auto& name : cfg.standards)
    if (name != "NERC" && name != "ERCOT" && name != "NYISO" && !fs::exists(name))
      throw Error(ErrorCode::MalformedInput, "unknown standard: " + name);
}

GridModel load_fixture(const RunConfig& cfg) {
  if (cfg.fixture == "ieee14") return ieee14_fixture();
  if (cfg.fixture.size() > 4 && cfg.fixture.substr(cfg.fixture.size() - 4) == ".cdf")
    return read_grid_common_format(cfg.fixture);
  return read_grid_json(cfg.fixture);
}

FrequencyStandard load_standard(const std::string& name) {
  if (name == "NERC" || name == "ERCOT" || name == "NYISO") return standard_by_name(name);
  return read_standard_json(name);
}

std::string panels_dir(const RunConfig& cfg) { return cfg.output_dir + "/panels"; }
std::string dmd_dir(const RunConfig& cfg) { return cfg.output_dir + "/dmd"; }
std::string preselect_dir(const RunConfig& cfg) { return cfg.output_dir + "/preselect"; }
std::string traces_dir(const RunConfig& cfg) { return cfg.output_dir + "/traces"; }

// day key "MM-DD" of a wall-clock timestamp
std::string day_key(std::int64_t t) {
  const CivilTime c = civil_from_seconds(t);
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d-%02d", c.month, c.day);
  return buf;
}

// carve a panel into per-day panels keyed by month-day
std::map<std::string, LoadPanel> split_days(const LoadPanel& panel) {
  std::map<std::string, std::vector<std::size_t>> day_cols;
  for (std::size_t j = 0; j < panel.sample_count(); ++j)
    day_cols[day_key(panel.timestamps[j])].push_back(j);
  std::map<std::string, LoadPanel> out;
  for (const auto& [key, cols] : day_cols) {
    LoadPanel day;
    day.regions = panel.regions;
    day.resolution_s = panel.resolution_s;
    day.values.resize(panel.values.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) {
      day.timestamps.push_back(panel.timestamps[cols[k]]);
      day.values.col(static_cast<Eigen::Index>(k)) =
          panel.values.col(static_cast<Eigen::Index>(cols[k]));
    }
    out[key] = std::move(day);
  }
  return out;
}

int cmd_ingest(const RunConfig& cfg) {
  validate_inputs(cfg, true);
  fs::create_directories(panels_dir(cfg));
  for (const auto& y : cfg.years) {
    const LoadPanel raw = ingest_csv(y.load_csv, cfg.schema);
    write_panel_csv(raw, panels_dir(cfg) + "/" + y.label + "_raw.csv");

    LoadPanel working = raw;
    if (cfg.resample_s > 0 && cfg.resample_s != raw.resolution_s)
      working = resample(raw, cfg.resample_s);
    write_panel_csv(working, panels_dir(cfg) + "/" + y.label + "_panel.csv");
    write_panel_csv(normalize_minmax(working),
                    panels_dir(cfg) + "/" + y.label + "_normalized.csv");

    DailyProfileGrid grid = daily_profile_grid(working, cfg.weekday_only);
    const double lo = grid.values.minCoeff();
    const double hi = grid.values.maxCoeff();
    if (hi > lo) grid.values = (grid.values.array() - lo) / (hi - lo);
    write_profile_grid_csv(grid, panels_dir(cfg) + "/" + y.label + "_heatmap.csv");

    if (!y.temperature_csv.empty()) {
      const TemperatureSeries temp = ingest_temperature_csv(y.temperature_csv, cfg.schema);
      std::ofstream out(panels_dir(cfg) + "/" + y.label + "_temperature.csv");
      out << "timestamp,celsius,normalized\n";
      const auto norm = temp.normalized();
      char buf[64];
      for (std::size_t i = 0; i < temp.timestamps.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g", temp.celsius[i], norm[i]);
        out << format_iso8601(temp.timestamps[i]) << ',' << buf << '\n';
      }
    }
    std::cout << "ingested " << y.label << ": " << raw.region_count() << " regions x "
              << raw.sample_count() << " samples @ " << raw.resolution_s << " s\n";
  }

  // similarity ranking when both years carry temperature data
  if (cfg.years.size() >= 2 && !cfg.years[0].temperature_csv.empty() &&
      !cfg.years[1].temperature_csv.empty()) {
    const TemperatureSeries a = ingest_temperature_csv(cfg.years[0].temperature_csv, cfg.schema);
    const TemperatureSeries b = ingest_temperature_csv(cfg.years[1].temperature_csv, cfg.schema);
    const auto ranked = temperature_similarity(a, b);
    std::ofstream out(panels_dir(cfg) + "/temperature_similarity.csv");
    out << "rank,day,avg_pct_difference\n";
    char buf[48];
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%zu,%02d-%02d,%.17g", i + 1, ranked[i].month,
                    ranked[i].day, ranked[i].avg_pct_difference);
      out << buf << '\n';
    }
  }
  return 0;
}

int cmd_dmd(const RunConfig& cfg) {
  validate_inputs(cfg, false);
  fs::create_directories(dmd_dir(cfg));
  for (const auto& y : cfg.years) {
    const std::string src = panels_dir(cfg) + "/" + y.label + "_normalized.csv";
    if (!fs::exists(src))
      throw Error(ErrorCode::MalformedInput, src + " not found; run ingest first");
    const LoadPanel panel = read_panel_csv(src);
    const DmdResult result = dmd(build_snapshot_pair(panel), cfg.dmd_rank);
    write_dmd_json(result, dmd_dir(cfg) + "/" + y.label + "_dmd.json");

    const auto modes = mode_report(result, static_cast<double>(panel.resolution_s));
    std::ofstream out(dmd_dir(cfg) + "/" + y.label + "_modes.csv");
    out << "mode,frequency_hz,growth_rate_per_s,energy,zero_eigenvalue\n";
    char buf[128];
    for (const auto& m : modes) {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%d", m.index, m.frequency_hz,
                    m.growth_rate, m.energy, m.zero_eigenvalue ? 1 : 0);
      out << buf << '\n';
    }
    std::cout << "dmd " << y.label << ": rank " << result.rank << "\n";
  }
  return 0;
}

int cmd_preselect(const RunConfig& cfg) {
  validate_inputs(cfg, false);
  if (cfg.years.size() < 2)
    throw Error(ErrorCode::MalformedInput, "preselect needs two year entries");
  const std::string src_a = panels_dir(cfg) + "/" + cfg.years[0].label + "_raw.csv";
  const std::string src_b = panels_dir(cfg) + "/" + cfg.years[1].label + "_raw.csv";
  if (!fs::exists(src_a) || !fs::exists(src_b))
    throw Error(ErrorCode::MalformedInput, "raw panels not found; run ingest first");
  const auto days_a = split_days(read_panel_csv(src_a));
  const auto days_b = split_days(read_panel_csv(src_b));

  fs::create_directories(preselect_dir(cfg));
  json summary;
  summary["days"] = json::array();
  for (const auto& [day, panel_a] : days_a) {
    auto it = days_b.find(day);
    if (it == days_b.end()) continue;
    const PreselectionReport report = preselect(panel_a, it->second, cfg.quantile);
    write_preselection_json(report, preselect_dir(cfg) + "/" + day + ".json");
    write_preselection_csv(report, preselect_dir(cfg) + "/" + day + "_ld.csv",
                           preselect_dir(cfg) + "/" + day + "_liid.csv");
    json d;
    d["day"] = day;
    d["peak_ld"] = report.peak_ld;
    d["min_liid"] = report.min_liid;
    d["min_liid_bus"] = report.min_liid_bus;
    if (report.recommendation.aligned) {
      d["verdict"] = "aligned";
      d["buses"] = report.recommendation.buses;
      d["window_start"] =
          format_iso8601(report.timestamps[report.recommendation.window_start_index]);
      d["window_end"] =
          format_iso8601(report.timestamps[report.recommendation.window_end_index]);
    } else {
      d["verdict"] = "NoAlignedTarget";
    }
    summary["days"].push_back(d);
    std::cout << "preselect " << day << ": "
              << (report.recommendation.aligned ? "aligned" : "NoAlignedTarget") << "\n";
  }
  if (summary["days"].empty())
    throw Error(ErrorCode::MalformedInput, "no overlapping days between the two years");
  std::ofstream out(preselect_dir(cfg) + "/report.json");
  out << summary.dump(2) << '\n';
  return 0;
}

struct SimJob {
  std::string day;
  std::string label;  // year label
  std::map<std::string, double> zone_mw;
  std::vector<LoadEvent> events;
  bool mapped = true;
};

void run_sim_job(const RunConfig& cfg, const GridModel& fixture, const SimJob& job) {
  GridModel model = job.mapped ? map_zone_loads(fixture, job.zone_mw) : fixture;
  const PowerFlowSolution pf = power_flow(model, 1e-10, 30);

  SimulationConfig sim;
  sim.duration_s = cfg.duration_s;
  sim.step_s = cfg.step_s;
  sim.governor.enabled = cfg.governor;
  if (cfg.ufls == "NYISO")
    sim.ufls = nyiso_ufls_scheme();
  else if (cfg.ufls == "ERCOT")
    sim.ufls = ercot_ufls_scheme();
  else if (!cfg.ufls.empty())
    sim.ufls = read_ufls_json(cfg.ufls);

  const SimulationTrace trace = simulate(model, pf, job.events, sim);
  if (trace.diverged)
    throw Error(ErrorCode::Diverged, "run " + job.day + "/" + job.label +
                                         " left the speed validity band");

  const std::string stem = traces_dir(cfg) + "/" + job.day + "_" + job.label;
  write_trace_csv(trace, stem + "_trace.csv");
  write_trace_summary_json(trace, load_standard(cfg.standards.front()), stem + "_summary.json");
  for (const auto& name : cfg.standards) {
    const FrequencyStandard std_ = load_standard(name);
    write_violation_json(build_violation_report(trace, std_), stem + "_violations_" +
                                                                  std_.name + ".json");
  }
}

int cmd_simulate(const RunConfig& cfg) {
  validate_inputs(cfg, false);
  const GridModel fixture = load_fixture(cfg);
  std::vector<SimJob> jobs;

  if (!cfg.scenario.empty()) {
    // explicit scenario file: events as given, zone snapshot optional
    std::ifstream in(cfg.scenario);
    json sj;
    try {
      in >> sj;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedInput, cfg.scenario + ": " + e.what());
    }
    const AttackScenario scenario = read_scenario_json(cfg.scenario);
    scenario.validate(fixture);
    SimJob job;
    job.day = "scenario";
    job.label = scenario.label.empty() ? "run" : scenario.label;
    job.events = scenario.events;
    if (sj.contains("zone_mw")) {
      for (const auto& [zone, mw] : sj["zone_mw"].items())
        job.zone_mw[zone] = mw.get<double>();
    } else if (sj.contains("zone_csv")) {
      job.zone_mw = read_zone_snapshot_csv(sj["zone_csv"].get<std::string>());
    } else {
      job.mapped = false;  // run on the fixture's base-case loads
    }
    jobs.push_back(std::move(job));
  } else {
    // derive one job per aligned day and year from the preselection output
    const std::string pre = preselect_dir(cfg) + "/report.json";
    if (!fs::exists(pre))
      throw Error(ErrorCode::MalformedInput, pre + " not found; run preselect first");
    json summary;
    std::ifstream(pre) >> summary;

    for (const auto& d : summary["days"]) {
      if (d["verdict"] != "aligned") continue;
      const std::string day = d["day"].get<std::string>();
      const auto buses = d["buses"].get<std::vector<int>>();
      std::int64_t window_start;
      if (!parse_iso8601(d["window_start"].get<std::string>(), window_start))
        throw Error(ErrorCode::MalformedInput, "bad window_start in " + pre);

      std::vector<LoadEvent> events;
      for (int bus : buses) {
        LoadEvent ev;
        ev.time_s = cfg.attack_time_s;
        ev.bus = bus;
        ev.is_scale = true;
        ev.scale = 0.0;
        ev.restore_time_s = cfg.attack_time_s + cfg.attack_duration_s;
        ev.label = "disconnect load at bus " + std::to_string(bus);
        events.push_back(ev);
      }

      for (const auto& y : cfg.years) {
        const std::string src = panels_dir(cfg) + "/" + y.label + "_raw.csv";
        if (!fs::exists(src))
          throw Error(ErrorCode::MalformedInput, src + " not found; run ingest first");
        const auto days = split_days(read_panel_csv(src));
        const auto it = days.find(day);
        if (it == days.end()) continue;
        const LoadPanel& panel = it->second;

        // zone MW snapshot at the recommended window start (same time of day)
        std::size_t idx = 0;
        const CivilTime want = civil_from_seconds(window_start);
        for (std::size_t j = 0; j < panel.sample_count(); ++j) {
          const CivilTime c = civil_from_seconds(panel.timestamps[j]);
          if (c.hour == want.hour && c.minute == want.minute) {
            idx = j;
            break;
          }
        }
        SimJob job;
        job.day = day;
        job.label = y.label;
        job.events = events;
        for (std::size_t r = 0; r < panel.region_count(); ++r)
          job.zone_mw[panel.regions[r]] =
              panel.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(idx));
        jobs.push_back(std::move(job));
      }
    }
    if (jobs.empty())
      throw Error(ErrorCode::MalformedInput,
                  "no aligned day to simulate; supply a scenario file instead");
  }

  fs::create_directories(traces_dir(cfg));
  if (cfg.jobs <= 1 || jobs.size() <= 1) {
    for (const auto& job : jobs) run_sim_job(cfg, fixture, job);
  } else {
    std::mutex mu;
    std::size_t next = 0;
    std::exception_ptr failure;
    const auto worker = [&] {
      for (;;) {
        std::size_t mine;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (failure || next >= jobs.size()) return;
          mine = next++;
        }
        try {
          run_sim_job(cfg, fixture, jobs[mine]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    const int n_workers = std::min<int>(cfg.jobs, static_cast<int>(jobs.size()));
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  for (const auto& job : jobs)
    std::cout << "simulated " << job.day << " " << job.label << " (" << job.events.size()
              << " events)\n";
  return 0;
}

int cmd_report(const RunConfig& cfg) {
  validate_inputs(cfg, false);
  const std::string traces = traces_dir(cfg);
  std::vector<std::string> summaries;
  if (fs::exists(traces))
    for (const auto& entry : fs::directory_iterator(traces))
      if (entry.path().string().find("_summary.json") != std::string::npos)
        summaries.push_back(entry.path().string());
  if (summaries.empty())
    throw Error(ErrorCode::NothingToReport, "no traces under " + traces);
  std::sort(summaries.begin(), summaries.end());

  json report;
  report["years"] = json::array();
  for (const auto& y : cfg.years) {
    json yj;
    yj["label"] = y.label;
    const std::string panel_csv = panels_dir(cfg) + "/" + y.label + "_panel.csv";
    if (fs::exists(panel_csv)) {
      const LoadPanel panel = read_panel_csv(panel_csv);
      yj["regions"] = panel.region_count();
      yj["samples"] = panel.sample_count();
      yj["resolution_s"] = panel.resolution_s;
    }
    const std::string modes_csv = dmd_dir(cfg) + "/" + y.label + "_modes.csv";
    if (fs::exists(modes_csv)) {
      const std::string dmd_json = dmd_dir(cfg) + "/" + y.label + "_dmd.json";
      const DmdResult result = read_dmd_json(dmd_json);
      yj["dmd_rank"] = result.rank;
      json eigs = json::array();
      for (Eigen::Index i = 0; i < result.eigenvalues.size(); ++i)
        eigs.push_back(json::array(
            {result.eigenvalues(i).real(), result.eigenvalues(i).imag()}));
      yj["dmd_eigenvalues"] = std::move(eigs);
    }
    report["years"].push_back(yj);
  }

  const std::string pre = preselect_dir(cfg) + "/report.json";
  if (fs::exists(pre)) {
    json pj;
    std::ifstream(pre) >> pj;
    report["preselect"] = pj;
  }

  report["runs"] = json::array();
  for (const auto& path : summaries) {
    json sj;
    std::ifstream(path) >> sj;
    json run;
    run["name"] = fs::path(path).filename().string();
    run["peak_f_hz"] = sj["peak_f_hz"];
    run["min_f_hz"] = sj["min_f_hz"];
    run["diverged"] = sj["diverged"];

    json viols = json::array();
    const std::string stem = path.substr(0, path.size() - std::string("_summary.json").size());
    for (const auto& name : cfg.standards) {
      const std::string vpath = stem + "_violations_" + name + ".json";
      if (!fs::exists(vpath)) continue;
      json vj;
      std::ifstream(vpath) >> vj;
      json v;
      v["standard"] = vj["standard"];
      v["excursions"] = vj["excursions"].size();
      v["major_disturbance"] = vj["major_disturbance"];
      v["major_emergency"] = !vj["advisories"].empty();
      v["time_over_s"] = vj["time_over_s"];
      v["time_under_s"] = vj["time_under_s"];
      viols.push_back(v);
    }
    run["violations"] = std::move(viols);
    report["runs"].push_back(run);
  }

  std::ofstream out(cfg.output_dir + "/report.json");
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write report.json");
  out << report.dump(2) << '\n';
  std::cout << "report: " << report["runs"].size() << " runs consolidated\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"load-changing attack feasibility toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  double duration_override = -1.0, step_override = -1.0;
  std::string standard_override;
  int rank_override = 0;
  std::uint64_t seed = 0;
  int jobs = 1;

  for (const char* name : {"ingest", "dmd", "preselect", "simulate", "report"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("config", config_path, "run configuration JSON")->required();
    sub->add_option("--duration", duration_override, "simulation length, seconds");
    sub->add_option("--step", step_override, "integration step, seconds");
    sub->add_option("--standard", standard_override, "frequency standard to evaluate");
    sub->add_option("--rank", rank_override, "DMD truncation rank (0 = auto)");
    sub->add_option("--seed", seed, "noise seed for robustness scenarios");
    sub->add_option("--jobs", jobs, "parallel simulation workers");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_config(config_path);
    if (duration_override > 0.0) cfg.duration_s = duration_override;
    if (step_override > 0.0) cfg.step_s = step_override;
    if (!standard_override.empty()) cfg.standards = {standard_override};
    if (rank_override > 0) cfg.dmd_rank = rank_override;
    cfg.seed = seed;
    cfg.jobs = jobs;

    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "ingest") return cmd_ingest(cfg);
    if (cmd == "dmd") return cmd_dmd(cfg);
    if (cmd == "preselect") return cmd_preselect(cfg);
    if (cmd == "simulate") return cmd_simulate(cfg);
    if (cmd == "report") return cmd_report(cfg);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Numeric: return 3;
      case ErrorKind::Io: return 4;
      case ErrorKind::Validation: return 2;
    }
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
