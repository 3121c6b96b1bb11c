#include "lcat/attack.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <random>

#include <nlohmann/json.hpp>

#include "lcat/time_util.hpp"

namespace lcat {

using json = nlohmann::ordered_json;

namespace {

const char* to_string(Knowledge v) {
  return v == Knowledge::Oblivious ? "oblivious" : "semi-oblivious";
}
const char* to_string(Specificity v) {
  return v == Specificity::Targeted ? "targeted" : "non-targeted";
}
const char* to_string(ResourceClass v) {
  return v == ResourceClass::ClassI ? "class-i" : "class-ii";
}
const char* to_string(AttackFrequency v) {
  return v == AttackFrequency::Iterative ? "iterative" : "one-shot";
}
const char* to_string(Reproducibility v) {
  return v == Reproducibility::OneTime ? "one-time" : "multiple-times";
}
const char* to_string(AttackLevel v) { return v == AttackLevel::L1 ? "l1" : "l2"; }

template <typename T>
T enum_from(const std::string& s);

template <>
Knowledge enum_from(const std::string& s) {
  if (s == "oblivious") return Knowledge::Oblivious;
  if (s == "semi-oblivious") return Knowledge::SemiOblivious;
  throw Error(ErrorCode::MalformedInput, "bad knowledge '" + s + "'");
}
template <>
Specificity enum_from(const std::string& s) {
  if (s == "targeted") return Specificity::Targeted;
  if (s == "non-targeted") return Specificity::NonTargeted;
  throw Error(ErrorCode::MalformedInput, "bad specificity '" + s + "'");
}
template <>
ResourceClass enum_from(const std::string& s) {
  if (s == "class-i") return ResourceClass::ClassI;
  if (s == "class-ii") return ResourceClass::ClassII;
  throw Error(ErrorCode::MalformedInput, "bad resources '" + s + "'");
}
template <>
AttackFrequency enum_from(const std::string& s) {
  if (s == "iterative") return AttackFrequency::Iterative;
  if (s == "one-shot") return AttackFrequency::OneShot;
  throw Error(ErrorCode::MalformedInput, "bad frequency '" + s + "'");
}
template <>
Reproducibility enum_from(const std::string& s) {
  if (s == "one-time") return Reproducibility::OneTime;
  if (s == "multiple-times") return Reproducibility::MultipleTimes;
  throw Error(ErrorCode::MalformedInput, "bad reproducibility '" + s + "'");
}
template <>
AttackLevel enum_from(const std::string& s) {
  if (s == "l1") return AttackLevel::L1;
  if (s == "l2") return AttackLevel::L2;
  throw Error(ErrorCode::MalformedInput, "bad level '" + s + "'");
}

}  // namespace

ThreatModel load_changing_threat_model() {
  ThreatModel t;
  t.knowledge = Knowledge::SemiOblivious;
  t.access = Access::NonPossession;
  t.specificity = Specificity::Targeted;
  t.resources = ResourceClass::ClassII;
  t.frequency = AttackFrequency::Iterative;
  t.reproducibility = Reproducibility::MultipleTimes;
  t.level = AttackLevel::L2;
  t.assets = {"smart HVAC", "IoT-connected motors", "PLCs", "EV chargers", "water heaters"};
  t.technique = "modify control logic or wireless compromise";
  t.premise = "cyber: integrity";
  return t;
}

void LtiPlant::validate() const {
  if (G.rows() != G.cols()) throw Error(ErrorCode::DimensionMismatch, "G must be square");
  if (B.rows() != G.rows()) throw Error(ErrorCode::DimensionMismatch, "B rows must match G");
  if (C.cols() != G.rows()) throw Error(ErrorCode::DimensionMismatch, "C cols must match G");
  if (H_ctl.size() != 0 && (H_ctl.rows() != B.cols() || H_ctl.cols() != C.rows()))
    throw Error(ErrorCode::DimensionMismatch, "control law must map outputs to inputs");
}

std::function<Eigen::VectorXd()> make_uniform_noise(Eigen::Index dim, double bound,
                                                    std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng, dim, bound]() {
    std::uniform_real_distribution<double> dist(-bound, bound);
    Eigen::VectorXd e(dim);
    for (Eigen::Index i = 0; i < dim; ++i) e(i) = dist(*rng);
    return e;
  };
}

LtiOutput lti_step(const LtiPlant& plant, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
  plant.validate();
  if (x.size() != plant.G.rows() || u.size() != plant.B.cols())
    throw Error(ErrorCode::DimensionMismatch, "state/control sizes disagree with the plant");
  LtiOutput out;
  out.x_next = plant.G * x + plant.B * u;
  out.y = plant.C * x;
  if (plant.noise) out.y += plant.noise();
  return out;
}

Eigen::VectorXd attack_controls(const Eigen::VectorXd& u, const Eigen::VectorXd& delta_u) {
  if (u.size() != delta_u.size())
    throw Error(ErrorCode::DimensionMismatch, "control and alteration sizes differ");
  return u + delta_u;
}

double total_demand(const std::vector<double>& unaltered, const std::vector<double>& altered,
                    double losses_pu) {
  double total = losses_pu;
  for (double p : unaltered) total += p;
  for (double p : altered) total += p;
  return total;
}

void AttackScenario::validate(const GridModel& model) const {
  for (int bus : compromised_buses)
    if (model.bus_index(bus) < 0)
      throw Error(ErrorCode::UnknownBus, "compromised bus " + std::to_string(bus) +
                                             " not in the target model");
  const double window_s = static_cast<double>(window_end - window_start);
  for (const auto& ev : events) {
    if (model.bus_index(ev.bus) < 0)
      throw Error(ErrorCode::UnknownBus,
                  "event bus " + std::to_string(ev.bus) + " not in the target model");
    if (window_s > 0.0 && (ev.time_s < 0.0 || ev.time_s > window_s))
      throw Error(ErrorCode::EventOutsideWindow,
                  "event at " + std::to_string(ev.time_s) + " s lies outside the " +
                      std::to_string(window_s) + " s scenario window");
  }
}

namespace {

json threat_to_json(const ThreatModel& t) {
  json j;
  j["knowledge"] = to_string(t.knowledge);
  j["access"] = "non-possession";
  j["specificity"] = to_string(t.specificity);
  j["resources"] = to_string(t.resources);
  j["frequency"] = to_string(t.frequency);
  j["reproducibility"] = to_string(t.reproducibility);
  j["level"] = to_string(t.level);
  j["assets"] = t.assets;
  j["technique"] = t.technique;
  j["premise"] = t.premise;
  return j;
}

ThreatModel threat_from_json(const json& j) {
  ThreatModel t;
  t.knowledge = enum_from<Knowledge>(j.at("knowledge").get<std::string>());
  if (j.at("access").get<std::string>() != "non-possession")
    throw Error(ErrorCode::MalformedInput, "access must be 'non-possession'");
  t.specificity = enum_from<Specificity>(j.at("specificity").get<std::string>());
  t.resources = enum_from<ResourceClass>(j.at("resources").get<std::string>());
  t.frequency = enum_from<AttackFrequency>(j.at("frequency").get<std::string>());
  t.reproducibility = enum_from<Reproducibility>(j.at("reproducibility").get<std::string>());
  t.level = enum_from<AttackLevel>(j.at("level").get<std::string>());
  t.assets = j.value("assets", std::vector<std::string>{});
  t.technique = j.value("technique", "");
  t.premise = j.value("premise", "");
  return t;
}

json event_to_json(const LoadEvent& ev) {
  json j;
  j["time_s"] = ev.time_s;
  j["bus"] = ev.bus;
  if (ev.is_scale) {
    j["scale"] = ev.scale;
  } else {
    j["p_pu"] = ev.p_pu;
    j["q_pu"] = ev.q_pu;
  }
  if (ev.restore_time_s) j["restore_time_s"] = *ev.restore_time_s;
  if (!ev.label.empty()) j["label"] = ev.label;
  return j;
}

LoadEvent event_from_json(const json& j) {
  LoadEvent ev;
  ev.time_s = j.at("time_s").get<double>();
  ev.bus = j.at("bus").get<int>();
  if (j.contains("scale")) {
    ev.is_scale = true;
    ev.scale = j.at("scale").get<double>();
  } else {
    ev.is_scale = false;
    ev.p_pu = j.at("p_pu").get<double>();
    ev.q_pu = j.at("q_pu").get<double>();
  }
  if (j.contains("restore_time_s")) ev.restore_time_s = j.at("restore_time_s").get<double>();
  ev.label = j.value("label", "");
  return ev;
}

}  // namespace

void write_scenario_json(const AttackScenario& scenario, const std::string& path) {
  json j;
  j["label"] = scenario.label;
  j["compromised_buses"] = scenario.compromised_buses;
  j["window"] = {{"start", format_iso8601(scenario.window_start)},
                 {"end", format_iso8601(scenario.window_end)}};
  j["threat"] = threat_to_json(scenario.threat);
  json evs = json::array();
  for (const auto& ev : scenario.events) evs.push_back(event_to_json(ev));
  j["events"] = std::move(evs);
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  out << j.dump(2) << '\n';
}

AttackScenario read_scenario_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, path + ": " + e.what());
  }
  AttackScenario s;
  try {
    s.label = j.value("label", "");
    s.compromised_buses = j.at("compromised_buses").get<std::vector<int>>();
    if (j.contains("window")) {
      std::int64_t t;
      if (!parse_iso8601(j["window"].at("start").get<std::string>(), t))
        throw Error(ErrorCode::MalformedInput, "bad window start");
      s.window_start = t;
      if (!parse_iso8601(j["window"].at("end").get<std::string>(), t))
        throw Error(ErrorCode::MalformedInput, "bad window end");
      s.window_end = t;
    }
    if (j.contains("threat")) s.threat = threat_from_json(j.at("threat"));
    for (const auto& ev : j.at("events")) s.events.push_back(event_from_json(ev));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, path + ": " + e.what());
  }
  return s;
}

std::vector<double> compute_ld(const std::vector<double>& tl_a, const std::vector<double>& tl_b) {
  if (tl_a.size() != tl_b.size())
    throw Error(ErrorCode::LengthMismatch, "total-load series lengths differ (" +
                                               std::to_string(tl_a.size()) + " vs " +
                                               std::to_string(tl_b.size()) + ")");
  std::vector<double> ld(tl_a.size());
  for (std::size_t i = 0; i < tl_a.size(); ++i) ld[i] = tl_a[i] - tl_b[i];
  return ld;
}

Eigen::MatrixXd compute_liid(const Eigen::MatrixXd& loads_a, const Eigen::MatrixXd& loads_b) {
  if (loads_a.rows() != loads_b.rows() || loads_a.cols() != loads_b.cols())
    throw Error(ErrorCode::LengthMismatch, "load matrices must share a shape");
  Eigen::MatrixXd liid(loads_a.rows(), loads_a.cols());
  for (Eigen::Index t = 0; t < loads_a.cols(); ++t) {
    double total_a = 0.0, total_b = 0.0;
    for (Eigen::Index i = 0; i < loads_a.rows(); ++i) {
      total_a += loads_a(i, t);
      total_b += loads_b(i, t);
    }
    if (!(total_a > 0.0) || !(total_b > 0.0))
      throw Error(ErrorCode::ZeroTotalLoad,
                  "non-positive total at column " + std::to_string(t));
    for (Eigen::Index i = 0; i < loads_a.rows(); ++i)
      liid(i, t) = loads_a(i, t) / total_a - loads_b(i, t) / total_b;
  }
  return liid;
}

TargetRecommendation select_target(const std::vector<double>& ld, const Eigen::MatrixXd& liid,
                                   const std::vector<int>& buses, double quantile) {
  if (liid.cols() != static_cast<Eigen::Index>(ld.size()))
    throw Error(ErrorCode::LengthMismatch, "LD length and LIID columns differ");
  if (liid.rows() != static_cast<Eigen::Index>(buses.size()))
    throw Error(ErrorCode::LengthMismatch, "bus list and LIID rows differ");
  TargetRecommendation rec;
  if (ld.empty()) return rec;

  // nearest-rank quantile threshold on LD
  std::vector<double> sorted = ld;
  std::sort(sorted.begin(), sorted.end());
  const auto qi = static_cast<std::size_t>(
      std::floor(quantile * static_cast<double>(sorted.size() - 1)));
  const double threshold = sorted[qi];
  std::vector<bool> high_ld(ld.size());
  for (std::size_t t = 0; t < ld.size(); ++t) high_ld[t] = ld[t] >= threshold;

  // global LIID minimum; ties to lowest bus id, then earliest time
  Eigen::Index best_i = 0;
  std::size_t best_t = 0;
  double best = liid(0, 0);
  for (std::size_t t = 0; t < ld.size(); ++t)
    for (Eigen::Index i = 0; i < liid.rows(); ++i) {
      const double v = liid(i, static_cast<Eigen::Index>(t));
      const bool better =
          v < best ||
          (v == best && (buses[static_cast<std::size_t>(i)] < buses[static_cast<std::size_t>(best_i)] ||
                         (buses[static_cast<std::size_t>(i)] == buses[static_cast<std::size_t>(best_i)] &&
                          t < best_t)));
      if (better) {
        best = v;
        best_i = i;
        best_t = t;
      }
    }

  if (!high_ld[best_t]) {
    rec.aligned = false;  // the trough misses every high-LD window
    return rec;
  }

  // grow the window while the target bus's LIID stays within 10% of the min
  const double limit = best + 0.1 * std::abs(best);
  std::size_t w0 = best_t, w1 = best_t;
  while (w0 > 0 && liid(best_i, static_cast<Eigen::Index>(w0 - 1)) <= limit) --w0;
  while (w1 + 1 < ld.size() && liid(best_i, static_cast<Eigen::Index>(w1 + 1)) <= limit) ++w1;

  rec.aligned = true;
  rec.window_start_index = w0;
  rec.window_end_index = w1;
  for (Eigen::Index i = 0; i < liid.rows(); ++i) {
    double row_min = liid(i, static_cast<Eigen::Index>(w0));
    for (std::size_t t = w0; t <= w1; ++t)
      row_min = std::min(row_min, liid(i, static_cast<Eigen::Index>(t)));
    if (row_min <= limit) rec.buses.push_back(buses[static_cast<std::size_t>(i)]);
  }
  std::sort(rec.buses.begin(), rec.buses.end());
  return rec;
}

PreselectionReport preselect(const LoadPanel& year_a, const LoadPanel& year_b, double quantile) {
  if (year_a.sample_count() != year_b.sample_count())
    throw Error(ErrorCode::LengthMismatch, "year panels have different lengths");
  if (year_a.regions != year_b.regions)
    throw Error(ErrorCode::LengthMismatch, "year panels list different regions");

  PreselectionReport report;
  report.timestamps = year_a.timestamps;

  // rows follow the zone -> bus mapping order
  const auto& zmap = nyiso_zone_bus_map();
  std::vector<int> row_of_zone;
  for (const auto& [zone, bus] : zmap) {
    const int idx = year_a.region_index(zone);
    if (idx < 0) throw Error(ErrorCode::MissingZone, "panel lacks zone " + zone);
    report.zones.push_back(zone);
    report.buses.push_back(bus);
    row_of_zone.push_back(idx);
  }

  const auto m = static_cast<Eigen::Index>(year_a.sample_count());
  const auto nz = static_cast<Eigen::Index>(zmap.size());
  Eigen::MatrixXd loads_a(nz, m), loads_b(nz, m);
  for (Eigen::Index z = 0; z < nz; ++z) {
    loads_a.row(z) = year_a.values.row(row_of_zone[static_cast<std::size_t>(z)]);
    loads_b.row(z) = year_b.values.row(row_of_zone[static_cast<std::size_t>(z)]);
  }

  // per-unit totals: each year rides on its own peak
  std::vector<double> tl_a(static_cast<std::size_t>(m)), tl_b(static_cast<std::size_t>(m));
  for (Eigen::Index t = 0; t < m; ++t) {
    tl_a[static_cast<std::size_t>(t)] = loads_a.col(t).sum();
    tl_b[static_cast<std::size_t>(t)] = loads_b.col(t).sum();
  }
  const double base_a = *std::max_element(tl_a.begin(), tl_a.end());
  const double base_b = *std::max_element(tl_b.begin(), tl_b.end());
  if (!(base_a > 0.0) || !(base_b > 0.0))
    throw Error(ErrorCode::ZeroTotalLoad, "a year panel has no demand");
  for (auto& v : tl_a) v /= base_a;
  for (auto& v : tl_b) v /= base_b;

  report.ld = compute_ld(tl_a, tl_b);
  report.liid = compute_liid(loads_a, loads_b);

  report.peak_ld_index = static_cast<std::size_t>(
      std::max_element(report.ld.begin(), report.ld.end()) - report.ld.begin());
  report.peak_ld = report.ld[report.peak_ld_index];

  Eigen::Index min_i = 0;
  Eigen::Index min_t = 0;
  double min_v = report.liid(0, 0);
  for (Eigen::Index t = 0; t < m; ++t)
    for (Eigen::Index i = 0; i < nz; ++i)
      if (report.liid(i, t) < min_v) {
        min_v = report.liid(i, t);
        min_i = i;
        min_t = t;
      }
  report.min_liid = min_v;
  report.min_liid_bus = report.buses[static_cast<std::size_t>(min_i)];
  report.min_liid_index = static_cast<std::size_t>(min_t);

  report.recommendation = select_target(report.ld, report.liid, report.buses, quantile);
  return report;
}

void write_preselection_json(const PreselectionReport& report, const std::string& path) {
  json j;
  j["zones"] = report.zones;
  j["buses"] = report.buses;
  j["peak_ld"] = report.peak_ld;
  j["peak_ld_time"] = format_iso8601(report.timestamps[report.peak_ld_index]);
  j["min_liid"] = report.min_liid;
  j["min_liid_bus"] = report.min_liid_bus;
  j["min_liid_time"] = format_iso8601(report.timestamps[report.min_liid_index]);
  if (report.recommendation.aligned) {
    j["verdict"] = "aligned";
    j["recommended_buses"] = report.recommendation.buses;
    j["window_start"] = format_iso8601(report.timestamps[report.recommendation.window_start_index]);
    j["window_end"] = format_iso8601(report.timestamps[report.recommendation.window_end_index]);
  } else {
    j["verdict"] = "NoAlignedTarget";
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  out << j.dump(2) << '\n';
}

void write_preselection_csv(const PreselectionReport& report, const std::string& ld_path,
                            const std::string& liid_path) {
  {
    std::ofstream out(ld_path);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + ld_path);
    out << "timestamp,ld\n";
    char buf[32];
    for (std::size_t t = 0; t < report.ld.size(); ++t) {
      std::snprintf(buf, sizeof buf, "%.17g", report.ld[t]);
      out << format_iso8601(report.timestamps[t]) << ',' << buf << '\n';
    }
  }
  {
    std::ofstream out(liid_path);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + liid_path);
    out << "timestamp";
    for (std::size_t z = 0; z < report.zones.size(); ++z)
      out << ',' << report.zones[z] << "_bus" << report.buses[z];
    out << '\n';
    char buf[32];
    for (std::size_t t = 0; t < report.ld.size(); ++t) {
      out << format_iso8601(report.timestamps[t]);
      for (Eigen::Index i = 0; i < report.liid.rows(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g",
                      report.liid(i, static_cast<Eigen::Index>(t)));
        out << ',' << buf;
      }
      out << '\n';
    }
  }
}

}  // namespace lcat
