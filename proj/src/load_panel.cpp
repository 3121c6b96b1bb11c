#include "lcat/load_panel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "lcat/time_util.hpp"

namespace lcat {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size() && std::isfinite(out);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct LongRow {
  std::int64_t t;
  int region;
  double value;
};

int find_column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

}  // namespace

int LoadPanel::region_index(const std::string& name) const {
  for (std::size_t i = 0; i < regions.size(); ++i)
    if (regions[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<double> LoadPanel::total_series() const {
  std::vector<double> totals(sample_count(), 0.0);
  for (std::size_t t = 0; t < sample_count(); ++t)
    for (std::size_t r = 0; r < region_count(); ++r)
      totals[t] += values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t));
  return totals;
}

std::vector<double> TemperatureSeries::normalized() const {
  std::vector<double> out(celsius.size());
  const double span = norm_max_c - norm_min_c;
  for (std::size_t i = 0; i < celsius.size(); ++i) out[i] = (celsius[i] - norm_min_c) / span;
  return out;
}

LoadPanel ingest_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyInput, path + " has no header");
  const auto header = split_csv_line(line);
  const int tcol = find_column(header, schema.timestamp_col);
  const int rcol = find_column(header, schema.region_col);
  const int vcol = find_column(header, schema.value_col);
  if (tcol < 0 || rcol < 0 || vcol < 0)
    throw Error(ErrorCode::MalformedInput,
                path + ": header lacks required columns (" + schema.timestamp_col + ", " +
                    schema.region_col + ", " + schema.value_col + ")");

  std::vector<std::string> regions;
  std::map<std::string, int> region_ids;
  std::vector<LongRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    const std::size_t need =
        static_cast<std::size_t>(std::max(tcol, std::max(rcol, vcol))) + 1;
    if (fields.size() < need)
      throw Error(ErrorCode::MalformedRow, path + ":" + std::to_string(line_no) +
                                               ": expected at least " + std::to_string(need) +
                                               " fields");
    std::int64_t t;
    if (!parse_iso8601(fields[static_cast<std::size_t>(tcol)], t))
      throw Error(ErrorCode::MalformedRow,
                  path + ":" + std::to_string(line_no) + ": bad timestamp '" +
                      fields[static_cast<std::size_t>(tcol)] + "'");
    double v;
    if (!parse_double(fields[static_cast<std::size_t>(vcol)], v))
      throw Error(ErrorCode::MalformedRow, path + ":" + std::to_string(line_no) +
                                               ": bad value '" +
                                               fields[static_cast<std::size_t>(vcol)] + "'");
    if (v < 0.0)
      throw Error(ErrorCode::MalformedRow,
                  path + ":" + std::to_string(line_no) + ": negative demand");
    const std::string& rname = fields[static_cast<std::size_t>(rcol)];
    if (rname.empty())
      throw Error(ErrorCode::MalformedRow,
                  path + ":" + std::to_string(line_no) + ": empty region");
    auto it = region_ids.find(rname);
    if (it == region_ids.end()) {
      it = region_ids.emplace(rname, static_cast<int>(regions.size())).first;
      regions.push_back(rname);
    }
    rows.push_back({t, it->second, v});
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, path + " has no data rows");

  // global time grid from the union of observed instants
  std::set<std::int64_t> stamp_set;
  for (const auto& r : rows) stamp_set.insert(r.t);
  std::vector<std::int64_t> stamps(stamp_set.begin(), stamp_set.end());
  std::int64_t step = 0;
  if (stamps.size() >= 2) {
    step = stamps[1] - stamps[0];
    for (std::size_t i = 1; i + 1 < stamps.size(); ++i)
      step = std::min(step, stamps[i + 1] - stamps[i]);
  }
  if (step <= 0)
    throw Error(ErrorCode::NonUniformStep, path + ": cannot infer a positive resolution");
  for (std::int64_t s : stamps)
    if ((s - stamps.front()) % step != 0)
      throw Error(ErrorCode::NonUniformStep,
                  path + ": timestamp " + format_iso8601(s) + " is off the " +
                      std::to_string(step) + " s grid");

  const std::size_t m = static_cast<std::size_t>((stamps.back() - stamps.front()) / step) + 1;
  const std::size_t n = regions.size();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(m));
  Eigen::MatrixXi cnt = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(m));
  for (const auto& r : rows) {
    const auto col = static_cast<Eigen::Index>((r.t - stamps.front()) / step);
    acc(r.region, col) += r.value;
    cnt(r.region, col) += 1;
  }

  LoadPanel panel;
  panel.regions = std::move(regions);
  panel.resolution_s = step;
  panel.timestamps.resize(m);
  for (std::size_t j = 0; j < m; ++j)
    panel.timestamps[j] = stamps.front() + static_cast<std::int64_t>(j) * step;
  panel.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));

  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < m; ++j) {
      const auto col = static_cast<Eigen::Index>(j);
      panel.values(row, col) =
          cnt(row, col) > 0 ? acc(row, col) / cnt(row, col) : std::nan("");
    }
    // gap policy: interior runs of <= 2 missing samples are linearly
    // interpolated, anything else refuses the file
    std::size_t j = 0;
    while (j < m) {
      if (cnt(row, static_cast<Eigen::Index>(j)) > 0) {
        ++j;
        continue;
      }
      std::size_t g0 = j;
      while (j < m && cnt(row, static_cast<Eigen::Index>(j)) == 0) ++j;
      const std::size_t glen = j - g0;
      if (g0 == 0 || j == m)
        throw Error(ErrorCode::NonUniformStep,
                    path + ": region " + panel.regions[i] + " has an edge gap of " +
                        std::to_string(glen) + " sample(s)");
      if (glen > 2)
        throw Error(ErrorCode::NonUniformStep,
                    path + ": region " + panel.regions[i] + " has a " + std::to_string(glen) +
                        "-step gap at " + format_iso8601(panel.timestamps[g0]));
      const double left = panel.values(row, static_cast<Eigen::Index>(g0 - 1));
      const double right = panel.values(row, static_cast<Eigen::Index>(j));
      for (std::size_t k = 0; k < glen; ++k) {
        const double w = static_cast<double>(k + 1) / static_cast<double>(glen + 1);
        panel.values(row, static_cast<Eigen::Index>(g0 + k)) = left + (right - left) * w;
      }
    }
  }
  return panel;
}

void write_panel_csv(const LoadPanel& panel, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  out << "timestamp";
  for (const auto& r : panel.regions) out << ',' << r;
  out << '\n';
  for (std::size_t j = 0; j < panel.sample_count(); ++j) {
    out << format_iso8601(panel.timestamps[j]);
    for (std::size_t i = 0; i < panel.region_count(); ++i)
      out << ',' << format_double(panel.values(static_cast<Eigen::Index>(i),
                                               static_cast<Eigen::Index>(j)));
    out << '\n';
  }
}

LoadPanel read_panel_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyInput, path + " has no header");
  auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "timestamp")
    throw Error(ErrorCode::MalformedInput, path + ": wide panel header must start 'timestamp'");

  LoadPanel panel;
  panel.regions.assign(header.begin() + 1, header.end());
  {
    std::set<std::string> seen;
    for (const auto& r : panel.regions)
      if (r.empty() || !seen.insert(r).second)
        throw Error(ErrorCode::MalformedInput, path + ": empty or duplicate region column");
  }
  std::vector<std::vector<double>> cols;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw Error(ErrorCode::MalformedRow,
                  path + ":" + std::to_string(line_no) + ": field count mismatch");
    std::int64_t t;
    if (!parse_iso8601(fields[0], t))
      throw Error(ErrorCode::MalformedRow,
                  path + ":" + std::to_string(line_no) + ": bad timestamp '" + fields[0] + "'");
    panel.timestamps.push_back(t);
    std::vector<double> row(panel.regions.size());
    for (std::size_t i = 0; i < panel.regions.size(); ++i) {
      if (!parse_double(fields[i + 1], row[i]))
        throw Error(ErrorCode::MalformedRow,
                    path + ":" + std::to_string(line_no) + ": bad value '" + fields[i + 1] + "'");
    }
    cols.push_back(std::move(row));
  }
  if (panel.timestamps.empty()) throw Error(ErrorCode::EmptyInput, path + " has no data rows");
  if (panel.timestamps.size() >= 2) {
    panel.resolution_s = panel.timestamps[1] - panel.timestamps[0];
    for (std::size_t j = 1; j < panel.timestamps.size(); ++j)
      if (panel.timestamps[j] - panel.timestamps[j - 1] != panel.resolution_s)
        throw Error(ErrorCode::NonUniformStep, path + ": non-uniform timestamps");
  }
  panel.values.resize(static_cast<Eigen::Index>(panel.regions.size()),
                      static_cast<Eigen::Index>(panel.timestamps.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < panel.regions.size(); ++i)
      panel.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cols[j][i];
  return panel;
}

LoadPanel resample(const LoadPanel& panel, std::int64_t target_resolution_s) {
  if (panel.resolution_s <= 0)
    throw Error(ErrorCode::IncompatibleResolution, "source panel has no resolution");
  if (target_resolution_s <= 0 || target_resolution_s % panel.resolution_s != 0)
    throw Error(ErrorCode::IncompatibleResolution,
                std::to_string(target_resolution_s) + " s is not an integer multiple of " +
                    std::to_string(panel.resolution_s) + " s");
  const std::size_t k = static_cast<std::size_t>(target_resolution_s / panel.resolution_s);
  const std::size_t m_out = panel.sample_count() / k;
  if (m_out == 0)
    throw Error(ErrorCode::IncompatibleResolution, "panel shorter than one target block");

  LoadPanel out;
  out.regions = panel.regions;
  out.resolution_s = target_resolution_s;
  out.timestamps.resize(m_out);
  out.values.resize(panel.values.rows(), static_cast<Eigen::Index>(m_out));
  for (std::size_t j = 0; j < m_out; ++j) {
    out.timestamps[j] = panel.timestamps[j * k];
    for (Eigen::Index i = 0; i < panel.values.rows(); ++i) {
      double sum = 0.0;
      for (std::size_t u = 0; u < k; ++u)
        sum += panel.values(i, static_cast<Eigen::Index>(j * k + u));
      out.values(i, static_cast<Eigen::Index>(j)) = sum / static_cast<double>(k);
    }
  }
  return out;
}

LoadPanel normalize_minmax(const LoadPanel& panel, NormalizeMode mode) {
  LoadPanel out = panel;
  if (mode == NormalizeMode::Global) {
    const double lo = panel.values.minCoeff();
    const double hi = panel.values.maxCoeff();
    if (!(hi > lo)) throw Error(ErrorCode::DegenerateRange, "constant panel");
    out.values = (panel.values.array() - lo) / (hi - lo);
    return out;
  }
  for (Eigen::Index i = 0; i < panel.values.rows(); ++i) {
    const double lo = panel.values.row(i).minCoeff();
    const double hi = panel.values.row(i).maxCoeff();
    if (!(hi > lo))
      throw Error(ErrorCode::DegenerateRange, "constant region " + panel.regions[
                      static_cast<std::size_t>(i)]);
    out.values.row(i) = (panel.values.row(i).array() - lo) / (hi - lo);
  }
  return out;
}

namespace {

struct DayKey {
  int month;
  int day;
  bool operator<(const DayKey& o) const {
    return month != o.month ? month < o.month : day < o.day;
  }
};

std::map<DayKey, std::vector<std::pair<int, double>>> by_day(const TemperatureSeries& s) {
  // second-of-day tagged samples per month+day
  std::map<DayKey, std::vector<std::pair<int, double>>> days;
  for (std::size_t i = 0; i < s.timestamps.size(); ++i) {
    const CivilTime c = civil_from_seconds(s.timestamps[i]);
    days[{c.month, c.day}].push_back({c.hour * 3600 + c.minute * 60 + c.second, s.celsius[i]});
  }
  return days;
}

}  // namespace

std::vector<DaySimilarity> temperature_similarity(const TemperatureSeries& a,
                                                  const TemperatureSeries& b,
                                                  double eps_celsius) {
  auto days_a = by_day(a);
  auto days_b = by_day(b);
  if (days_a.size() != days_b.size())
    throw Error(ErrorCode::WindowMismatch, "series cover different day sets");

  std::vector<DaySimilarity> scores;
  for (const auto& [key, samples_a] : days_a) {
    auto it = days_b.find(key);
    if (it == days_b.end())
      throw Error(ErrorCode::WindowMismatch,
                  "day " + std::to_string(key.month) + "-" + std::to_string(key.day) +
                      " missing from second series");
    const auto& samples_b = it->second;
    if (samples_a.size() != samples_b.size())
      throw Error(ErrorCode::WindowMismatch,
                  "sample count differs on " + std::to_string(key.month) + "-" +
                      std::to_string(key.day));
    double sum = 0.0;
    for (std::size_t i = 0; i < samples_a.size(); ++i) {
      if (samples_a[i].first != samples_b[i].first)
        throw Error(ErrorCode::WindowMismatch,
                    "time-of-day grids differ on " + std::to_string(key.month) + "-" +
                        std::to_string(key.day));
      const double denom = std::max(std::abs(samples_a[i].second), eps_celsius);
      sum += std::abs(samples_a[i].second - samples_b[i].second) / denom * 100.0;
    }
    scores.push_back({key.month, key.day, sum / static_cast<double>(samples_a.size())});
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [](const DaySimilarity& x, const DaySimilarity& y) {
                     return x.avg_pct_difference < y.avg_pct_difference;
                   });
  return scores;
}

TemperatureSeries ingest_temperature_csv(const std::string& path, const CsvSchema& schema,
                                         double norm_min_c, double norm_max_c) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyInput, path + " has no header");
  const auto header = split_csv_line(line);
  const int tcol = find_column(header, schema.timestamp_col);
  const int vcol = find_column(header, schema.value_col);
  if (tcol < 0 || vcol < 0)
    throw Error(ErrorCode::MalformedInput, path + ": header lacks timestamp/value columns");

  TemperatureSeries series;
  series.norm_min_c = norm_min_c;
  series.norm_max_c = norm_max_c;
  std::vector<std::pair<std::int64_t, double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    const std::size_t need = static_cast<std::size_t>(std::max(tcol, vcol)) + 1;
    if (fields.size() < need)
      throw Error(ErrorCode::MalformedRow,
                  path + ":" + std::to_string(line_no) + ": too few fields");
    std::int64_t t;
    double v;
    if (!parse_iso8601(fields[static_cast<std::size_t>(tcol)], t) ||
        !parse_double(fields[static_cast<std::size_t>(vcol)], v))
      throw Error(ErrorCode::MalformedRow,
                  path + ":" + std::to_string(line_no) + ": unparseable row");
    rows.push_back({t, v});
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, path + " has no data rows");
  std::sort(rows.begin(), rows.end());
  for (const auto& [t, v] : rows) {
    series.timestamps.push_back(t);
    series.celsius.push_back(v);
  }
  return series;
}

DailyProfileGrid daily_profile_grid(const LoadPanel& panel, bool weekday_only) {
  const auto totals = panel.total_series();
  std::map<std::int64_t, std::array<std::pair<double, int>, 24>> days;  // day -> per-hour (sum, n)
  for (std::size_t j = 0; j < panel.sample_count(); ++j) {
    const std::int64_t t = panel.timestamps[j];
    std::int64_t day = t / 86400;
    if (t % 86400 < 0) day -= 1;
    if (weekday_only && weekday_from_seconds(t) >= 5) continue;
    const int hour = civil_from_seconds(t).hour;
    auto& slot = days[day][static_cast<std::size_t>(hour)];
    slot.first += totals[j];
    slot.second += 1;
  }
  DailyProfileGrid grid;
  grid.values.resize(static_cast<Eigen::Index>(days.size()), 24);
  grid.values.setZero();
  Eigen::Index row = 0;
  for (const auto& [day, hours] : days) {
    const CivilTime c = civil_from_seconds(day * 86400);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", c.year, c.month, c.day);
    grid.day_labels.push_back(buf);
    for (int h = 0; h < 24; ++h) {
      const auto& slot = hours[static_cast<std::size_t>(h)];
      grid.values(row, h) = slot.second > 0 ? slot.first / slot.second : 0.0;
    }
    ++row;
  }
  return grid;
}

void write_profile_grid_csv(const DailyProfileGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  out << "day";
  for (int h = 0; h < 24; ++h) out << ",h" << h;
  out << '\n';
  for (Eigen::Index i = 0; i < grid.values.rows(); ++i) {
    out << grid.day_labels[static_cast<std::size_t>(i)];
    for (int h = 0; h < 24; ++h) out << ',' << format_double(grid.values(i, h));
    out << '\n';
  }
}

}  // namespace lcat
