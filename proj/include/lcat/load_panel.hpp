#ifndef LCAT_LOAD_PANEL_HPP
#define LCAT_LOAD_PANEL_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "lcat/errors.hpp"

namespace lcat {

/// Spatio-temporal demand panel: one row per region, one column per instant.
/// Timestamps are strictly increasing with a constant step equal to
/// resolution_s. Values are MW (or unitless after normalization) and never
/// NaN; ingestion either fills small interior gaps or refuses the file.
struct LoadPanel {
  std::vector<std::string> regions;
  std::vector<std::int64_t> timestamps;  // wall-clock seconds
  Eigen::MatrixXd values;                // regions x timestamps
  std::int64_t resolution_s = 0;

  std::size_t region_count() const { return regions.size(); }
  std::size_t sample_count() const { return timestamps.size(); }
  int region_index(const std::string& name) const;  // -1 when absent
  std::vector<double> total_series() const;         // per-sample sum over regions
};

/// Temperature track with the min/max Celsius bounds used for normalization.
struct TemperatureSeries {
  std::vector<std::int64_t> timestamps;
  std::vector<double> celsius;
  double norm_min_c = -7.22;
  double norm_max_c = 33.9;

  std::vector<double> normalized() const;  // (t - min) / (max - min)
};

struct CsvSchema {
  std::string timestamp_col = "timestamp";
  std::string region_col = "region";
  std::string value_col = "value";
};

enum class NormalizeMode { PerRegion, Global };

struct DaySimilarity {
  int month = 0;
  int day = 0;
  double avg_pct_difference = 0.0;
};

/// Day-of-period x hour-of-day grid of mean total demand, heatmap-ready.
struct DailyProfileGrid {
  std::vector<std::string> day_labels;  // "YYYY-MM-DD"
  Eigen::MatrixXd values;               // days x 24
};

// Long-format ingestion: one row per (timestamp, region, value). Rows may
// arrive unsorted; duplicate (region, timestamp) entries (DST folds) are
// averaged. Interior gaps of at most two steps are linearly interpolated,
// anything longer and any leading/trailing gap raises NonUniformStep.
LoadPanel ingest_csv(const std::string& path, const CsvSchema& schema = {});

// Wide-format panel serialization: first column timestamp, one column per
// region. Values round-trip bit-identically.
void write_panel_csv(const LoadPanel& panel, const std::string& path);
LoadPanel read_panel_csv(const std::string& path);

// Block-mean downsampling. target_resolution_s must be an integer multiple
// of the panel resolution; a trailing partial block is dropped.
LoadPanel resample(const LoadPanel& panel, std::int64_t target_resolution_s);

// Affine min-max map onto [0,1]. A constant region (or constant panel in
// Global mode) has no range to map and raises DegenerateRange.
LoadPanel normalize_minmax(const LoadPanel& panel, NormalizeMode mode = NormalizeMode::PerRegion);

// Per-day mean of |a-b| / max(|a|, eps) * 100, ranked ascending (most similar
// day first, ties in calendar order). Days are matched by month+day so that
// different years can be compared; every matched day must have the same
// sample count in both series.
std::vector<DaySimilarity> temperature_similarity(const TemperatureSeries& a,
                                                  const TemperatureSeries& b,
                                                  double eps_celsius = 0.1);

TemperatureSeries ingest_temperature_csv(const std::string& path, const CsvSchema& schema = {},
                                         double norm_min_c = -7.22, double norm_max_c = 33.9);

DailyProfileGrid daily_profile_grid(const LoadPanel& panel, bool weekday_only = false);
void write_profile_grid_csv(const DailyProfileGrid& grid, const std::string& path);

}  // namespace lcat

#endif  // LCAT_LOAD_PANEL_HPP
