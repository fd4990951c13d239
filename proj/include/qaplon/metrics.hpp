#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "qaplon/landscape.hpp"
#include "qaplon/lon.hpp"

namespace qaplon {

/// One row of a degree-aggregated table: mean metric value over nodes of
/// the given degree, plus the homogeneous baseline for that degree.
struct DegreeTableRow {
  std::size_t degree = 0;
  double mean_value = 0.0;
  double baseline = 0.0;
};

/// Every per-instance statistic in one record. Undefined statistics
/// (fewer than two points, zero variance, no qualifying nodes) are
/// explicit absent values, never 0.
struct MetricsReport {
  int schema_version = 1;
  int n = 0;
  std::uint64_t space_size = 0;

  std::uint64_t n_nodes = 0;
  std::uint64_t n_edges_excl_self = 0;
  std::uint64_t n_edges_incl_self = 0;

  double rel_global_basin = 0.0;
  double rel_max_basin = 0.0;
  double rel_median_basin = 0.0;

  std::optional<double> corr_fitness_logbasin;

  double near_opt_eps = 0.05;
  double near_opt_mass_5pct = 0.0;
  bool near_opt_band_degenerate = false;

  double avg_w_ii = 0.0;
  std::optional<double> avg_w_ij_offdiag;

  double avg_in_strength = 0.0;
  double expected_in_strength = 0.0;
  std::optional<double> corr_fitness_instrength;

  std::optional<double> transitivity;

  std::optional<double> mean_disparity;
  double mean_out_degree = 0.0;
  std::optional<double> disparity_baseline;  // 1 / mean_out_degree

  std::optional<double> avg_path_length;
  std::optional<double> avg_dist_to_global_opt;
  std::uint64_t unreachable_pair_count = 0;

  std::uint64_t neutral_optima_count = 0;

  /// (in-degree k, mean in-strength, k * avg_w_ij baseline)
  std::vector<DegreeTableRow> strength_vs_indegree;
  /// (out-degree k, mean Y2, 1/k baseline)
  std::vector<DegreeTableRow> disparity_vs_outdegree;
};

// --- individual statistics ---

std::tuple<std::uint64_t, std::uint64_t, std::uint64_t> count_nodes_edges(
    const LocalOptimaNetwork& lon);

struct BasinStats {
  double rel_global = 0.0;
  double rel_max = 0.0;
  double rel_median = 0.0;  // lower median for even counts
};
BasinStats basin_stats(const BasinMap& bm, const LocalOptimaNetwork& lon);

/// Pearson correlation between node fitness (-cost) and ln(basin size).
std::optional<double> fitness_basin_correlation(const LocalOptimaNetwork& lon);

/// Fraction of the space whose descent ends within the cost band
/// cost <= (1+eps) * global cost. A zero global cost degenerates the
/// band to exact optimality and sets *degenerate.
double near_optimal_mass(const LocalOptimaNetwork& lon, double eps = 0.05,
                         bool* degenerate = nullptr);

/// (mean self-loop weight over all nodes, mean weight over existing
/// off-diagonal edges — absent when there are none).
std::pair<double, std::optional<double>> weight_averages(
    const LocalOptimaNetwork& lon);

struct StrengthStats {
  double avg_in_strength = 0.0;
  double expected_in_strength = 0.0;  // mean in-degree x mean edge weight
  std::vector<DegreeTableRow> table;
};
StrengthStats strength_stats(const LocalOptimaNetwork& lon);

std::optional<double> fitness_strength_correlation(
    const LocalOptimaNetwork& lon);

/// Global clustering coefficient of the simple undirected projection
/// (edge {i,j} iff w_ij > 0 or w_ji > 0), 3*triangles / connected triples.
std::optional<double> transitivity(const LocalOptimaNetwork& lon);

struct DisparityStats {
  std::optional<double> mean_y2;  // over nodes with out-degree >= 1
  double mean_out_degree = 0.0;   // over all nodes
  std::optional<double> baseline;  // 1 / mean_out_degree
  std::vector<DegreeTableRow> table;
};
DisparityStats disparity(const LocalOptimaNetwork& lon);

struct PathStats {
  std::optional<double> avg_path_length;
  std::optional<double> avg_dist_to_global_opt;
  std::uint64_t unreachable_pair_count = 0;
};
/// Directed shortest paths with edge length 1/w_ij, self-loops excluded.
PathStats path_stats(const LocalOptimaNetwork& lon, unsigned workers = 0);

/// Sample Pearson correlation; absent for fewer than two points or zero
/// variance on either axis.
std::optional<double> pearson(std::span<const double> x,
                              std::span<const double> y);

/// Runs every statistic above.
MetricsReport compute_metrics(const BasinMap& bm,
                              const LocalOptimaNetwork& lon,
                              double eps = 0.05, unsigned workers = 0);

// --- serialization ---

/// Flat JSON object (scalars only; tables are separate CSVs).
std::string metrics_to_json(const MetricsReport& r);
MetricsReport metrics_from_json(std::string_view text);

/// Scalar field names in the fixed CSV column order.
const std::vector<std::string>& metrics_csv_columns();
std::string metrics_csv_header();
std::string metrics_to_csv_row(const MetricsReport& r);

std::string strength_table_csv(const MetricsReport& r);
std::string disparity_table_csv(const MetricsReport& r);

}  // namespace qaplon
