#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qaplon/generator.hpp"
#include "qaplon/metrics.hpp"

namespace qaplon {

/// z for a two-sided 95% normal interval.
inline constexpr double kWaldZ95 = 1.959964;

struct WaldInterval {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
  bool degenerate = false;  // single sample, zero-width interval
};

/// mean +/- z * sd / sqrt(m) with the m-1 sample standard deviation.
/// Absent for an empty sample list. Only confidence = 0.95 is supported.
std::optional<WaldInterval> wald_ci(std::span<const double> samples,
                                    double confidence = 0.95);

/// Protocol batch: instances_per_cell random instances per class per
/// dimension, full pipeline each, aggregated per (class, n, metric).
struct BatchConfig {
  std::vector<int> dimensions{5, 6, 7, 8, 9, 10};
  int instances_per_cell = 30;
  std::vector<InstanceClass> classes{InstanceClass::kUniform,
                                     InstanceClass::kRealLike};
  std::uint64_t base_seed = 1;
  std::filesystem::path output_dir = "out";
  unsigned workers = 0;  // 0 = hardware concurrency
  double eps = 0.05;
  bool write_edges = false;
  bool write_tables = false;

  /// Generator parameters shared by all cells (n and seed are set per
  /// cell); defaults are the protocol values.
  GeneratorConfig generator;
};

void validate(const BatchConfig& cfg);

/// Stable per-cell seed: mixes base_seed, the class tag, n and the
/// instance index so cells are independently re-runnable.
std::uint64_t derive_cell_seed(std::uint64_t base_seed, InstanceClass klass,
                               int n, int index);

struct AggregateRow {
  std::string klass;
  int n = 0;
  std::string metric;
  std::optional<double> mean;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::size_t sample_count = 0;
  std::size_t undefined_count = 0;
};

enum class CellStatus { kOk, kReused, kSkipped, kFailed };

struct CellResult {
  InstanceClass klass = InstanceClass::kUniform;
  int n = 0;
  int index = 0;
  std::uint64_t seed = 0;
  CellStatus status = CellStatus::kOk;
  std::string reason;  // for skipped/failed cells
  std::optional<MetricsReport> report;
};

struct BatchResult {
  std::vector<CellResult> cells;
  std::vector<AggregateRow> rows;
  std::size_t ok_cells = 0;
  std::size_t reused_cells = 0;
  std::size_t skipped_cells = 0;
  std::size_t failed_cells = 0;
};

/// Runs (or resumes) the batch. Cells already carrying a completion
/// marker are reused from disk; cells refused by the enumeration guard
/// are recorded as skipped; any other per-cell failure is recorded and
/// the remaining cells still run.
BatchResult run_batch(const BatchConfig& cfg);

/// Aggregate CSV (schema_version,class,n,metric,mean,ci_low,ci_high,
/// sample_count,undefined_count).
std::string aggregate_csv(std::span<const AggregateRow> rows);
std::vector<AggregateRow> parse_aggregate_csv(std::string_view text);

}  // namespace qaplon
