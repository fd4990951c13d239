#include "qaplon/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "qaplon/errors.hpp"
#include "qaplon/landscape.hpp"
#include "qaplon/lon.hpp"
#include "qaplon/rng.hpp"

namespace qaplon {

namespace fs = std::filesystem;

namespace {

unsigned effective_workers(unsigned workers) {
  if (workers == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
  }
  return workers;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

// write-temp-then-rename so readers never observe partial files
void write_file_atomic(const fs::path& path, std::string_view content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string());
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

fs::path cell_dir(const BatchConfig& cfg, InstanceClass klass, int n,
                  int index) {
  char nbuf[16], ibuf[16];
  std::snprintf(nbuf, sizeof nbuf, "n%02d", n);
  std::snprintf(ibuf, sizeof ibuf, "i%02d", index);
  return cfg.output_dir / to_string(klass) / nbuf / ibuf;
}

struct MetricExtractor {
  const char* name;
  std::optional<double> (*get)(const MetricsReport&);
};

constexpr MetricExtractor kAggregatedMetrics[] = {
    {"n_nodes", [](const MetricsReport& r) {
       return std::optional<double>(static_cast<double>(r.n_nodes));
     }},
    {"n_edges_excl_self", [](const MetricsReport& r) {
       return std::optional<double>(static_cast<double>(r.n_edges_excl_self));
     }},
    {"n_edges_incl_self", [](const MetricsReport& r) {
       return std::optional<double>(static_cast<double>(r.n_edges_incl_self));
     }},
    {"rel_global_basin", [](const MetricsReport& r) {
       return std::optional<double>(r.rel_global_basin);
     }},
    {"rel_max_basin", [](const MetricsReport& r) {
       return std::optional<double>(r.rel_max_basin);
     }},
    {"rel_median_basin", [](const MetricsReport& r) {
       return std::optional<double>(r.rel_median_basin);
     }},
    {"corr_fitness_logbasin", [](const MetricsReport& r) {
       return r.corr_fitness_logbasin;
     }},
    {"near_opt_mass_5pct", [](const MetricsReport& r) {
       return std::optional<double>(r.near_opt_mass_5pct);
     }},
    {"avg_w_ii", [](const MetricsReport& r) {
       return std::optional<double>(r.avg_w_ii);
     }},
    {"avg_w_ij_offdiag", [](const MetricsReport& r) {
       return r.avg_w_ij_offdiag;
     }},
    {"avg_in_strength", [](const MetricsReport& r) {
       return std::optional<double>(r.avg_in_strength);
     }},
    {"expected_in_strength", [](const MetricsReport& r) {
       return std::optional<double>(r.expected_in_strength);
     }},
    {"corr_fitness_instrength", [](const MetricsReport& r) {
       return r.corr_fitness_instrength;
     }},
    {"transitivity", [](const MetricsReport& r) { return r.transitivity; }},
    {"mean_disparity", [](const MetricsReport& r) { return r.mean_disparity; }},
    {"mean_out_degree", [](const MetricsReport& r) {
       return std::optional<double>(r.mean_out_degree);
     }},
    {"disparity_baseline", [](const MetricsReport& r) {
       return r.disparity_baseline;
     }},
    {"avg_path_length", [](const MetricsReport& r) { return r.avg_path_length; }},
    {"avg_dist_to_global_opt", [](const MetricsReport& r) {
       return r.avg_dist_to_global_opt;
     }},
    {"unreachable_pair_count", [](const MetricsReport& r) {
       return std::optional<double>(
           static_cast<double>(r.unreachable_pair_count));
     }},
    {"neutral_optima_count", [](const MetricsReport& r) {
       return std::optional<double>(static_cast<double>(r.neutral_optima_count));
     }},
};

}  // namespace

std::optional<WaldInterval> wald_ci(std::span<const double> samples,
                                    double confidence) {
  if (confidence != 0.95)
    throw std::invalid_argument("wald_ci: only confidence = 0.95 is supported");
  const std::size_t m = samples.size();
  if (m == 0) return std::nullopt;

  double mean = 0.0;
  for (const double s : samples) mean += s;
  mean /= static_cast<double>(m);

  WaldInterval ci;
  ci.mean = mean;
  if (m == 1) {
    ci.low = ci.high = mean;
    ci.degenerate = true;
    return ci;
  }
  double ss = 0.0;
  for (const double s : samples) ss += (s - mean) * (s - mean);
  const double sd = std::sqrt(ss / static_cast<double>(m - 1));
  const double half = kWaldZ95 * sd / std::sqrt(static_cast<double>(m));
  ci.low = mean - half;
  ci.high = mean + half;
  return ci;
}

void validate(const BatchConfig& cfg) {
  if (cfg.dimensions.empty())
    throw ConfigError("batch: dimensions list must not be empty");
  for (const int n : cfg.dimensions)
    if (n < 2) throw ConfigError("batch: every dimension must be >= 2");
  if (cfg.instances_per_cell < 1)
    throw ConfigError("batch: instances_per_cell must be >= 1");
  if (cfg.classes.empty())
    throw ConfigError("batch: classes list must not be empty");
  if (!(cfg.eps >= 0.0)) throw ConfigError("batch: eps must be >= 0");
}

std::uint64_t derive_cell_seed(std::uint64_t base_seed, InstanceClass klass,
                               int n, int index) {
  std::uint64_t h = rng::mix64(base_seed ^ rng::fnv1a64(to_string(klass)));
  h = rng::mix64(h ^ static_cast<std::uint64_t>(n));
  h = rng::mix64(h ^ static_cast<std::uint64_t>(index));
  return h;
}

BatchResult run_batch(const BatchConfig& cfg) {
  validate(cfg);
  fs::create_directories(cfg.output_dir);

  BatchResult result;
  for (const InstanceClass klass : cfg.classes)
    for (const int n : cfg.dimensions)
      for (int index = 0; index < cfg.instances_per_cell; ++index) {
        CellResult cell;
        cell.klass = klass;
        cell.n = n;
        cell.index = index;
        cell.seed = derive_cell_seed(cfg.base_seed, klass, n, index);
        result.cells.push_back(std::move(cell));
      }

  const unsigned workers = effective_workers(cfg.workers);
  const unsigned pool_size = static_cast<unsigned>(
      std::min<std::size_t>(workers, result.cells.size()));
  const unsigned threads_per_cell = std::max(1u, workers / pool_size);

  auto run_cell = [&](CellResult& cell) {
    const fs::path dir = cell_dir(cfg, cell.klass, cell.n, cell.index);
    const fs::path done_marker = dir / ".done";
    const fs::path metrics_path = dir / "metrics.json";
    try {
      if (fs::exists(done_marker) && fs::exists(metrics_path)) {
        cell.report = metrics_from_json(read_file(metrics_path));
        cell.status = CellStatus::kReused;
        return;
      }
      fs::create_directories(dir);

      GeneratorConfig gen = cfg.generator;
      gen.klass = cell.klass;
      gen.n = cell.n;
      gen.seed = cell.seed;
      const QapInstance inst = generate(gen);
      write_file_atomic(dir / "instance.dat", serialize_instance(inst));

      const BasinMap bm = map_basins(inst, threads_per_cell);
      const LocalOptimaNetwork lon = build_lon(inst, bm, threads_per_cell);
      const MetricsReport report = compute_metrics(bm, lon, cfg.eps,
                                                   threads_per_cell);

      write_file_atomic(metrics_path, metrics_to_json(report));
      if (cfg.write_edges)
        write_file_atomic(dir / "lon.csv", export_edges(lon));
      if (cfg.write_tables) {
        write_file_atomic(dir / "strength_vs_indegree.csv",
                          strength_table_csv(report));
        write_file_atomic(dir / "disparity_vs_outdegree.csv",
                          disparity_table_csv(report));
      }
      write_file_atomic(done_marker, "");

      cell.report = report;
      cell.status = CellStatus::kOk;
    } catch (const ResourceLimitError& e) {
      cell.status = CellStatus::kSkipped;
      cell.reason = e.what();
      try {
        fs::create_directories(dir);
        write_file_atomic(dir / "skipped.txt", cell.reason + "\n");
      } catch (const std::exception&) {
      }
    } catch (const std::exception& e) {
      cell.status = CellStatus::kFailed;
      cell.reason = e.what();
    }
  };

  if (pool_size <= 1) {
    for (CellResult& cell : result.cells) run_cell(cell);
  } else {
    std::atomic<std::size_t> cursor{0};
    auto worker_fn = [&]() {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= result.cells.size()) break;
        run_cell(result.cells[i]);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(pool_size);
    for (unsigned t = 0; t < pool_size; ++t) pool.emplace_back(worker_fn);
    for (auto& th : pool) th.join();
  }

  for (const CellResult& cell : result.cells) {
    switch (cell.status) {
      case CellStatus::kOk: ++result.ok_cells; break;
      case CellStatus::kReused: ++result.reused_cells; break;
      case CellStatus::kSkipped: ++result.skipped_cells; break;
      case CellStatus::kFailed: ++result.failed_cells; break;
    }
  }

  // Aggregate per (class, n, metric) in deterministic order; undefined
  // per-instance values are excluded and counted.
  for (const InstanceClass klass : cfg.classes) {
    for (const int n : cfg.dimensions) {
      std::vector<const MetricsReport*> reports;
      for (const CellResult& cell : result.cells)
        if (cell.klass == klass && cell.n == n && cell.report)
          reports.push_back(&*cell.report);
      if (reports.empty()) continue;
      for (const MetricExtractor& metric : kAggregatedMetrics) {
        std::vector<double> samples;
        samples.reserve(reports.size());
        std::size_t undefined = 0;
        for (const MetricsReport* rep : reports) {
          if (const std::optional<double> v = metric.get(*rep))
            samples.push_back(*v);
          else
            ++undefined;
        }
        AggregateRow row;
        row.klass = to_string(klass);
        row.n = n;
        row.metric = metric.name;
        row.sample_count = samples.size();
        row.undefined_count = undefined;
        if (const auto ci = wald_ci(samples)) {
          row.mean = ci->mean;
          row.ci_low = ci->low;
          row.ci_high = ci->high;
        }
        result.rows.push_back(std::move(row));
      }
    }
  }

  write_file_atomic(cfg.output_dir / "aggregate.csv",
                    aggregate_csv(result.rows));

  // One metrics row per completed cell, plot-ready.
  {
    std::ostringstream os;
    os << "class,index,seed," << metrics_csv_header() << '\n';
    for (const CellResult& cell : result.cells) {
      if (!cell.report) continue;
      os << to_string(cell.klass) << ',' << cell.index << ',' << cell.seed
         << ',' << metrics_to_csv_row(*cell.report) << '\n';
    }
    write_file_atomic(cfg.output_dir / "metrics_table.csv", os.str());
  }

  return result;
}

std::string aggregate_csv(std::span<const AggregateRow> rows) {
  std::ostringstream os;
  os << "schema_version,class,n,metric,mean,ci_low,ci_high,sample_count,"
        "undefined_count\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? format_real(*v) : std::string();
  };
  for (const AggregateRow& row : rows)
    os << 1 << ',' << row.klass << ',' << row.n << ',' << row.metric << ','
       << opt(row.mean) << ',' << opt(row.ci_low) << ',' << opt(row.ci_high)
       << ',' << row.sample_count << ',' << row.undefined_count << '\n';
  return os.str();
}

std::vector<AggregateRow> parse_aggregate_csv(std::string_view text) {
  std::vector<AggregateRow> rows;
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("schema_version", 0) == 0) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    while (fields.size() < 9) fields.emplace_back();
    if (fields.size() != 9)
      throw ParseError(line_no, "expected 9 fields in aggregate row");
    AggregateRow row;
    row.klass = fields[1];
    row.n = std::stoi(fields[2]);
    row.metric = fields[3];
    auto opt = [](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return std::strtod(s.c_str(), nullptr);
    };
    row.mean = opt(fields[4]);
    row.ci_low = opt(fields[5]);
    row.ci_high = opt(fields[6]);
    row.sample_count = static_cast<std::size_t>(std::stoull(fields[7]));
    row.undefined_count = static_cast<std::size_t>(std::stoull(fields[8]));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qaplon
