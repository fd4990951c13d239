#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qaplon/batch.hpp"
#include "qaplon/generator.hpp"
#include "qaplon/landscape.hpp"
#include "qaplon/lon.hpp"
#include "qaplon/metrics.hpp"

namespace fs = std::filesystem;
using namespace qaplon;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

struct GeneratorFlags {
  std::string klass = "uniform";
  GeneratorConfig cfg;

  void add_param_options(CLI::App* cmd) {
    cmd->add_option("--d-max", cfg.d_max,
                    "Uniform class: disc radius / integer distance bound");
    cmd->add_option("--f-max", cfg.f_max, "Uniform class: max flow value");
    cmd->add_option("--M", cfg.cluster_field_radius,
                    "Real-like class: radius of the circle holding cluster centers");
    cmd->add_option("--K", cfg.cluster_max_points,
                    "Real-like class: max points per cluster");
    cmd->add_option("--m", cfg.cluster_radius, "Real-like class: cluster radius");
    cmd->add_option("--A", cfg.flow_exp_lo, "Real-like class: lower flow exponent");
    cmd->add_option("--B", cfg.flow_exp_hi, "Real-like class: upper flow exponent");
    cmd->add_option("--distance-mode", distance_mode,
                    "euclidean-points (default) or uniform-integers");
  }

  GeneratorConfig resolve() {
    cfg.klass = instance_class_from_string(klass);
    cfg.distance_mode = distance_mode_from_string(distance_mode);
    return cfg;
  }

  std::string distance_mode = "euclidean-points";
};

struct AnalyzeOutputs {
  std::string metrics_json;
  std::string metrics_csv;
  std::string edges;
  std::string graphml;
  std::string owners;
  std::string strength_table;
  std::string disparity_table;
};

void run_pipeline_outputs(const QapInstance& inst, const BasinMap& bm,
                          double eps, unsigned workers,
                          const AnalyzeOutputs& out) {
  const LocalOptimaNetwork lon = build_lon(inst, bm, workers);
  const MetricsReport report = compute_metrics(bm, lon, eps, workers);

  if (!out.metrics_json.empty())
    write_file(out.metrics_json, metrics_to_json(report));
  if (!out.metrics_csv.empty())
    write_file(out.metrics_csv,
               metrics_csv_header() + "\n" + metrics_to_csv_row(report) + "\n");
  if (!out.edges.empty()) write_file(out.edges, export_edges(lon));
  if (!out.graphml.empty()) write_file(out.graphml, export_graphml(lon));
  if (!out.owners.empty()) write_owner_dump(bm, out.owners);
  if (!out.strength_table.empty())
    write_file(out.strength_table, strength_table_csv(report));
  if (!out.disparity_table.empty())
    write_file(out.disparity_table, disparity_table_csv(report));
}

std::string csv_columns_help() {
  return "Metrics CSV column order: " + metrics_csv_header();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qaplon - exhaustive local optima network extraction and analysis "
      "for QAP instances"};
  app.require_subcommand(1);

  // ---- generate ----
  auto* gen_cmd = app.add_subcommand(
      "generate", "Generate a uniform or real-like QAP instance file");
  GeneratorFlags gen_flags;
  gen_cmd->add_option("--class", gen_flags.klass, "uniform or real-like")
      ->required();
  gen_cmd->add_option("--n", gen_flags.cfg.n, "Problem dimension")->required();
  gen_cmd->add_option("--seed", gen_flags.cfg.seed, "64-bit generator seed")
      ->required();
  gen_flags.add_param_options(gen_cmd);
  std::string gen_out;
  gen_cmd->add_option("-o,--output", gen_out, "Instance file path")->required();
  gen_cmd->callback([&] {
    const QapInstance inst = generate(gen_flags.resolve());
    write_file(gen_out, serialize_instance(inst));
  });

  // ---- analyze ----
  auto* an_cmd = app.add_subcommand(
      "analyze",
      "Map the basins of an instance, build its LON and compute all "
      "metrics. " + csv_columns_help());
  std::string an_input;
  AnalyzeOutputs an_out;
  double an_eps = 0.05;
  unsigned an_workers = 0;
  an_cmd->add_option("-i,--input", an_input, "Instance file")->required();
  an_cmd->add_option("-o,--metrics", an_out.metrics_json, "Metrics JSON path");
  an_cmd->add_option("--csv", an_out.metrics_csv, "Metrics CSV path");
  an_cmd->add_option("--edges", an_out.edges, "LON edge-list CSV path");
  an_cmd->add_option("--graphml", an_out.graphml, "LON GraphML path");
  an_cmd->add_option("--owners", an_out.owners, "Binary owner-array dump path");
  an_cmd->add_option("--strength-table", an_out.strength_table,
                     "In-strength vs in-degree CSV path");
  an_cmd->add_option("--disparity-table", an_out.disparity_table,
                     "Disparity vs out-degree CSV path");
  an_cmd->add_option("--eps", an_eps, "Near-optimal cost band (default 0.05)");
  an_cmd->add_option("--workers", an_workers, "Worker threads (0 = all cores)");
  an_cmd->callback([&] {
    const QapInstance inst = parse_instance(read_file(an_input));
    const BasinMap bm = map_basins(inst, an_workers);
    run_pipeline_outputs(inst, bm, an_eps, an_workers, an_out);
  });

  // ---- batch ----
  auto* batch_cmd = app.add_subcommand(
      "batch",
      "Run the full experimental protocol over a grid of dimensions and "
      "instance classes. " + csv_columns_help());
  batch_cmd->set_config("--config", "", "Read options from a key=value file");
  BatchConfig bc;
  std::vector<std::string> batch_classes{"uniform", "real-like"};
  batch_cmd->add_option("--dimensions", bc.dimensions,
                        "Problem dimensions (default 5..10)")
      ->delimiter(',');
  batch_cmd->add_option("--instances", bc.instances_per_cell,
                        "Instances per (class, n) cell (default 30)");
  batch_cmd->add_option("--classes", batch_classes,
                        "Instance classes (default uniform,real-like)")
      ->delimiter(',');
  batch_cmd->add_option("--base-seed", bc.base_seed, "Batch base seed");
  batch_cmd->add_option("--out", bc.output_dir, "Output directory");
  batch_cmd->add_option("--workers", bc.workers, "Worker threads (0 = all cores)");
  batch_cmd->add_option("--eps", bc.eps, "Near-optimal cost band");
  batch_cmd->add_flag("--edges", bc.write_edges, "Also write per-cell lon.csv");
  batch_cmd->add_flag("--tables", bc.write_tables,
                      "Also write per-cell degree-aggregation tables");
  GeneratorFlags batch_gen_flags;
  batch_gen_flags.add_param_options(batch_cmd);
  int batch_exit = 0;
  batch_cmd->callback([&] {
    bc.classes.clear();
    for (const std::string& c : batch_classes)
      bc.classes.push_back(instance_class_from_string(c));
    batch_gen_flags.klass = "uniform";
    bc.generator = batch_gen_flags.resolve();
    const BatchResult result = run_batch(bc);
    std::fprintf(stderr,
                 "batch: %zu ok, %zu reused, %zu skipped, %zu failed\n",
                 result.ok_cells, result.reused_cells, result.skipped_cells,
                 result.failed_cells);
    for (const CellResult& cell : result.cells)
      if (cell.status == CellStatus::kFailed)
        std::fprintf(stderr, "failed cell %s n=%d i=%d: %s\n",
                     to_string(cell.klass).c_str(), cell.n, cell.index,
                     cell.reason.c_str());
      else if (cell.status == CellStatus::kSkipped)
        std::fprintf(stderr, "skipped cell %s n=%d i=%d: %s\n",
                     to_string(cell.klass).c_str(), cell.n, cell.index,
                     cell.reason.c_str());
    if (result.failed_cells > 0) batch_exit = 1;
  });

  // ---- export ----
  auto* ex_cmd = app.add_subcommand(
      "export",
      "Convert cached artifacts: rebuild the LON and metrics of an "
      "instance from a binary owner dump without re-mapping");
  std::string ex_instance, ex_owners;
  AnalyzeOutputs ex_out;
  double ex_eps = 0.05;
  unsigned ex_workers = 0;
  ex_cmd->add_option("--instance", ex_instance, "Instance file")->required();
  ex_cmd->add_option("--owners", ex_owners, "Binary owner-array dump")
      ->required();
  ex_cmd->add_option("-o,--metrics", ex_out.metrics_json, "Metrics JSON path");
  ex_cmd->add_option("--csv", ex_out.metrics_csv, "Metrics CSV path");
  ex_cmd->add_option("--edges", ex_out.edges, "LON edge-list CSV path");
  ex_cmd->add_option("--graphml", ex_out.graphml, "LON GraphML path");
  ex_cmd->add_option("--strength-table", ex_out.strength_table,
                     "In-strength vs in-degree CSV path");
  ex_cmd->add_option("--disparity-table", ex_out.disparity_table,
                     "Disparity vs out-degree CSV path");
  ex_cmd->add_option("--eps", ex_eps, "Near-optimal cost band (default 0.05)");
  ex_cmd->add_option("--workers", ex_workers, "Worker threads (0 = all cores)");
  ex_cmd->callback([&] {
    const QapInstance inst = parse_instance(read_file(ex_instance));
    const BasinMap bm = read_owner_dump(inst, ex_owners);
    run_pipeline_outputs(inst, bm, ex_eps, ex_workers, ex_out);
  });

  try {
    CLI11_PARSE(app, argc, argv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return batch_exit;
}
