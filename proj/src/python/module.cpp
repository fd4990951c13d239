#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qaplon/batch.hpp"
#include "qaplon/generator.hpp"
#include "qaplon/landscape.hpp"
#include "qaplon/lon.hpp"
#include "qaplon/metrics.hpp"
#include "qaplon/ranking.hpp"

namespace py = pybind11;
using namespace qaplon;

namespace {

std::vector<std::vector<Cost>> matrix_rows(const QapInstance& inst,
                                           bool flow) {
  const int n = inst.n();
  std::vector<std::vector<Cost>> rows(n, std::vector<Cost>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      rows[i][j] = flow ? inst.flow(i, j) : inst.dist(i, j);
  return rows;
}

std::vector<Cost> flatten(const std::vector<std::vector<Cost>>& rows) {
  std::vector<Cost> flat;
  for (const auto& row : rows) flat.insert(flat.end(), row.begin(), row.end());
  return flat;
}

GeneratorConfig uniform_config(int n, std::uint64_t seed, double d_max,
                               std::int64_t f_max,
                               const std::string& distance_mode) {
  GeneratorConfig cfg;
  cfg.klass = InstanceClass::kUniform;
  cfg.n = n;
  cfg.seed = seed;
  cfg.d_max = d_max;
  cfg.f_max = f_max;
  cfg.distance_mode = distance_mode_from_string(distance_mode);
  return cfg;
}

GeneratorConfig real_like_config(int n, std::uint64_t seed, double M, int K,
                                 double m, double A, double B) {
  GeneratorConfig cfg;
  cfg.klass = InstanceClass::kRealLike;
  cfg.n = n;
  cfg.seed = seed;
  cfg.cluster_field_radius = M;
  cfg.cluster_max_points = K;
  cfg.cluster_radius = m;
  cfg.flow_exp_lo = A;
  cfg.flow_exp_hi = B;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exhaustive local optima network extraction and analysis for "
            "the quadratic assignment problem";

  py::class_<QapInstance>(m, "QapInstance")
      .def(py::init([](int n, const std::vector<std::vector<Cost>>& dist,
                       const std::vector<std::vector<Cost>>& flow) {
             return QapInstance(n, flatten(dist), flatten(flow));
           }),
           py::arg("n"), py::arg("dist"), py::arg("flow"))
      .def_property_readonly("n", &QapInstance::n)
      .def("dist", [](const QapInstance& inst) { return matrix_rows(inst, false); })
      .def("flow", [](const QapInstance& inst) { return matrix_rows(inst, true); })
      .def("__repr__", [](const QapInstance& inst) {
        return "<QapInstance n=" + std::to_string(inst.n()) + ">";
      });

  m.def("cost",
        [](const QapInstance& inst, const std::vector<int>& p) {
          return cost(inst, p);
        },
        py::arg("inst"), py::arg("p"));
  m.def("fitness",
        [](const QapInstance& inst, const std::vector<int>& p) {
          return fitness(inst, p);
        },
        py::arg("inst"), py::arg("p"));
  m.def("swap_delta",
        [](const QapInstance& inst, const std::vector<int>& p, int r, int s) {
          return swap_delta(inst, p, r, s);
        },
        py::arg("inst"), py::arg("p"), py::arg("r"), py::arg("s"));
  m.def("neighbor_pairs", &neighbor_pairs, py::arg("n"));
  m.def("rank_of",
        [](const std::vector<int>& p) { return rank_of(p); }, py::arg("p"));
  m.def("unrank", &unrank, py::arg("rank"), py::arg("n"));
  m.def("factorial", &factorial, py::arg("n"));

  m.def("gen_uniform",
        [](int n, std::uint64_t seed, double d_max, std::int64_t f_max,
           const std::string& distance_mode) {
          return gen_uniform(uniform_config(n, seed, d_max, f_max, distance_mode));
        },
        py::arg("n"), py::arg("seed"), py::arg("d_max") = 100.0,
        py::arg("f_max") = 100, py::arg("distance_mode") = "euclidean-points");
  m.def("gen_real_like",
        [](int n, std::uint64_t seed, double M, int K, double m_, double A,
           double B) {
          return gen_real_like(real_like_config(n, seed, M, K, m_, A, B));
        },
        py::arg("n"), py::arg("seed"), py::arg("M") = 0.0, py::arg("K") = 1,
        py::arg("m") = 100.0, py::arg("A") = -10.0, py::arg("B") = 5.0);
  m.def("serialize_instance", &serialize_instance, py::arg("inst"));
  m.def("parse_instance",
        [](const std::string& text) { return parse_instance(text); },
        py::arg("text"));

  py::class_<BasinMap>(m, "BasinMap")
      .def_readonly("n", &BasinMap::n)
      .def_readonly("space_size", &BasinMap::space_size)
      .def_readonly("optima", &BasinMap::optima)
      .def_readonly("optima_costs", &BasinMap::optima_costs)
      .def_readonly("basin_sizes", &BasinMap::basin_sizes)
      .def_readonly("neutral_optima_count", &BasinMap::neutral_optima_count)
      .def("owner_of", &BasinMap::owner_of, py::arg("rank"))
      .def("__repr__", [](const BasinMap& bm) {
        return "<BasinMap n=" + std::to_string(bm.n) + " optima=" +
               std::to_string(bm.optima.size()) + ">";
      });

  m.def("hill_climb", &hill_climb, py::arg("inst"), py::arg("start"));
  m.def("map_basins", &map_basins, py::arg("inst"), py::arg("workers") = 0,
        py::call_guard<py::gil_scoped_release>());

  py::class_<GlobalOptima>(m, "GlobalOptima")
      .def_readonly("optima", &GlobalOptima::optima)
      .def_readonly("cost", &GlobalOptima::cost)
      .def_readonly("canonical", &GlobalOptima::canonical);
  m.def("global_optima", &global_optima, py::arg("basin_map"));

  py::class_<LonNode>(m, "LonNode")
      .def_readonly("optimum", &LonNode::optimum)
      .def_readonly("cost", &LonNode::cost)
      .def_readonly("basin_size", &LonNode::basin_size)
      .def_property_readonly("fitness", &LonNode::fitness);

  py::class_<LocalOptimaNetwork>(m, "LocalOptimaNetwork")
      .def_property_readonly("n", &LocalOptimaNetwork::n)
      .def_property_readonly("space_size", &LocalOptimaNetwork::space_size)
      .def_property_readonly("node_count", &LocalOptimaNetwork::node_count)
      .def_property_readonly("global_node", &LocalOptimaNetwork::global_node)
      .def("node", &LocalOptimaNetwork::node, py::arg("i"),
           py::return_value_policy::copy)
      .def("weight", &LocalOptimaNetwork::weight, py::arg("i"), py::arg("j"))
      .def("self_loop", &LocalOptimaNetwork::self_loop, py::arg("i"))
      .def("out_strength", &LocalOptimaNetwork::out_strength, py::arg("i"))
      .def("out_degree", &LocalOptimaNetwork::out_degree, py::arg("i"))
      .def("in_strengths", &LocalOptimaNetwork::in_strengths)
      .def("in_degrees", &LocalOptimaNetwork::in_degrees)
      .def("edge_count", &LocalOptimaNetwork::edge_count,
           py::arg("include_self_loops"))
      .def("__repr__", [](const LocalOptimaNetwork& lon) {
        return "<LocalOptimaNetwork nodes=" + std::to_string(lon.node_count()) +
               ">";
      });

  m.def("build_lon", &build_lon, py::arg("inst"), py::arg("basin_map"),
        py::arg("workers") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("export_edges", &export_edges, py::arg("lon"));
  m.def("export_graphml", &export_graphml, py::arg("lon"));

  py::class_<MetricsReport>(m, "MetricsReport")
      .def_readonly("schema_version", &MetricsReport::schema_version)
      .def_readonly("n", &MetricsReport::n)
      .def_readonly("space_size", &MetricsReport::space_size)
      .def_readonly("n_nodes", &MetricsReport::n_nodes)
      .def_readonly("n_edges_excl_self", &MetricsReport::n_edges_excl_self)
      .def_readonly("n_edges_incl_self", &MetricsReport::n_edges_incl_self)
      .def_readonly("rel_global_basin", &MetricsReport::rel_global_basin)
      .def_readonly("rel_max_basin", &MetricsReport::rel_max_basin)
      .def_readonly("rel_median_basin", &MetricsReport::rel_median_basin)
      .def_readonly("corr_fitness_logbasin", &MetricsReport::corr_fitness_logbasin)
      .def_readonly("near_opt_eps", &MetricsReport::near_opt_eps)
      .def_readonly("near_opt_mass_5pct", &MetricsReport::near_opt_mass_5pct)
      .def_readonly("near_opt_band_degenerate",
                    &MetricsReport::near_opt_band_degenerate)
      .def_readonly("avg_w_ii", &MetricsReport::avg_w_ii)
      .def_readonly("avg_w_ij_offdiag", &MetricsReport::avg_w_ij_offdiag)
      .def_readonly("avg_in_strength", &MetricsReport::avg_in_strength)
      .def_readonly("expected_in_strength", &MetricsReport::expected_in_strength)
      .def_readonly("corr_fitness_instrength",
                    &MetricsReport::corr_fitness_instrength)
      .def_readonly("transitivity", &MetricsReport::transitivity)
      .def_readonly("mean_disparity", &MetricsReport::mean_disparity)
      .def_readonly("mean_out_degree", &MetricsReport::mean_out_degree)
      .def_readonly("disparity_baseline", &MetricsReport::disparity_baseline)
      .def_readonly("avg_path_length", &MetricsReport::avg_path_length)
      .def_readonly("avg_dist_to_global_opt",
                    &MetricsReport::avg_dist_to_global_opt)
      .def_readonly("unreachable_pair_count",
                    &MetricsReport::unreachable_pair_count)
      .def_readonly("neutral_optima_count", &MetricsReport::neutral_optima_count)
      .def("to_json", &metrics_to_json);

  m.def("compute_metrics", &compute_metrics, py::arg("basin_map"),
        py::arg("lon"), py::arg("eps") = 0.05, py::arg("workers") = 0);

  m.def("wald_ci",
        [](const std::vector<double>& samples, double confidence)
            -> std::optional<std::tuple<double, double, double>> {
          const auto ci = wald_ci(samples, confidence);
          if (!ci) return std::nullopt;
          return std::make_tuple(ci->mean, ci->low, ci->high);
        },
        py::arg("samples"), py::arg("confidence") = 0.95);

  m.attr("__version__") = "0.1.0";
}
