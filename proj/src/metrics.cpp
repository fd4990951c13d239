#include "qaplon/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace qaplon {

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

std::vector<DegreeTableRow> aggregate_by_degree(
    const std::vector<std::size_t>& degrees, const std::vector<double>& values,
    const std::vector<bool>& included, double (*baseline)(std::size_t, double),
    double baseline_arg) {
  std::map<std::size_t, std::pair<double, std::size_t>> buckets;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (!included[i]) continue;
    auto& [sum, count] = buckets[degrees[i]];
    sum += values[i];
    ++count;
  }
  std::vector<DegreeTableRow> table;
  table.reserve(buckets.size());
  for (const auto& [deg, acc] : buckets)
    table.push_back({deg, acc.first / static_cast<double>(acc.second),
                     baseline(deg, baseline_arg)});
  return table;
}

}  // namespace

std::tuple<std::uint64_t, std::uint64_t, std::uint64_t> count_nodes_edges(
    const LocalOptimaNetwork& lon) {
  return {static_cast<std::uint64_t>(lon.node_count()), lon.edge_count(false),
          lon.edge_count(true)};
}

BasinStats basin_stats(const BasinMap& bm, const LocalOptimaNetwork& lon) {
  if (lon.node_count() == 0)
    throw std::invalid_argument("basin_stats: empty network");
  const double space = static_cast<double>(bm.space_size);

  std::vector<std::uint64_t> sizes = bm.basin_sizes;
  std::sort(sizes.begin(), sizes.end());
  const std::uint64_t max_size = sizes.back();
  // lower median for even counts
  const std::uint64_t median = sizes[(sizes.size() - 1) / 2];
  const std::uint64_t global_size = lon.node(lon.global_node()).basin_size;

  return {static_cast<double>(global_size) / space,
          static_cast<double>(max_size) / space,
          static_cast<double>(median) / space};
}

std::optional<double> pearson(std::span<const double> x,
                              std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("pearson: length mismatch");
  const std::size_t m = x.size();
  if (m < 2) return std::nullopt;
  // single pass over co-moments
  double mean_x = 0.0, mean_y = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double w = 1.0 / static_cast<double>(i + 1);
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    mean_x += dx * w;
    mean_y += dy * w;
    sxx += dx * (x[i] - mean_x);
    syy += dy * (y[i] - mean_y);
    sxy += dx * (y[i] - mean_y);
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  const double rho = sxy / std::sqrt(sxx * syy);
  return std::clamp(rho, -1.0, 1.0);
}

std::optional<double> fitness_basin_correlation(const LocalOptimaNetwork& lon) {
  const std::size_t k = lon.node_count();
  std::vector<double> fit(k), logbasin(k);
  for (std::size_t i = 0; i < k; ++i) {
    fit[i] = lon.node(i).fitness();
    logbasin[i] = std::log(static_cast<double>(lon.node(i).basin_size));
  }
  return pearson(fit, logbasin);
}

double near_optimal_mass(const LocalOptimaNetwork& lon, double eps,
                         bool* degenerate) {
  if (lon.node_count() == 0)
    throw std::invalid_argument("near_optimal_mass: empty network");
  if (degenerate) *degenerate = false;
  const Cost global_cost = lon.node(lon.global_node()).cost;

  std::uint64_t mass = 0;
  for (std::size_t i = 0; i < lon.node_count(); ++i) {
    const Cost c = lon.node(i).cost;
    bool in_band;
    if (std::isinf(eps)) {
      in_band = true;
    } else if (global_cost == 0) {
      if (degenerate) *degenerate = true;
      in_band = (c == 0);
    } else {
      in_band = static_cast<double>(c) <=
                (1.0 + eps) * static_cast<double>(global_cost);
    }
    if (in_band) mass += lon.node(i).basin_size;
  }
  return static_cast<double>(mass) / static_cast<double>(lon.space_size());
}

std::pair<double, std::optional<double>> weight_averages(
    const LocalOptimaNetwork& lon) {
  const std::size_t k = lon.node_count();
  if (k == 0) throw std::invalid_argument("weight_averages: empty network");
  double self_sum = 0.0;
  double off_sum = 0.0;
  std::uint64_t off_count = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (const LonEdge& e : lon.out_edges(i)) {
      if (e.dst == i) {
        self_sum += e.weight;
      } else {
        off_sum += e.weight;
        ++off_count;
      }
    }
  }
  std::optional<double> avg_off;
  if (off_count > 0) avg_off = off_sum / static_cast<double>(off_count);
  return {self_sum / static_cast<double>(k), avg_off};
}

StrengthStats strength_stats(const LocalOptimaNetwork& lon) {
  const std::size_t k = lon.node_count();
  StrengthStats st;
  if (k == 0) return st;

  const std::vector<double> sin = lon.in_strengths();
  const std::vector<std::size_t> din = lon.in_degrees();

  double strength_sum = 0.0;
  double degree_sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    strength_sum += sin[i];
    degree_sum += static_cast<double>(din[i]);
  }
  st.avg_in_strength = strength_sum / static_cast<double>(k);

  const auto [avg_self, avg_off] = weight_averages(lon);
  (void)avg_self;
  const double mean_weight = avg_off.value_or(0.0);
  st.expected_in_strength = degree_sum / static_cast<double>(k) * mean_weight;

  std::vector<bool> all(k, true);
  st.table = aggregate_by_degree(
      din, sin, all,
      [](std::size_t deg, double w) { return static_cast<double>(deg) * w; },
      mean_weight);
  return st;
}

std::optional<double> fitness_strength_correlation(
    const LocalOptimaNetwork& lon) {
  const std::size_t k = lon.node_count();
  std::vector<double> fit(k);
  for (std::size_t i = 0; i < k; ++i) fit[i] = lon.node(i).fitness();
  const std::vector<double> sin = lon.in_strengths();
  return pearson(fit, sin);
}

std::optional<double> transitivity(const LocalOptimaNetwork& lon) {
  const std::size_t k = lon.node_count();
  if (k < 3) return std::nullopt;

  // Simple undirected projection as adjacency bitsets.
  const std::size_t words = (k + 63) / 64;
  std::vector<std::uint64_t> adj(k * words, 0);
  auto set_bit = [&](std::size_t i, std::size_t j) {
    adj[i * words + j / 64] |= std::uint64_t{1} << (j % 64);
  };
  for (std::size_t i = 0; i < k; ++i) {
    for (const LonEdge& e : lon.out_edges(i)) {
      if (e.dst == i) continue;
      set_bit(i, e.dst);
      set_bit(e.dst, i);
    }
  }

  std::vector<std::size_t> degree(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t d = 0;
    for (std::size_t w = 0; w < words; ++w) d += std::popcount(adj[i * words + w]);
    degree[i] = d;
  }

  // sum over adjacent unordered pairs of their common-neighbor count
  // equals three times the triangle count.
  std::uint64_t closed = 0;
  std::uint64_t triples = 0;
  for (std::size_t i = 0; i < k; ++i) {
    triples += static_cast<std::uint64_t>(degree[i]) * (degree[i] - 1) / 2;
    const std::uint64_t* row_i = &adj[i * words];
    for (std::size_t j = i + 1; j < k; ++j) {
      if (!(row_i[j / 64] >> (j % 64) & 1)) continue;
      const std::uint64_t* row_j = &adj[j * words];
      std::size_t common = 0;
      for (std::size_t w = 0; w < words; ++w)
        common += std::popcount(row_i[w] & row_j[w]);
      closed += common;
    }
  }
  if (triples == 0) return std::nullopt;
  return static_cast<double>(closed) / static_cast<double>(triples);
}

DisparityStats disparity(const LocalOptimaNetwork& lon) {
  const std::size_t k = lon.node_count();
  DisparityStats ds;
  if (k == 0) return ds;

  std::vector<double> y2(k, 0.0);
  std::vector<std::size_t> dout(k, 0);
  std::vector<bool> included(k, false);
  double y2_sum = 0.0;
  std::size_t y2_count = 0;
  double degree_sum = 0.0;

  for (std::size_t i = 0; i < k; ++i) {
    double s = 0.0;
    std::size_t d = 0;
    for (const LonEdge& e : lon.out_edges(i)) {
      if (e.dst == i) continue;
      s += e.weight;
      ++d;
    }
    dout[i] = d;
    degree_sum += static_cast<double>(d);
    if (d == 0) continue;  // isolated sink, excluded from the aggregate
    double acc = 0.0;
    for (const LonEdge& e : lon.out_edges(i)) {
      if (e.dst == i) continue;
      const double frac = e.weight / s;
      acc += frac * frac;
    }
    y2[i] = acc;
    included[i] = true;
    y2_sum += acc;
    ++y2_count;
  }

  ds.mean_out_degree = degree_sum / static_cast<double>(k);
  if (y2_count > 0) ds.mean_y2 = y2_sum / static_cast<double>(y2_count);
  if (ds.mean_out_degree > 0.0) ds.baseline = 1.0 / ds.mean_out_degree;
  ds.table = aggregate_by_degree(
      dout, y2, included,
      [](std::size_t deg, double) { return 1.0 / static_cast<double>(deg); },
      0.0);
  return ds;
}

PathStats path_stats(const LocalOptimaNetwork& lon, unsigned workers) {
  const std::size_t k = lon.node_count();
  PathStats ps;
  if (k < 2) return ps;

  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Per-source accumulators filled independently, reduced in index order
  // afterwards so the result does not depend on scheduling.
  std::vector<double> sum_finite(k, 0.0);
  std::vector<std::uint64_t> cnt_finite(k, 0);
  std::vector<double> dist_to_global(k, kInf);
  const std::size_t g = lon.global_node();

  std::atomic<std::size_t> cursor{0};
  auto worker_fn = [&]() {
    std::vector<double> dist(k);
    std::vector<bool> done(k);
    for (;;) {
      const std::size_t src = cursor.fetch_add(1);
      if (src >= k) break;
      // Dijkstra without a heap: the graphs are near-complete, so the
      // O(k^2) scan beats heap bookkeeping.
      std::fill(dist.begin(), dist.end(), kInf);
      std::fill(done.begin(), done.end(), false);
      dist[src] = 0.0;
      for (std::size_t round = 0; round < k; ++round) {
        std::size_t best = k;
        double best_d = kInf;
        for (std::size_t v = 0; v < k; ++v)
          if (!done[v] && dist[v] < best_d) {
            best_d = dist[v];
            best = v;
          }
        if (best == k) break;
        done[best] = true;
        for (const LonEdge& e : lon.out_edges(best)) {
          if (e.dst == best) continue;
          const double cand = best_d + 1.0 / e.weight;
          if (cand < dist[e.dst]) dist[e.dst] = cand;
        }
      }
      double local_sum = 0.0;
      std::uint64_t local_cnt = 0;
      for (std::size_t v = 0; v < k; ++v) {
        if (v == src) continue;
        if (dist[v] < kInf) {
          local_sum += dist[v];
          ++local_cnt;
        }
      }
      sum_finite[src] = local_sum;
      cnt_finite[src] = local_cnt;
      dist_to_global[src] = dist[g];
    }
  };

  const unsigned nthreads = static_cast<unsigned>(
      std::min<std::size_t>(effective_workers(workers), k));
  if (nthreads <= 1) {
    worker_fn();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker_fn);
    for (auto& th : pool) th.join();
  }

  double total_sum = 0.0;
  std::uint64_t total_cnt = 0;
  double global_sum = 0.0;
  std::uint64_t global_cnt = 0;
  for (std::size_t src = 0; src < k; ++src) {
    total_sum += sum_finite[src];
    total_cnt += cnt_finite[src];
    if (src != g && dist_to_global[src] < kInf) {
      global_sum += dist_to_global[src];
      ++global_cnt;
    }
  }
  const std::uint64_t ordered_pairs =
      static_cast<std::uint64_t>(k) * (k - 1);
  ps.unreachable_pair_count = ordered_pairs - total_cnt;
  if (total_cnt > 0)
    ps.avg_path_length = total_sum / static_cast<double>(total_cnt);
  if (global_cnt > 0)
    ps.avg_dist_to_global_opt = global_sum / static_cast<double>(global_cnt);
  return ps;
}

MetricsReport compute_metrics(const BasinMap& bm, const LocalOptimaNetwork& lon,
                              double eps, unsigned workers) {
  MetricsReport r;
  r.n = lon.n();
  r.space_size = lon.space_size();

  std::tie(r.n_nodes, r.n_edges_excl_self, r.n_edges_incl_self) =
      count_nodes_edges(lon);

  const BasinStats bs = basin_stats(bm, lon);
  r.rel_global_basin = bs.rel_global;
  r.rel_max_basin = bs.rel_max;
  r.rel_median_basin = bs.rel_median;

  r.corr_fitness_logbasin = fitness_basin_correlation(lon);

  r.near_opt_eps = eps;
  r.near_opt_mass_5pct = near_optimal_mass(lon, eps, &r.near_opt_band_degenerate);

  const auto [avg_self, avg_off] = weight_averages(lon);
  r.avg_w_ii = avg_self;
  r.avg_w_ij_offdiag = avg_off;

  const StrengthStats st = strength_stats(lon);
  r.avg_in_strength = st.avg_in_strength;
  r.expected_in_strength = st.expected_in_strength;
  r.strength_vs_indegree = st.table;

  r.corr_fitness_instrength = fitness_strength_correlation(lon);
  r.transitivity = transitivity(lon);

  const DisparityStats ds = disparity(lon);
  r.mean_disparity = ds.mean_y2;
  r.mean_out_degree = ds.mean_out_degree;
  r.disparity_baseline = ds.baseline;
  r.disparity_vs_outdegree = ds.table;

  const PathStats ps = path_stats(lon, workers);
  r.avg_path_length = ps.avg_path_length;
  r.avg_dist_to_global_opt = ps.avg_dist_to_global_opt;
  r.unreachable_pair_count = ps.unreachable_pair_count;

  r.neutral_optima_count = bm.neutral_optima_count;
  return r;
}

namespace {

using nlohmann::json;

json opt_to_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> opt_from_json(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

}  // namespace

const std::vector<std::string>& metrics_csv_columns() {
  static const std::vector<std::string> cols = {
      "schema_version",        "n",
      "space_size",            "n_nodes",
      "n_edges_excl_self",     "n_edges_incl_self",
      "rel_global_basin",      "rel_max_basin",
      "rel_median_basin",      "corr_fitness_logbasin",
      "near_opt_eps",          "near_opt_mass_5pct",
      "near_opt_band_degenerate", "avg_w_ii",
      "avg_w_ij_offdiag",      "avg_in_strength",
      "expected_in_strength",  "corr_fitness_instrength",
      "transitivity",          "mean_disparity",
      "mean_out_degree",       "disparity_baseline",
      "avg_path_length",       "avg_dist_to_global_opt",
      "unreachable_pair_count", "neutral_optima_count"};
  return cols;
}

std::string metrics_to_json(const MetricsReport& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["n"] = r.n;
  j["space_size"] = r.space_size;
  j["n_nodes"] = r.n_nodes;
  j["n_edges_excl_self"] = r.n_edges_excl_self;
  j["n_edges_incl_self"] = r.n_edges_incl_self;
  j["rel_global_basin"] = r.rel_global_basin;
  j["rel_max_basin"] = r.rel_max_basin;
  j["rel_median_basin"] = r.rel_median_basin;
  j["corr_fitness_logbasin"] = opt_to_json(r.corr_fitness_logbasin);
  j["near_opt_eps"] = r.near_opt_eps;
  j["near_opt_mass_5pct"] = r.near_opt_mass_5pct;
  j["near_opt_band_degenerate"] = r.near_opt_band_degenerate;
  j["avg_w_ii"] = r.avg_w_ii;
  j["avg_w_ij_offdiag"] = opt_to_json(r.avg_w_ij_offdiag);
  j["avg_in_strength"] = r.avg_in_strength;
  j["expected_in_strength"] = r.expected_in_strength;
  j["corr_fitness_instrength"] = opt_to_json(r.corr_fitness_instrength);
  j["transitivity"] = opt_to_json(r.transitivity);
  j["mean_disparity"] = opt_to_json(r.mean_disparity);
  j["mean_out_degree"] = r.mean_out_degree;
  j["disparity_baseline"] = opt_to_json(r.disparity_baseline);
  j["avg_path_length"] = opt_to_json(r.avg_path_length);
  j["avg_dist_to_global_opt"] = opt_to_json(r.avg_dist_to_global_opt);
  j["unreachable_pair_count"] = r.unreachable_pair_count;
  j["neutral_optima_count"] = r.neutral_optima_count;
  return j.dump(2) + "\n";
}

MetricsReport metrics_from_json(std::string_view text) {
  const json j = json::parse(text);
  MetricsReport r;
  r.schema_version = j.at("schema_version").get<int>();
  r.n = j.at("n").get<int>();
  r.space_size = j.at("space_size").get<std::uint64_t>();
  r.n_nodes = j.at("n_nodes").get<std::uint64_t>();
  r.n_edges_excl_self = j.at("n_edges_excl_self").get<std::uint64_t>();
  r.n_edges_incl_self = j.at("n_edges_incl_self").get<std::uint64_t>();
  r.rel_global_basin = j.at("rel_global_basin").get<double>();
  r.rel_max_basin = j.at("rel_max_basin").get<double>();
  r.rel_median_basin = j.at("rel_median_basin").get<double>();
  r.corr_fitness_logbasin = opt_from_json(j, "corr_fitness_logbasin");
  r.near_opt_eps = j.at("near_opt_eps").get<double>();
  r.near_opt_mass_5pct = j.at("near_opt_mass_5pct").get<double>();
  r.near_opt_band_degenerate = j.at("near_opt_band_degenerate").get<bool>();
  r.avg_w_ii = j.at("avg_w_ii").get<double>();
  r.avg_w_ij_offdiag = opt_from_json(j, "avg_w_ij_offdiag");
  r.avg_in_strength = j.at("avg_in_strength").get<double>();
  r.expected_in_strength = j.at("expected_in_strength").get<double>();
  r.corr_fitness_instrength = opt_from_json(j, "corr_fitness_instrength");
  r.transitivity = opt_from_json(j, "transitivity");
  r.mean_disparity = opt_from_json(j, "mean_disparity");
  r.mean_out_degree = j.at("mean_out_degree").get<double>();
  r.disparity_baseline = opt_from_json(j, "disparity_baseline");
  r.avg_path_length = opt_from_json(j, "avg_path_length");
  r.avg_dist_to_global_opt = opt_from_json(j, "avg_dist_to_global_opt");
  r.unreachable_pair_count = j.at("unreachable_pair_count").get<std::uint64_t>();
  r.neutral_optima_count = j.at("neutral_optima_count").get<std::uint64_t>();
  return r;
}

std::string metrics_csv_header() {
  std::string out;
  const auto& cols = metrics_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  return out;
}

std::string metrics_to_csv_row(const MetricsReport& r) {
  std::ostringstream os;
  auto real = [&](double v) { return format_real(v); };
  auto opt = [&](const std::optional<double>& v) {
    return v ? format_real(*v) : std::string();
  };
  os << r.schema_version << ',' << r.n << ',' << r.space_size << ','
     << r.n_nodes << ',' << r.n_edges_excl_self << ',' << r.n_edges_incl_self
     << ',' << real(r.rel_global_basin) << ',' << real(r.rel_max_basin) << ','
     << real(r.rel_median_basin) << ',' << opt(r.corr_fitness_logbasin) << ','
     << real(r.near_opt_eps) << ',' << real(r.near_opt_mass_5pct) << ','
     << (r.near_opt_band_degenerate ? 1 : 0) << ',' << real(r.avg_w_ii) << ','
     << opt(r.avg_w_ij_offdiag) << ',' << real(r.avg_in_strength) << ','
     << real(r.expected_in_strength) << ',' << opt(r.corr_fitness_instrength)
     << ',' << opt(r.transitivity) << ',' << opt(r.mean_disparity) << ','
     << real(r.mean_out_degree) << ',' << opt(r.disparity_baseline) << ','
     << opt(r.avg_path_length) << ',' << opt(r.avg_dist_to_global_opt) << ','
     << r.unreachable_pair_count << ',' << r.neutral_optima_count;
  return os.str();
}

namespace {

std::string table_csv(const std::vector<DegreeTableRow>& table,
                      const char* degree_name, const char* value_name,
                      const char* baseline_name) {
  std::ostringstream os;
  os << degree_name << ',' << value_name << ',' << baseline_name << '\n';
  for (const DegreeTableRow& row : table)
    os << row.degree << ',' << format_real(row.mean_value) << ','
       << format_real(row.baseline) << '\n';
  return os.str();
}

}  // namespace

std::string strength_table_csv(const MetricsReport& r) {
  return table_csv(r.strength_vs_indegree, "in_degree", "mean_in_strength",
                   "expected_in_strength");
}

std::string disparity_table_csv(const MetricsReport& r) {
  return table_csv(r.disparity_vs_outdegree, "out_degree", "mean_disparity",
                   "baseline");
}

}  // namespace qaplon
