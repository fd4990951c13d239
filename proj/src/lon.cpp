#include "qaplon/lon.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "qaplon/errors.hpp"

namespace qaplon {

namespace {

unsigned effective_workers(unsigned workers) {
  if (workers == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
  }
  return workers;
}

std::string format_weight(double w) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", w);
  return buf;
}

}  // namespace

LocalOptimaNetwork::LocalOptimaNetwork(int n, std::uint64_t space_size,
                                       std::vector<LonNode> nodes,
                                       std::vector<std::vector<LonEdge>> out_edges,
                                       std::uint32_t global_node)
    : n_(n), space_size_(space_size), nodes_(std::move(nodes)),
      out_(std::move(out_edges)), global_node_(global_node) {
  if (out_.size() != nodes_.size())
    throw std::invalid_argument("LON: edge table size does not match node count");
  if (!nodes_.empty() && global_node_ >= nodes_.size())
    throw std::invalid_argument("LON: global node index out of range");
  for (const auto& row : out_) {
    for (std::size_t e = 0; e < row.size(); ++e) {
      if (row[e].dst >= nodes_.size())
        throw std::invalid_argument("LON: edge destination out of range");
      if (!(row[e].weight > 0.0) || row[e].weight > 1.0)
        throw std::invalid_argument("LON: edge weight outside (0, 1]");
      if (e > 0 && row[e - 1].dst >= row[e].dst)
        throw std::invalid_argument("LON: edges must be sorted by destination");
    }
  }
}

double LocalOptimaNetwork::weight(std::size_t i, std::size_t j) const {
  const auto& row = out_.at(i);
  const auto it = std::lower_bound(
      row.begin(), row.end(), j,
      [](const LonEdge& e, std::size_t v) { return e.dst < v; });
  return (it != row.end() && it->dst == j) ? it->weight : 0.0;
}

double LocalOptimaNetwork::out_strength(std::size_t i) const {
  double s = 0.0;
  for (const LonEdge& e : out_.at(i))
    if (e.dst != i) s += e.weight;
  return s;
}

std::size_t LocalOptimaNetwork::out_degree(std::size_t i) const {
  std::size_t d = 0;
  for (const LonEdge& e : out_.at(i))
    if (e.dst != i) ++d;
  return d;
}

std::vector<double> LocalOptimaNetwork::in_strengths() const {
  std::vector<double> acc(nodes_.size(), 0.0);
  for (std::size_t i = 0; i < out_.size(); ++i)
    for (const LonEdge& e : out_[i])
      if (e.dst != i) acc[e.dst] += e.weight;
  return acc;
}

std::vector<std::size_t> LocalOptimaNetwork::in_degrees() const {
  std::vector<std::size_t> acc(nodes_.size(), 0);
  for (std::size_t i = 0; i < out_.size(); ++i)
    for (const LonEdge& e : out_[i])
      if (e.dst != i) ++acc[e.dst];
  return acc;
}

std::uint64_t LocalOptimaNetwork::edge_count(bool include_self_loops) const {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < out_.size(); ++i) {
    total += out_[i].size();
    if (!include_self_loops) {
      for (const LonEdge& e : out_[i])
        if (e.dst == i) --total;
    }
  }
  return total;
}

LocalOptimaNetwork build_lon(const QapInstance& inst, const BasinMap& bm,
                             unsigned workers) {
  const int n = inst.n();
  if (n != bm.n)
    throw std::invalid_argument("build_lon: instance and basin map dimensions differ");
  const std::uint64_t total = bm.space_size;
  const std::size_t k = bm.optima.size();
  const std::uint64_t npairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;

  std::vector<LonNode> nodes(k);
  for (std::size_t i = 0; i < k; ++i)
    nodes[i] = {bm.optima[i], bm.optima_costs[i], bm.basin_sizes[i]};

  // Dense config -> node-index relabeling of the owner array.
  std::vector<std::uint32_t> owner_idx(total);
  for (std::uint64_t s = 0; s < total; ++s) {
    const auto it = std::lower_bound(bm.optima.begin(), bm.optima.end(),
                                     static_cast<ConfigId>(bm.owner[s]));
    owner_idx[s] = static_cast<std::uint32_t>(it - bm.optima.begin());
  }

  // Basin membership lists via counting sort over owner_idx.
  std::vector<std::uint64_t> offset(k + 1, 0);
  for (std::size_t i = 0; i < k; ++i) offset[i + 1] = offset[i] + bm.basin_sizes[i];
  std::vector<std::uint32_t> members(total);
  {
    std::vector<std::uint64_t> fill(offset.begin(), offset.end() - 1);
    for (std::uint64_t s = 0; s < total; ++s)
      members[fill[owner_idx[s]]++] = static_cast<std::uint32_t>(s);
  }

  // Per basin: integer counts of neighbor relations into each target
  // basin, divided once at the end. Basins are independent, so the
  // parallel split is over basin indices.
  std::vector<std::vector<LonEdge>> edges(k);
  std::atomic<std::size_t> cursor{0};

  auto worker_fn = [&]() {
    std::vector<std::uint64_t> scratch(k, 0);
    std::vector<std::uint32_t> touched;
    std::vector<int> p(static_cast<std::size_t>(n));
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= k) break;
      touched.clear();
      for (std::uint64_t idx = offset[i]; idx < offset[i + 1]; ++idx) {
        unrank_into(members[idx], n, p);
        for (int r = 0; r + 1 < n; ++r) {
          for (int s = r + 1; s < n; ++s) {
            apply_swap(p, r, s);
            const std::uint32_t j = owner_idx[rank_of(p)];
            apply_swap(p, r, s);
            if (scratch[j]++ == 0) touched.push_back(j);
          }
        }
      }
      std::sort(touched.begin(), touched.end());
      const double denom = static_cast<double>(bm.basin_sizes[i]) *
                           static_cast<double>(npairs);
      auto& row = edges[i];
      row.reserve(touched.size());
      for (const std::uint32_t j : touched) {
        row.push_back({j, static_cast<double>(scratch[j]) / denom});
        scratch[j] = 0;
      }
    }
  };

  const unsigned nthreads = static_cast<unsigned>(
      std::min<std::size_t>(effective_workers(workers), std::max<std::size_t>(k, 1)));
  if (nthreads <= 1) {
    worker_fn();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker_fn);
    for (auto& th : pool) th.join();
  }

  const GlobalOptima g = global_optima(bm);
  const std::uint32_t global_node =
      static_cast<std::uint32_t>(bm.optimum_index(g.canonical));

  return LocalOptimaNetwork(n, total, std::move(nodes), std::move(edges),
                            global_node);
}

std::string export_edges(const LocalOptimaNetwork& lon) {
  std::ostringstream os;
  os << "src_rank,dst_rank,weight\n";
  for (std::size_t i = 0; i < lon.node_count(); ++i) {
    const ConfigId src = lon.node(i).optimum;
    for (const LonEdge& e : lon.out_edges(i))
      os << src << ',' << lon.node(e.dst).optimum << ','
         << format_weight(e.weight) << '\n';
  }
  return os.str();
}

std::vector<EdgeRecord> parse_edge_csv(std::string_view text) {
  std::vector<EdgeRecord> records;
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("src_rank", 0) == 0) continue;
    EdgeRecord rec;
    char* end = nullptr;
    const char* s = line.c_str();
    rec.src = std::strtoull(s, &end, 10);
    if (end == s || *end != ',') throw ParseError(line_no, "malformed edge row");
    s = end + 1;
    rec.dst = std::strtoull(s, &end, 10);
    if (end == s || *end != ',') throw ParseError(line_no, "malformed edge row");
    s = end + 1;
    rec.weight = std::strtod(s, &end);
    if (end == s) throw ParseError(line_no, "malformed edge weight");
    records.push_back(rec);
  }
  return records;
}

std::string export_graphml(const LocalOptimaNetwork& lon) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
     << "  <key id=\"cost\" for=\"node\" attr.name=\"cost\" attr.type=\"long\"/>\n"
     << "  <key id=\"basin_size\" for=\"node\" attr.name=\"basin_size\" attr.type=\"long\"/>\n"
     << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
     << "  <graph id=\"lon\" edgedefault=\"directed\">\n";
  for (std::size_t i = 0; i < lon.node_count(); ++i) {
    const LonNode& nd = lon.node(i);
    os << "    <node id=\"n" << nd.optimum << "\">"
       << "<data key=\"cost\">" << nd.cost << "</data>"
       << "<data key=\"basin_size\">" << nd.basin_size << "</data>"
       << "</node>\n";
  }
  for (std::size_t i = 0; i < lon.node_count(); ++i) {
    for (const LonEdge& e : lon.out_edges(i)) {
      os << "    <edge source=\"n" << lon.node(i).optimum << "\" target=\"n"
         << lon.node(e.dst).optimum << "\"><data key=\"weight\">"
         << format_weight(e.weight) << "</data></edge>\n";
    }
  }
  os << "  </graph>\n</graphml>\n";
  return os.str();
}

}  // namespace qaplon
