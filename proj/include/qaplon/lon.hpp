#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qaplon/landscape.hpp"
#include "qaplon/qap.hpp"
#include "qaplon/ranking.hpp"

namespace qaplon {

struct LonNode {
  ConfigId optimum = 0;
  Cost cost = 0;
  std::uint64_t basin_size = 0;

  double fitness() const noexcept { return -static_cast<double>(cost); }
};

struct LonEdge {
  std::uint32_t dst = 0;
  double weight = 0.0;
};

/// Weighted directed local optima network with self-loops. Nodes are
/// local optima ordered by rank; w_ij is the basin-to-basin transition
/// probability, so every out-row (self-loop included) sums to 1.
class LocalOptimaNetwork {
 public:
  LocalOptimaNetwork(int n, std::uint64_t space_size,
                     std::vector<LonNode> nodes,
                     std::vector<std::vector<LonEdge>> out_edges,
                     std::uint32_t global_node);

  int n() const noexcept { return n_; }
  std::uint64_t space_size() const noexcept { return space_size_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const LonNode& node(std::size_t i) const { return nodes_.at(i); }
  const std::vector<LonNode>& nodes() const noexcept { return nodes_; }
  std::uint32_t global_node() const noexcept { return global_node_; }

  /// Outgoing edges of i sorted by destination, self-loop included.
  const std::vector<LonEdge>& out_edges(std::size_t i) const {
    return out_[i];
  }

  /// w_ij, 0 when the edge is absent.
  double weight(std::size_t i, std::size_t j) const;
  double self_loop(std::size_t i) const { return weight(i, i); }

  /// Sum of outgoing weights excluding the self-loop.
  double out_strength(std::size_t i) const;
  /// Count of distinct out-neighbors excluding the self-loop.
  std::size_t out_degree(std::size_t i) const;

  /// Incoming strengths/degrees for all nodes, self-loops excluded.
  std::vector<double> in_strengths() const;
  std::vector<std::size_t> in_degrees() const;

  std::uint64_t edge_count(bool include_self_loops) const;

 private:
  int n_;
  std::uint64_t space_size_;
  std::vector<LonNode> nodes_;
  std::vector<std::vector<LonEdge>> out_;
  std::uint32_t global_node_;
};

/// Accumulates exact integer boundary counts per basin and divides once:
/// w_ij = count_ij / (basin_size_i * n(n-1)/2). Result is independent of
/// enumeration order and of `workers`.
LocalOptimaNetwork build_lon(const QapInstance& inst, const BasinMap& bm,
                             unsigned workers = 0);

/// CSV edge list "src_rank,dst_rank,weight" sorted by (src, dst),
/// self-loops included, weights with 17 significant digits.
std::string export_edges(const LocalOptimaNetwork& lon);

struct EdgeRecord {
  ConfigId src = 0;
  ConfigId dst = 0;
  double weight = 0.0;
};

/// Parses the export_edges format back into records.
std::vector<EdgeRecord> parse_edge_csv(std::string_view text);

/// GraphML with node attributes cost and basin_size and edge attribute
/// weight; node ids are "n<rank>".
std::string export_graphml(const LocalOptimaNetwork& lon);

}  // namespace qaplon
