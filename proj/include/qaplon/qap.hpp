#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qaplon {

using Cost = std::int64_t;

/// Assignment of facilities to locations: position i holds the location
/// of facility i, values 0..n-1, each exactly once.
using Permutation = std::vector<int>;

/// Provenance of an instance; round-trips through the file format.
struct InstanceMeta {
  std::string generator_class;  // "uniform", "real-like", or empty
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, std::string>> params;

  bool operator==(const InstanceMeta&) const = default;
};

/// A QAP instance: the n x n distance matrix A and flow matrix B.
/// Both diagonals are zero and all entries are non-negative. Generated
/// and parsed instances additionally carry at least one positive
/// off-diagonal flow; hand-built all-zero-flow instances are permitted
/// (the cost is identically zero on them).
class QapInstance {
 public:
  QapInstance(int n, std::vector<Cost> dist, std::vector<Cost> flow,
              InstanceMeta meta = {});

  int n() const noexcept { return n_; }
  Cost dist(int i, int j) const noexcept { return dist_[idx(i, j)]; }
  Cost flow(int i, int j) const noexcept { return flow_[idx(i, j)]; }
  std::span<const Cost> dist_data() const noexcept { return dist_; }
  std::span<const Cost> flow_data() const noexcept { return flow_; }
  const InstanceMeta& meta() const noexcept { return meta_; }
  InstanceMeta& meta() noexcept { return meta_; }

  /// True if some off-diagonal flow entry is positive.
  bool has_positive_flow() const noexcept;

  bool operator==(const QapInstance&) const = default;

 private:
  std::size_t idx(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + j;
  }

  int n_;
  std::vector<Cost> dist_;
  std::vector<Cost> flow_;
  InstanceMeta meta_;
};

bool is_valid_permutation(std::span<const int> p);

/// Assignment cost sum_{i,j} a_ij * b_{p_i p_j}, exact 64-bit integers.
Cost cost(const QapInstance& inst, std::span<const int> p);

/// Fitness is the negated cost; hill-climbing maximizes it.
double fitness(const QapInstance& inst, std::span<const int> p);

/// Cost change of exchanging positions r < s of p, computed in O(n)
/// for general asymmetric matrices.
Cost swap_delta(const QapInstance& inst, std::span<const int> p, int r, int s);

/// All unordered position pairs (r, s) with r < s, lexicographic order;
/// exactly n(n-1)/2 of them.
std::vector<std::pair<int, int>> neighbor_pairs(int n);

inline void apply_swap(std::span<int> p, int r, int s) {
  int t = p[r];
  p[r] = p[s];
  p[s] = t;
}

namespace detail {

/// Unvalidated O(n) swap delta for hot loops.
inline Cost swap_delta_unchecked(const QapInstance& inst, const int* p, int r,
                                 int s) noexcept {
  const int n = inst.n();
  const int u = p[r];
  const int v = p[s];
  Cost d = (inst.dist(r, r) - inst.dist(s, s)) * (inst.flow(v, v) - inst.flow(u, u)) +
           (inst.dist(r, s) - inst.dist(s, r)) * (inst.flow(v, u) - inst.flow(u, v));
  for (int k = 0; k < n; ++k) {
    if (k == r || k == s) continue;
    const int w = p[k];
    d += (inst.dist(k, r) - inst.dist(k, s)) * (inst.flow(w, v) - inst.flow(w, u)) +
         (inst.dist(r, k) - inst.dist(s, k)) * (inst.flow(v, w) - inst.flow(u, w));
  }
  return d;
}

}  // namespace detail

}  // namespace qaplon
