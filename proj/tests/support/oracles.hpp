// Independent reference implementations used only by the test suites.
// Everything here is deliberately written as straight-line brute force,
// separate from the library code paths it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "qaplon/landscape.hpp"
#include "qaplon/lon.hpp"
#include "qaplon/qap.hpp"
#include "qaplon/ranking.hpp"

namespace oracle {

using qaplon::ConfigId;
using qaplon::Cost;
using qaplon::QapInstance;

// Straight-line evaluation of the assignment cost.
inline Cost naive_cost(const QapInstance& inst, const std::vector<int>& p) {
  Cost total = 0;
  for (int i = 0; i < inst.n(); ++i)
    for (int j = 0; j < inst.n(); ++j)
      total += inst.dist(i, j) * inst.flow(p[i], p[j]);
  return total;
}

// Best-improvement descent evaluating every neighbor from scratch;
// lexicographically first (r, s) among equal-best strict improvements.
inline std::vector<int> naive_hill_climb(const QapInstance& inst,
                                         std::vector<int> p) {
  const int n = inst.n();
  for (;;) {
    const Cost base = naive_cost(inst, p);
    Cost best = base;
    int best_r = -1, best_s = -1;
    for (int r = 0; r + 1 < n; ++r) {
      for (int s = r + 1; s < n; ++s) {
        std::vector<int> q = p;
        std::swap(q[r], q[s]);
        const Cost c = naive_cost(inst, q);
        if (c < best) {
          best = c;
          best_r = r;
          best_s = s;
        }
      }
    }
    if (best_r < 0) return p;
    std::swap(p[best_r], p[best_s]);
  }
}

// Owner map built by rerunning the naive descent from every start.
inline std::vector<ConfigId> naive_owner_map(const QapInstance& inst) {
  const std::uint64_t total = qaplon::factorial(inst.n());
  std::vector<ConfigId> owner(total);
  for (std::uint64_t s = 0; s < total; ++s)
    owner[s] = qaplon::rank_of(naive_hill_climb(inst, qaplon::unrank(s, inst.n())));
  return owner;
}

// Dense transition-probability matrix by counting ordered boundary pairs
// (s, s') over every configuration and every neighbor.
struct DenseLon {
  std::vector<ConfigId> optima;           // sorted
  std::vector<Cost> costs;
  std::vector<std::uint64_t> basin_sizes;
  std::vector<std::vector<double>> w;     // k x k, self-loops on diagonal
};

inline DenseLon dense_lon(const QapInstance& inst,
                          const std::vector<ConfigId>& owner) {
  const int n = inst.n();
  const std::uint64_t total = qaplon::factorial(n);
  DenseLon d;
  for (std::uint64_t s = 0; s < total; ++s)
    if (owner[s] == s) d.optima.push_back(s);
  const std::size_t k = d.optima.size();

  auto index_of = [&](ConfigId o) {
    return static_cast<std::size_t>(
        std::lower_bound(d.optima.begin(), d.optima.end(), o) -
        d.optima.begin());
  };

  d.basin_sizes.assign(k, 0);
  for (std::uint64_t s = 0; s < total; ++s) d.basin_sizes[index_of(owner[s])]++;
  d.costs.resize(k);
  for (std::size_t i = 0; i < k; ++i)
    d.costs[i] = naive_cost(inst, qaplon::unrank(d.optima[i], n));

  std::vector<std::vector<std::uint64_t>> counts(
      k, std::vector<std::uint64_t>(k, 0));
  for (std::uint64_t s = 0; s < total; ++s) {
    std::vector<int> p = qaplon::unrank(s, n);
    const std::size_t i = index_of(owner[s]);
    for (int r = 0; r + 1 < n; ++r) {
      for (int t = r + 1; t < n; ++t) {
        std::vector<int> q = p;
        std::swap(q[r], q[t]);
        counts[i][index_of(owner[qaplon::rank_of(q)])]++;
      }
    }
  }

  const double npairs = static_cast<double>(n) * (n - 1) / 2.0;
  d.w.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      d.w[i][j] = static_cast<double>(counts[i][j]) /
                  (static_cast<double>(d.basin_sizes[i]) * npairs);
  return d;
}

// Textbook two-pass Pearson correlation.
inline std::optional<double> pearson_twopass(const std::vector<double>& x,
                                             const std::vector<double>& y) {
  const std::size_t m = x.size();
  if (m < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

// All-pairs shortest paths on the dense 1/w matrix, Floyd-Warshall.
inline std::vector<std::vector<double>> floyd_warshall(
    const std::vector<std::vector<double>>& w) {
  const std::size_t k = w.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> dist(k, std::vector<double>(k, kInf));
  for (std::size_t i = 0; i < k; ++i) {
    dist[i][i] = 0.0;
    for (std::size_t j = 0; j < k; ++j)
      if (i != j && w[i][j] > 0.0) dist[i][j] = 1.0 / w[i][j];
  }
  for (std::size_t via = 0; via < k; ++via)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (dist[i][via] + dist[via][j] < dist[i][j])
          dist[i][j] = dist[i][via] + dist[via][j];
  return dist;
}

// Cubic triangle/triple enumeration on the undirected projection of w.
inline std::optional<double> brute_transitivity(
    const std::vector<std::vector<double>>& w) {
  const std::size_t k = w.size();
  if (k < 3) return std::nullopt;
  auto adjacent = [&](std::size_t i, std::size_t j) {
    return i != j && (w[i][j] > 0.0 || w[j][i] > 0.0);
  };
  std::uint64_t triangles = 0;
  std::uint64_t triples = 0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t c = b + 1; c < k; ++c) {
        if (a == b || a == c) continue;
        if (adjacent(a, b) && adjacent(a, c)) {
          ++triples;  // open or closed triple centered at a
          if (adjacent(b, c) && a < b) ++triangles;  // count each once
        }
      }
  if (triples == 0) return std::nullopt;
  return 3.0 * static_cast<double>(triangles) / static_cast<double>(triples);
}

}  // namespace oracle
