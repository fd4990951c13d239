#include "qaplon/qap.hpp"

#include <stdexcept>
#include <string>

namespace qaplon {

namespace {

void check_matrix(const std::vector<Cost>& m, int n, const char* name) {
  if (m.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw std::invalid_argument(std::string(name) + " matrix is not " +
                                std::to_string(n) + "x" + std::to_string(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Cost v = m[static_cast<std::size_t>(i) * n + j];
      if (i == j && v != 0)
        throw std::invalid_argument(std::string(name) +
                                    " matrix has a nonzero diagonal entry");
      if (v < 0)
        throw std::invalid_argument(std::string(name) +
                                    " matrix has a negative entry");
    }
  }
}

}  // namespace

QapInstance::QapInstance(int n, std::vector<Cost> dist, std::vector<Cost> flow,
                         InstanceMeta meta)
    : n_(n), dist_(std::move(dist)), flow_(std::move(flow)),
      meta_(std::move(meta)) {
  if (n_ < 2)
    throw std::invalid_argument("instance dimension must be at least 2");
  check_matrix(dist_, n_, "distance");
  check_matrix(flow_, n_, "flow");
}

bool QapInstance::has_positive_flow() const noexcept {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (i != j && flow(i, j) > 0) return true;
  return false;
}

bool is_valid_permutation(std::span<const int> p) {
  const int n = static_cast<int>(p.size());
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int v : p) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

Cost cost(const QapInstance& inst, std::span<const int> p) {
  const int n = inst.n();
  if (static_cast<int>(p.size()) != n)
    throw std::invalid_argument("cost: permutation length " +
                                std::to_string(p.size()) +
                                " does not match instance dimension " +
                                std::to_string(n));
  Cost total = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      total += inst.dist(i, j) * inst.flow(p[i], p[j]);
  return total;
}

double fitness(const QapInstance& inst, std::span<const int> p) {
  return -static_cast<double>(cost(inst, p));
}

Cost swap_delta(const QapInstance& inst, std::span<const int> p, int r, int s) {
  const int n = inst.n();
  if (static_cast<int>(p.size()) != n)
    throw std::invalid_argument("swap_delta: permutation length mismatch");
  if (r < 0 || s < 0 || r >= n || s >= n || r >= s)
    throw std::invalid_argument("swap_delta: positions must satisfy 0 <= r < s < n");
  return detail::swap_delta_unchecked(inst, p.data(), r, s);
}

std::vector<std::pair<int, int>> neighbor_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  if (n < 2) return pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int r = 0; r + 1 < n; ++r)
    for (int s = r + 1; s < n; ++s) pairs.emplace_back(r, s);
  return pairs;
}

}  // namespace qaplon
