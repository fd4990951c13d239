#include "qaplon/landscape.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "qaplon/errors.hpp"

namespace qaplon {

namespace {

constexpr std::uint32_t kUnowned = 0xFFFFFFFFu;

unsigned effective_workers(unsigned workers) {
  if (workers == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
  }
  return workers;
}

struct NeighborhoodScan {
  Cost min_delta = std::numeric_limits<Cost>::max();
  int r = -1;
  int s = -1;
};

// Full n(n-1)/2 scan; keeps the lexicographically first minimizer.
NeighborhoodScan scan_neighborhood(const QapInstance& inst,
                                   const int* p) noexcept {
  const int n = inst.n();
  NeighborhoodScan out;
  for (int r = 0; r + 1 < n; ++r) {
    for (int s = r + 1; s < n; ++s) {
      const Cost d = detail::swap_delta_unchecked(inst, p, r, s);
      if (d < out.min_delta) out = {d, r, s};
    }
  }
  return out;
}

void put_u64_le(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64_le(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw ParseError(0, "owner dump truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

// Shared post-pass: optima list, basin sizes, costs, neutrality.
void finalize_basin_map(const QapInstance& inst, BasinMap& bm) {
  const std::uint64_t total = bm.space_size;
  bm.optima.clear();
  for (std::uint64_t s = 0; s < total; ++s)
    if (bm.owner[s] == s) bm.optima.push_back(s);

  bm.basin_sizes.assign(bm.optima.size(), 0);
  for (std::uint64_t s = 0; s < total; ++s) {
    const auto it = std::lower_bound(bm.optima.begin(), bm.optima.end(),
                                     static_cast<ConfigId>(bm.owner[s]));
    if (it == bm.optima.end() || *it != bm.owner[s])
      throw std::runtime_error("basin map owner is not a recorded optimum");
    bm.basin_sizes[static_cast<std::size_t>(it - bm.optima.begin())]++;
  }

  const int n = bm.n;
  bm.optima_costs.resize(bm.optima.size());
  bm.neutral_optima_count = 0;
  std::vector<int> p(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < bm.optima.size(); ++i) {
    unrank_into(bm.optima[i], n, p);
    bm.optima_costs[i] = cost(inst, p);
    const NeighborhoodScan sc = scan_neighborhood(inst, p.data());
    if (sc.min_delta < 0)
      throw std::runtime_error("recorded optimum has an improving neighbor");
    if (sc.min_delta == 0) ++bm.neutral_optima_count;
  }
}

}  // namespace

ConfigId BasinMap::owner_of(ConfigId id) const {
  if (id >= space_size) throw std::invalid_argument("owner_of: rank out of range");
  return owner[id];
}

std::size_t BasinMap::optimum_index(ConfigId optimum) const {
  const auto it = std::lower_bound(optima.begin(), optima.end(), optimum);
  if (it == optima.end() || *it != optimum)
    throw std::invalid_argument("optimum_index: not an optimum of this map");
  return static_cast<std::size_t>(it - optima.begin());
}

std::optional<std::pair<int, int>> best_improving_move(const QapInstance& inst,
                                                       std::span<const int> p,
                                                       Cost* min_delta_out) {
  if (static_cast<int>(p.size()) != inst.n())
    throw std::invalid_argument("best_improving_move: permutation length mismatch");
  const NeighborhoodScan sc = scan_neighborhood(inst, p.data());
  if (min_delta_out) *min_delta_out = sc.min_delta;
  if (sc.r >= 0 && sc.min_delta < 0) return std::make_pair(sc.r, sc.s);
  return std::nullopt;
}

ConfigId hill_climb(const QapInstance& inst, ConfigId start) {
  const int n = inst.n();
  std::vector<int> p = unrank(start, n);
  for (;;) {
    const NeighborhoodScan sc = scan_neighborhood(inst, p.data());
    if (sc.r < 0 || sc.min_delta >= 0) return rank_of(p);
    apply_swap(p, sc.r, sc.s);
  }
}

BasinMap map_basins(const QapInstance& inst, unsigned workers) {
  const int n = inst.n();
  if (n > kMaxExhaustiveN)
    throw ResourceLimitError("map_basins: n = " + std::to_string(n) +
                             " exceeds the exhaustive guard n <= " +
                             std::to_string(kMaxExhaustiveN));
  const std::uint64_t total = factorial(n);

  BasinMap bm;
  bm.n = n;
  bm.space_size = total;
  bm.owner.assign(total, kUnowned);

  const unsigned nthreads =
      static_cast<unsigned>(std::min<std::uint64_t>(effective_workers(workers),
                                                    std::max<std::uint64_t>(total / 64, 1)));

  std::uint32_t* owner = bm.owner.data();
  std::atomic<std::uint64_t> cursor{0};
  constexpr std::uint64_t kChunk = 1024;

  auto worker_fn = [&]() {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::vector<std::uint32_t> path;
    for (;;) {
      const std::uint64_t begin = cursor.fetch_add(kChunk);
      if (begin >= total) break;
      const std::uint64_t end = std::min(begin + kChunk, total);
      for (std::uint64_t id = begin; id < end; ++id) {
        if (std::atomic_ref<std::uint32_t>(owner[id])
                .load(std::memory_order_relaxed) != kUnowned)
          continue;
        // Walk the strictly-descending successor chain until it reaches
        // a configuration with a known owner or a local optimum, then
        // stamp the whole path (path compression). Concurrent walkers
        // may duplicate work but always write identical values.
        path.clear();
        std::uint64_t cur = id;
        unrank_into(cur, n, p);
        std::uint32_t opt;
        for (;;) {
          const std::uint32_t seen =
              std::atomic_ref<std::uint32_t>(owner[cur])
                  .load(std::memory_order_relaxed);
          if (seen != kUnowned) {
            opt = seen;
            break;
          }
          const NeighborhoodScan sc = scan_neighborhood(inst, p.data());
          path.push_back(static_cast<std::uint32_t>(cur));
          if (sc.r < 0 || sc.min_delta >= 0) {
            opt = static_cast<std::uint32_t>(cur);
            break;
          }
          apply_swap(p, sc.r, sc.s);
          cur = rank_of(p);
        }
        for (const std::uint32_t x : path)
          std::atomic_ref<std::uint32_t>(owner[x])
              .store(opt, std::memory_order_relaxed);
      }
    }
  };

  if (nthreads <= 1) {
    worker_fn();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker_fn);
    for (auto& th : pool) th.join();
  }

  finalize_basin_map(inst, bm);
  return bm;
}

GlobalOptima global_optima(const BasinMap& bm) {
  if (bm.optima.empty())
    throw std::invalid_argument("global_optima: empty basin map");
  GlobalOptima g;
  g.cost = *std::min_element(bm.optima_costs.begin(), bm.optima_costs.end());
  std::uint64_t best_basin = 0;
  for (std::size_t i = 0; i < bm.optima.size(); ++i) {
    if (bm.optima_costs[i] != g.cost) continue;
    g.optima.push_back(bm.optima[i]);
    if (g.optima.size() == 1 || bm.basin_sizes[i] > best_basin) {
      best_basin = bm.basin_sizes[i];
      g.canonical = bm.optima[i];
    }
  }
  return g;
}

void write_owner_dump(const BasinMap& bm, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  put_u64_le(os, static_cast<std::uint64_t>(bm.n));
  put_u64_le(os, bm.space_size);
  for (std::uint64_t s = 0; s < bm.space_size; ++s)
    put_u64_le(os, bm.owner[s]);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

BasinMap read_owner_dump(const QapInstance& inst,
                         const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  const std::uint64_t n = get_u64_le(is);
  const std::uint64_t total = get_u64_le(is);
  if (n != static_cast<std::uint64_t>(inst.n()))
    throw ParseError(0, "owner dump dimension " + std::to_string(n) +
                            " does not match instance dimension " +
                            std::to_string(inst.n()));
  if (n > static_cast<std::uint64_t>(kMaxExhaustiveN) ||
      total != factorial(static_cast<int>(n)))
    throw ParseError(0, "owner dump header is inconsistent");

  BasinMap bm;
  bm.n = static_cast<int>(n);
  bm.space_size = total;
  bm.owner.resize(total);
  for (std::uint64_t s = 0; s < total; ++s) {
    const std::uint64_t v = get_u64_le(is);
    if (v >= total) throw ParseError(0, "owner dump has an out-of-range rank");
    bm.owner[s] = static_cast<std::uint32_t>(v);
  }
  for (std::uint64_t s = 0; s < total; ++s)
    if (bm.owner[bm.owner[s]] != bm.owner[s])
      throw ParseError(0, "owner dump is not idempotent");
  finalize_basin_map(inst, bm);
  return bm;
}

}  // namespace qaplon
