#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qaplon/qap.hpp"
#include "qaplon/ranking.hpp"

namespace qaplon {

/// n! exhaustive enumeration is refused above this dimension.
inline constexpr int kMaxExhaustiveN = 12;

/// Total mapping from every configuration to the local optimum its
/// best-improvement hill-climb terminates at; the basins partition the
/// whole space of n! configurations.
struct BasinMap {
  int n = 0;
  std::uint64_t space_size = 0;
  /// owner[s] = rank of the optimum configuration s descends to.
  /// Fits 32 bits under the kMaxExhaustiveN guard.
  std::vector<std::uint32_t> owner;
  std::vector<ConfigId> optima;  // sorted ascending
  std::vector<Cost> optima_costs;
  std::vector<std::uint64_t> basin_sizes;
  /// Optima that have at least one equal-cost neighbor (best neighbor
  /// is a plateau step); diagnostic for the non-neutrality assumption.
  std::uint64_t neutral_optima_count = 0;

  ConfigId owner_of(ConfigId id) const;
  /// Index of an optimum rank in `optima`; throws if absent.
  std::size_t optimum_index(ConfigId optimum) const;
};

/// Best strictly improving move of p, lexicographically smallest (r, s)
/// among equal-best; nullopt when p is a local optimum. When provided,
/// *min_delta_out receives the minimum neighbor delta.
std::optional<std::pair<int, int>> best_improving_move(
    const QapInstance& inst, std::span<const int> p, Cost* min_delta_out = nullptr);

/// Deterministic best-improvement descent from `start`; returns the rank
/// of the terminating local optimum.
ConfigId hill_climb(const QapInstance& inst, ConfigId start);

/// Runs the descent from every configuration, with successor memoization
/// and path compression. workers = 0 picks the hardware concurrency.
/// Throws ResourceLimitError when inst.n() exceeds kMaxExhaustiveN.
BasinMap map_basins(const QapInstance& inst, unsigned workers = 0);

struct GlobalOptima {
  std::vector<ConfigId> optima;  // all optima at the minimum cost
  Cost cost = 0;
  /// Tie-break for downstream metrics: largest basin, then smallest rank.
  ConfigId canonical = 0;
};

GlobalOptima global_optima(const BasinMap& bm);

/// Binary owner-array cache: little-endian u64 n, u64 n!, then n! u64
/// owner ranks.
void write_owner_dump(const BasinMap& bm, const std::filesystem::path& path);

/// Rebuilds the full BasinMap (optima, sizes, neutrality) from a dump,
/// validating it against the instance.
BasinMap read_owner_dump(const QapInstance& inst,
                         const std::filesystem::path& path);

}  // namespace qaplon
