#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qaplon {

/// Dense index of a permutation of {0..n-1} in [0, n!), lexicographic
/// (Lehmer-code) order. The identity permutation ranks 0, the fully
/// reversed one ranks n!-1.
using ConfigId = std::uint64_t;

/// Largest n for which n! fits in an unsigned 64-bit integer.
inline constexpr int kMaxRankableN = 20;

/// n! for 0 <= n <= kMaxRankableN; throws std::invalid_argument beyond.
std::uint64_t factorial(int n);

/// Lehmer rank of a permutation of {0..n-1}.
ConfigId rank_of(std::span<const int> p);

/// Inverse of rank_of; writes the permutation into out (size n).
void unrank_into(ConfigId id, int n, std::span<int> out);

std::vector<int> unrank(ConfigId id, int n);

}  // namespace qaplon
