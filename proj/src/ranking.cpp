#include "qaplon/ranking.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace qaplon {

namespace {

constexpr std::array<std::uint64_t, kMaxRankableN + 1> kFact = [] {
  std::array<std::uint64_t, kMaxRankableN + 1> f{};
  f[0] = 1;
  for (int i = 1; i <= kMaxRankableN; ++i)
    f[i] = f[i - 1] * static_cast<std::uint64_t>(i);
  return f;
}();

}  // namespace

std::uint64_t factorial(int n) {
  if (n < 0 || n > kMaxRankableN)
    throw std::invalid_argument("factorial: n must be in [0, " +
                                std::to_string(kMaxRankableN) + "], got " +
                                std::to_string(n));
  return kFact[n];
}

ConfigId rank_of(std::span<const int> p) {
  const int n = static_cast<int>(p.size());
  if (n > kMaxRankableN)
    throw std::invalid_argument("rank_of: permutation longer than " +
                                std::to_string(kMaxRankableN));
  std::uint64_t r = 0;
  for (int i = 0; i + 1 < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (p[j] < p[i]) ++smaller;
    r += static_cast<std::uint64_t>(smaller) * kFact[n - 1 - i];
  }
  return r;
}

void unrank_into(ConfigId id, int n, std::span<int> out) {
  if (n < 0 || n > kMaxRankableN)
    throw std::invalid_argument("unrank: n out of range");
  if (id >= kFact[n])
    throw std::invalid_argument("unrank: rank " + std::to_string(id) +
                                " >= n! for n = " + std::to_string(n));
  if (out.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("unrank: output span has wrong length");

  int remaining[kMaxRankableN];
  for (int i = 0; i < n; ++i) remaining[i] = i;
  int left = n;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t f = kFact[n - 1 - i];
    const int c = static_cast<int>(id / f);
    id %= f;
    out[i] = remaining[c];
    for (int j = c; j + 1 < left; ++j) remaining[j] = remaining[j + 1];
    --left;
  }
}

std::vector<int> unrank(ConfigId id, int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  unrank_into(id, n, p);
  return p;
}

}  // namespace qaplon
