#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "qaplon/qap.hpp"

namespace qaplon {

enum class InstanceClass { kUniform, kRealLike };
enum class DistanceMode { kEuclideanPoints, kUniformIntegers };

std::string to_string(InstanceClass c);
std::string to_string(DistanceMode m);
InstanceClass instance_class_from_string(std::string_view s);
DistanceMode distance_mode_from_string(std::string_view s);

/// Parameters of the two instance generators. Defaults reproduce the
/// experimental setting: d_max = 100, f_max = 100 for the uniform class
/// and (M, K, m) = (0, 1, 100), A = -10, B = 5 for the real-like class.
struct GeneratorConfig {
  InstanceClass klass = InstanceClass::kUniform;
  int n = 5;
  std::uint64_t seed = 0;

  // uniform class
  double d_max = 100.0;      // disc radius (euclidean-points) or integer bound
  std::int64_t f_max = 100;  // flows uniform in [1, f_max]
  DistanceMode distance_mode = DistanceMode::kEuclideanPoints;

  // real-like class
  double cluster_field_radius = 0.0;  // M: outer circle holding cluster centers
  int cluster_max_points = 1;        // K: points per cluster, uniform in {1..K}
  double cluster_radius = 100.0;      // m: disc around each center
  double flow_exp_lo = -10.0;         // A
  double flow_exp_hi = 5.0;           // B, flow = round(10^((B-A)X + A))
};

/// Throws ConfigError when the invariants (n >= 2, f_max >= 1, A < B,
/// B > 0, K >= 1, m > 0 or M > 0, d_max >= 1) are violated.
void validate(const GeneratorConfig& cfg);

QapInstance gen_uniform(const GeneratorConfig& cfg);
QapInstance gen_real_like(const GeneratorConfig& cfg);

/// Dispatches on cfg.klass.
QapInstance generate(const GeneratorConfig& cfg);

/// The real-like flow law: nearest integer (ties away from zero) of
/// 10^((hi-lo)*x + lo) for x in [0, 1).
Cost real_like_flow_value(double x, double lo, double hi);

/// Expected fraction of zero off-diagonal flows of the real-like law,
/// (log10(0.5) - lo) / (hi - lo), clamped to [0, 1].
double real_like_zero_fraction(double lo, double hi);

/// Plain-text instance format: leading '#' comment lines carry the meta,
/// then n, a blank line, n rows of the distance matrix, a blank line and
/// n rows of the flow matrix.
std::string serialize_instance(const QapInstance& inst);

/// Inverse of serialize_instance; throws ParseError with the offending
/// 1-based line number on malformed input.
QapInstance parse_instance(std::string_view text);

}  // namespace qaplon
