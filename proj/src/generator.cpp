#include "qaplon/generator.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qaplon/errors.hpp"
#include "qaplon/rng.hpp"

namespace qaplon {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

Point sample_disc(rng::Prng& prng, double radius, Point center = {}) {
  const double r = radius * std::sqrt(prng.next_unit());
  const double theta = kTwoPi * prng.next_unit();
  return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

std::vector<Cost> euclidean_distances(const std::vector<Point>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<Cost> d(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Cost v = std::llround(
          std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y));
      d[static_cast<std::size_t>(i) * n + j] = v;
      d[static_cast<std::size_t>(j) * n + i] = v;
    }
  }
  return d;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

InstanceMeta make_meta(const GeneratorConfig& cfg) {
  InstanceMeta meta;
  meta.generator_class = to_string(cfg.klass);
  meta.seed = cfg.seed;
  if (cfg.klass == InstanceClass::kUniform) {
    meta.params.emplace_back("d_max", format_number(cfg.d_max));
    meta.params.emplace_back("f_max", std::to_string(cfg.f_max));
    meta.params.emplace_back("distance_mode", to_string(cfg.distance_mode));
  } else {
    meta.params.emplace_back("M", format_number(cfg.cluster_field_radius));
    meta.params.emplace_back("K", std::to_string(cfg.cluster_max_points));
    meta.params.emplace_back("m", format_number(cfg.cluster_radius));
    meta.params.emplace_back("A", format_number(cfg.flow_exp_lo));
    meta.params.emplace_back("B", format_number(cfg.flow_exp_hi));
  }
  return meta;
}

}  // namespace

std::string to_string(InstanceClass c) {
  return c == InstanceClass::kUniform ? "uniform" : "real-like";
}

std::string to_string(DistanceMode m) {
  return m == DistanceMode::kEuclideanPoints ? "euclidean-points"
                                             : "uniform-integers";
}

InstanceClass instance_class_from_string(std::string_view s) {
  if (s == "uniform") return InstanceClass::kUniform;
  if (s == "real-like") return InstanceClass::kRealLike;
  throw ConfigError("unknown instance class: " + std::string(s));
}

DistanceMode distance_mode_from_string(std::string_view s) {
  if (s == "euclidean-points") return DistanceMode::kEuclideanPoints;
  if (s == "uniform-integers") return DistanceMode::kUniformIntegers;
  throw ConfigError("unknown distance mode: " + std::string(s));
}

void validate(const GeneratorConfig& cfg) {
  if (cfg.n < 2) throw ConfigError("generator: n must be at least 2");
  if (cfg.klass == InstanceClass::kUniform) {
    if (cfg.f_max < 1) throw ConfigError("generator: f_max must be >= 1");
    if (cfg.d_max < 1.0) throw ConfigError("generator: d_max must be >= 1");
  } else {
    if (!(cfg.flow_exp_lo < cfg.flow_exp_hi))
      throw ConfigError("generator: flow exponents must satisfy A < B");
    if (!(cfg.flow_exp_hi > 0.0))
      throw ConfigError("generator: flow exponent B must be > 0");
    if (cfg.cluster_max_points < 1)
      throw ConfigError("generator: K must be >= 1");
    if (!(cfg.cluster_radius > 0.0 || cfg.cluster_field_radius > 0.0))
      throw ConfigError("generator: need m > 0 or M > 0");
  }
}

Cost real_like_flow_value(double x, double lo, double hi) {
  return std::llround(std::pow(10.0, (hi - lo) * x + lo));
}

double real_like_zero_fraction(double lo, double hi) {
  const double f = (std::log10(0.5) - lo) / (hi - lo);
  return f < 0.0 ? 0.0 : (f > 1.0 ? 1.0 : f);
}

QapInstance gen_uniform(const GeneratorConfig& cfg) {
  if (cfg.klass != InstanceClass::kUniform)
    throw ConfigError("gen_uniform: config class is not uniform");
  validate(cfg);
  const int n = cfg.n;
  rng::Prng prng(cfg.seed);

  std::vector<Cost> dist;
  if (cfg.distance_mode == DistanceMode::kEuclideanPoints) {
    std::vector<Point> pts(static_cast<std::size_t>(n));
    for (auto& pt : pts) pt = sample_disc(prng, cfg.d_max);
    dist = euclidean_distances(pts);
  } else {
    dist.assign(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j)
          dist[static_cast<std::size_t>(i) * n + j] =
              prng.next_int(1, static_cast<std::int64_t>(cfg.d_max));
  }

  std::vector<Cost> flow(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        flow[static_cast<std::size_t>(i) * n + j] = prng.next_int(1, cfg.f_max);

  return QapInstance(n, std::move(dist), std::move(flow), make_meta(cfg));
}

QapInstance gen_real_like(const GeneratorConfig& cfg) {
  if (cfg.klass != InstanceClass::kRealLike)
    throw ConfigError("gen_real_like: config class is not real-like");
  validate(cfg);
  const int n = cfg.n;
  rng::Prng prng(cfg.seed);

  // Clustered locations: centers uniform in the outer disc, 1..K points
  // per cluster, clusters truncated to keep exactly n points.
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  while (static_cast<int>(pts.size()) < n) {
    const Point center = sample_disc(prng, cfg.cluster_field_radius);
    const auto want = static_cast<int>(
        prng.next_int(1, static_cast<std::int64_t>(cfg.cluster_max_points)));
    const int take = std::min(want, n - static_cast<int>(pts.size()));
    for (int c = 0; c < take; ++c)
      pts.push_back(sample_disc(prng, cfg.cluster_radius, center));
  }
  std::vector<Cost> dist = euclidean_distances(pts);

  // Log-uniform flows; redraw the whole matrix in the rare case it comes
  // out with no positive off-diagonal entry.
  std::vector<Cost> flow(static_cast<std::size_t>(n) * n, 0);
  for (;;) {
    bool any_positive = false;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const Cost v = real_like_flow_value(prng.next_unit(), cfg.flow_exp_lo,
                                            cfg.flow_exp_hi);
        flow[static_cast<std::size_t>(i) * n + j] = v;
        if (v > 0) any_positive = true;
      }
    }
    if (any_positive) break;
  }

  return QapInstance(n, std::move(dist), std::move(flow), make_meta(cfg));
}

QapInstance generate(const GeneratorConfig& cfg) {
  return cfg.klass == InstanceClass::kUniform ? gen_uniform(cfg)
                                              : gen_real_like(cfg);
}

std::string serialize_instance(const QapInstance& inst) {
  std::ostringstream os;
  const InstanceMeta& meta = inst.meta();
  if (!meta.generator_class.empty())
    os << "# class: " << meta.generator_class << "\n";
  if (meta.seed) os << "# seed: " << *meta.seed << "\n";
  for (const auto& [key, value] : meta.params)
    os << "# param " << key << ": " << value << "\n";

  const int n = inst.n();
  os << n << "\n\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) os << (j ? " " : "") << inst.dist(i, j);
    os << "\n";
  }
  os << "\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) os << (j ? " " : "") << inst.flow(i, j);
    os << "\n";
  }
  return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

void parse_meta_comment(std::string_view body, InstanceMeta& meta) {
  const std::size_t colon = body.find(':');
  if (colon == std::string_view::npos) return;
  const std::string key{trim(body.substr(0, colon))};
  const std::string value{trim(body.substr(colon + 1))};
  if (key == "class") {
    meta.generator_class = value;
  } else if (key == "seed") {
    try {
      meta.seed = std::stoull(value);
    } catch (const std::exception&) {
      // leave unset on malformed seed comments
    }
  } else if (key.rfind("param ", 0) == 0) {
    meta.params.emplace_back(key.substr(6), value);
  }
}

Cost parse_entry(std::string_view token, std::size_t line_no) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(std::string(token), &pos);
  } catch (const std::exception&) {
    throw ParseError(line_no, "expected an integer, got '" + std::string(token) + "'");
  }
  if (pos != token.size())
    throw ParseError(line_no, "trailing characters after integer '" +
                                  std::string(token) + "'");
  if (v < 0) throw ParseError(line_no, "negative matrix entry " + std::to_string(v));
  return v;
}

}  // namespace

QapInstance parse_instance(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> lines;  // (line no, content)
  InstanceMeta meta;
  {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      ++line_no;
      const std::string_view raw = text.substr(start, end - start);
      const std::string_view t = trim(raw);
      if (!t.empty()) {
        if (t.front() == '#')
          parse_meta_comment(t.substr(1), meta);
        else
          lines.emplace_back(line_no, std::string(t));
      }
      if (end == text.size()) break;
      start = end + 1;
    }
  }

  if (lines.empty()) throw ParseError(0, "empty instance file");

  std::size_t cursor = 0;
  const auto& [n_line, n_text] = lines[cursor++];
  int n = 0;
  try {
    std::size_t pos = 0;
    n = std::stoi(n_text, &pos);
    if (pos != n_text.size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw ParseError(n_line, "expected the dimension, got '" + n_text + "'");
  }
  if (n < 2) throw ParseError(n_line, "dimension must be at least 2");

  auto read_matrix = [&](const char* name) {
    std::vector<Cost> m(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) {
      if (cursor >= lines.size())
        throw ParseError(0, std::string("unexpected end of file inside the ") +
                                name + " matrix");
      const auto& [line_no, content] = lines[cursor++];
      std::istringstream row(content);
      std::string token;
      int j = 0;
      while (row >> token) {
        if (j >= n)
          throw ParseError(line_no, std::string("row has more than ") +
                                        std::to_string(n) + " entries");
        m[static_cast<std::size_t>(i) * n + j] = parse_entry(token, line_no);
        ++j;
      }
      if (j != n)
        throw ParseError(line_no, "row has " + std::to_string(j) +
                                      " entries, expected " + std::to_string(n));
      if (m[static_cast<std::size_t>(i) * n + i] != 0)
        throw ParseError(line_no, std::string(name) +
                                      " matrix has a nonzero diagonal entry");
    }
    return m;
  };

  std::vector<Cost> dist = read_matrix("distance");
  std::vector<Cost> flow = read_matrix("flow");
  if (cursor != lines.size())
    throw ParseError(lines[cursor].first, "unexpected content after the flow matrix");

  QapInstance inst(n, std::move(dist), std::move(flow), std::move(meta));
  if (!inst.has_positive_flow())
    throw ParseError(0, "flow matrix has no positive off-diagonal entry");
  return inst;
}

}  // namespace qaplon
