#include "dblab/analytics.hpp"

#include <cmath>
#include <stdexcept>

#include "dblab/errors.hpp"

namespace dblab {

const char* exactness_name(Exactness e) {
  return e == Exactness::exact ? "exact" : "upper_bound";
}

GraphAnalytics::GraphAnalytics(std::size_t n) : topo_(build_topology(n)) {
  const WalkMatrix step = walk_matrix(topo_);
  powers_.reserve(n + 1);
  powers_.push_back(WalkMatrix::identity(topo_.node_count()));
  for (std::size_t e = 1; e <= n; ++e)
    powers_.push_back(powers_.back().multiplied_by(step));
}

double GraphAnalytics::theorem1_prob(std::size_t i, std::size_t j,
                                     std::size_t t) const {
  const std::size_t n = topo_.n;
  if (i < 1 || i > n || j < 1 || j > n || t < 1 || t > n)
    throw ConfigError("theorem1_prob: rounds must lie in [1, n]");
  if (i < t) return i == j ? 1.0 : 0.5;
  if (j < t) return 0.5;
  const WalkMatrix& mi = powers_[i - t];
  const WalkMatrix& mj = powers_[j - t];
  const std::size_t nodes = topo_.node_count();
  const std::size_t r1 = 1 % nodes;
  const std::size_t r2 = 2 % nodes;
  double sum = 0.0;
  for (std::size_t k = 0; k < nodes; ++k)
    sum += mi.at(r1, k) * mj.at(r2, k) + mi.at(r2, k) * mj.at(r1, k);
  return 0.5 + 0.25 * sum;
}

std::size_t GraphAnalytics::best_source_round(std::size_t i,
                                              std::size_t t) const {
  std::size_t best = 1;
  double best_p = theorem1_prob(i, 1, t);
  for (std::size_t j = 2; j <= topo_.n; ++j) {
    const double p = theorem1_prob(i, j, t);
    if (p > best_p) {
      best_p = p;
      best = j;
    }
  }
  return best;
}

double GraphAnalytics::mafia() const {
  const std::size_t n = topo_.n;
  double total = std::ldexp(1.0, -static_cast<int>(n));
  for (std::size_t t = 1; t <= n; ++t) {
    double prod = 1.0;
    for (std::size_t i = t; i <= n; ++i) {
      double best = 0.0;
      for (std::size_t j = 1; j <= n; ++j)
        best = std::max(best, theorem1_prob(i, j, t));
      prod *= best;
    }
    total += std::ldexp(prod, -static_cast<int>(t));
  }
  return total;
}

double GraphAnalytics::distance_bound() const {
  const std::size_t n = topo_.n;
  const std::size_t nodes = topo_.node_count();
  double p = 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    double sq = 0.0;
    for (std::size_t k = 0; k < nodes; ++k) {
      const double v = powers_[i].at(0, k);
      sq += v * v;
    }
    p *= 0.5 + 0.5 * sq;
  }
  return generic_distance_bound(n, p);
}

double theorem1_prob(std::size_t n, std::size_t i, std::size_t j,
                     std::size_t t) {
  return GraphAnalytics(n).theorem1_prob(i, j, t);
}

double graph_mafia(std::size_t n) { return GraphAnalytics(n).mafia(); }

double graph_distance_bound(std::size_t n) {
  return GraphAnalytics(n).distance_bound();
}

double generic_distance_bound(std::size_t n, double collision_prob) {
  if (n == 0) throw ConfigError("generic_distance_bound: n must be positive");
  const double inv = std::ldexp(1.0, -static_cast<int>(n));
  if (collision_prob < inv)
    throw std::domain_error(
        "generic_distance_bound: collision probability below 2^-n");
  return 0.5 * (inv + std::sqrt(inv * inv - 4.0 * inv + 4.0 * collision_prob));
}

double atp_distance_bound(std::size_t n) {
  if (n == 0) throw ConfigError("atp_distance_bound: n must be positive");
  double p = 1.0;
  for (std::size_t i = 1; i <= n; ++i)
    p *= 0.5 + std::ldexp(1.0, -static_cast<int>(i + 1));
  return generic_distance_bound(n, p);
}

double kap_mafia(std::size_t n, double pd) {
  if (n == 0) throw ConfigError("kap_mafia: n must be positive");
  const double q = (3.0 - pd) / 4.0;
  double sum = 0.0;
  double qpow = 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    sum += qpow * std::ldexp(1.0, -static_cast<int>(n - i + 1));
    qpow *= q;
  }
  // qpow is left at q^n; keep the closing term as pow(q, n) so that pd = 0
  // reproduces the HKP value bit-for-bit.
  return (pd / 2.0) * sum + std::pow(q, static_cast<double>(n));
}

namespace {

double per_tree_collision(std::size_t depth) {
  double p = 1.0;
  for (std::size_t i = 1; i <= depth; ++i)
    p *= 0.5 + std::ldexp(1.0, -static_cast<int>(i + 1));
  return p;
}

}  // namespace

double closed_form_mafia(const ProtocolConfig& cfg) {
  cfg.validate();
  const double n = static_cast<double>(cfg.n);
  switch (cfg.kind) {
    case Protocol::hkp:
      return std::pow(3.0 / 4.0, n);
    case Protocol::kap:
      return kap_mafia(cfg.n, cfg.predefined_prob);
    case Protocol::atp:
      if (cfg.is_atp3())
        return std::pow(0.5, n) * std::pow(2.5, static_cast<double>(cfg.alpha));
      if (cfg.alpha == 1) return std::pow(0.5, n) * (n / 2.0 + 1.0);
      // Trees are independent, so the per-tree value is raised to alpha.
      return std::pow(std::pow(0.5, static_cast<double>(cfg.tree_depth)) *
                          (static_cast<double>(cfg.tree_depth) / 2.0 + 1.0),
                      static_cast<double>(cfg.alpha));
    case Protocol::graph:
      return graph_mafia(cfg.n);
  }
  throw ConfigError("closed_form_mafia: unknown protocol");
}

ClosedForm closed_form_distance(const ProtocolConfig& cfg) {
  cfg.validate();
  const double n = static_cast<double>(cfg.n);
  switch (cfg.kind) {
    case Protocol::hkp:
      return {std::pow(3.0 / 4.0, n), Exactness::exact};
    case Protocol::kap:
      return {std::pow(3.0 / 4.0 + cfg.predefined_prob / 4.0, n),
              Exactness::exact};
    case Protocol::atp:
      if (cfg.is_atp3())
        return {std::pow(kAtp3DistanceBase, static_cast<double>(cfg.alpha)),
                Exactness::exact};
      if (cfg.alpha == 1)
        return {atp_distance_bound(cfg.n), Exactness::upper_bound};
      return {generic_distance_bound(
                  cfg.n, std::pow(per_tree_collision(cfg.tree_depth),
                                  static_cast<double>(cfg.alpha))),
              Exactness::upper_bound};
    case Protocol::graph:
      return {graph_distance_bound(cfg.n), Exactness::upper_bound};
  }
  throw ConfigError("closed_form_distance: unknown protocol");
}

}  // namespace dblab
