#include "dblab/graph.hpp"

#include "dblab/errors.hpp"

namespace dblab {

GraphTopology build_topology(std::size_t n) {
  if (n == 0) throw ConfigError("build_topology: n must be positive");
  return GraphTopology{n};
}

LabeledGraph label_graph(const GraphTopology& topo, const BitString& material) {
  const std::size_t nodes = topo.node_count();
  if (material.size() != 2 * nodes)
    throw LayoutError("label_graph: material must have 4n bits");
  LabeledGraph g;
  g.topo = topo;
  g.node_value.resize(nodes);
  g.short_label.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    g.node_value[i] = material.bit(i);
    g.short_label[i] = material.bit(nodes + i);
  }
  return g;
}

HeadNode head_node(const LabeledGraph& g, const BitString& challenges) {
  if (challenges.empty())
    throw ConfigError("head_node: challenge prefix must not be empty");
  if (challenges.size() > g.topo.n)
    throw ConfigError("head_node: challenge prefix longer than n");
  std::size_t node = 0;
  for (std::size_t i = 0; i < challenges.size(); ++i)
    node = walk_step(g, node, challenges.bit(i));
  return HeadNode{node, g.node_value[node]};
}

WalkMatrix WalkMatrix::multiplied_by(const WalkMatrix& rhs) const {
  WalkMatrix out(order_);
  for (std::size_t i = 0; i < order_; ++i) {
    for (std::size_t k = 0; k < order_; ++k) {
      const double v = at(i, k);
      if (v == 0.0) continue;
      for (std::size_t j = 0; j < order_; ++j)
        out.at(i, j) += v * rhs.at(k, j);
    }
  }
  return out;
}

WalkMatrix WalkMatrix::identity(std::size_t order) {
  WalkMatrix m(order);
  for (std::size_t i = 0; i < order; ++i) m.at(i, i) = 1.0;
  return m;
}

WalkMatrix walk_matrix(const GraphTopology& topo) {
  const std::size_t nodes = topo.node_count();
  WalkMatrix m(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    m.at(i, topo.short_target(i)) += 0.5;
    m.at(i, topo.long_target(i)) += 0.5;
  }
  return m;
}

WalkPowerCache::WalkPowerCache(const GraphTopology& topo)
    : step_(walk_matrix(topo)) {
  powers_.push_back(WalkMatrix::identity(topo.node_count()));
}

void WalkPowerCache::ensure(std::size_t exponent) {
  while (powers_.size() <= exponent)
    powers_.push_back(powers_.back().multiplied_by(step_));
}

const WalkMatrix& WalkPowerCache::power(std::size_t exponent) {
  ensure(exponent);
  return powers_[exponent];
}

double walk_probability(const GraphTopology& topo, std::size_t steps,
                        std::size_t from, std::size_t to) {
  if (from >= topo.node_count() || to >= topo.node_count())
    throw ConfigError("walk_probability: node index out of range");
  WalkPowerCache cache(topo);
  return cache.power(steps).at(from, to);
}

std::vector<std::uint64_t> walk_counts(const GraphTopology& topo,
                                       std::size_t steps) {
  if (steps > 62)
    throw ResourceError("walk_counts: counts exceed 64 bits past 62 steps");
  const std::size_t nodes = topo.node_count();
  std::vector<std::uint64_t> counts(nodes * nodes, 0);
  for (std::size_t i = 0; i < nodes; ++i) counts[i * nodes + i] = 1;
  std::vector<std::uint64_t> next(nodes * nodes);
  for (std::size_t s = 0; s < steps; ++s) {
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t i = 0; i < nodes; ++i) {
      for (std::size_t k = 0; k < nodes; ++k) {
        const std::uint64_t c = counts[i * nodes + k];
        if (c == 0) continue;
        next[i * nodes + topo.short_target(k)] += c;
        next[i * nodes + topo.long_target(k)] += c;
      }
    }
    counts.swap(next);
  }
  return counts;
}

bool rotation_check(const GraphTopology& topo, std::size_t y, std::size_t x,
                    std::size_t k, std::size_t z) {
  const std::size_t nodes = topo.node_count();
  if (x >= nodes || k >= nodes)
    throw ConfigError("rotation_check: node index out of range");
  const auto counts = walk_counts(topo, y);
  const std::size_t xs = (x + nodes - z % nodes) % nodes;
  const std::size_t ks = (k + nodes - z % nodes) % nodes;
  return counts[x * nodes + k] == counts[xs * nodes + ks];
}

}  // namespace dblab
