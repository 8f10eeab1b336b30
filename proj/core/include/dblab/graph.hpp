#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dblab/bits.hpp"

namespace dblab {

// Circulant 2-out topology used by the graph-based protocol: 2n nodes
// q_0..q_{2n-1}; short edge s_i: q_i -> q_{(i+1) mod 2n}, long edge
// l_i: q_i -> q_{(i+2) mod 2n}. Every node has out- and in-degree 2.
struct GraphTopology {
  std::size_t n = 0;

  std::size_t node_count() const { return 2 * n; }
  std::size_t edge_count() const { return 4 * n; }
  std::size_t short_target(std::size_t node) const {
    return (node + 1) % node_count();
  }
  std::size_t long_target(std::size_t node) const {
    return (node + 2) % node_count();
  }
};

GraphTopology build_topology(std::size_t n);  // ConfigError when n == 0

// Topology plus the 4n-bit valuation from the slow phase: bits 0..2n-1 value
// the nodes (q_i = H_{i+1}), bits 2n..4n-1 label the short edges
// (s_i = H_{2n+i+1}); long-edge labels are the complement, l_i = s_i ^ 1.
struct LabeledGraph {
  GraphTopology topo;
  std::vector<std::uint8_t> node_value;
  std::vector<std::uint8_t> short_label;

  std::uint8_t long_label(std::size_t i) const { return short_label[i] ^ 1u; }
};

LabeledGraph label_graph(const GraphTopology& topo, const BitString& material);

// One prover/verifier move: follow the short edge out of `node` when its
// label equals the challenge, the long edge otherwise.
inline std::size_t walk_step(const LabeledGraph& g, std::size_t node,
                             std::uint8_t challenge) {
  return g.short_label[node] == (challenge & 1u) ? g.topo.short_target(node)
                                                 : g.topo.long_target(node);
}

struct HeadNode {
  std::size_t index = 0;
  std::uint8_t value = 0;
};

// Node whose value is the correct response after the given challenge prefix,
// walking from q_0. The prefix must have between 1 and n bits.
HeadNode head_node(const LabeledGraph& g, const BitString& challenges);

// Dense row-major square matrix of transition probabilities.
class WalkMatrix {
 public:
  explicit WalkMatrix(std::size_t order)
      : order_(order), a_(order * order, 0.0) {}

  std::size_t order() const { return order_; }
  double at(std::size_t r, std::size_t c) const { return a_[r * order_ + c]; }
  double& at(std::size_t r, std::size_t c) { return a_[r * order_ + c]; }

  WalkMatrix multiplied_by(const WalkMatrix& rhs) const;
  static WalkMatrix identity(std::size_t order);

 private:
  std::size_t order_;
  std::vector<double> a_;
};

// One-step transition matrix under a uniform challenge: adjacency / 2, so
// each row holds exactly two entries of 1/2.
WalkMatrix walk_matrix(const GraphTopology& topo);

// M^0..M^max cached by exponent. Grow the cache (ensure) before sharing it
// across threads; readers then see a consistent snapshot.
class WalkPowerCache {
 public:
  explicit WalkPowerCache(const GraphTopology& topo);

  void ensure(std::size_t exponent);
  const WalkMatrix& power(std::size_t exponent);

 private:
  WalkMatrix step_;
  std::vector<WalkMatrix> powers_;
};

// Probability that a walk of `steps` uniform-challenge moves from `from` ends
// at `to`; equals A^steps[from,to] / 2^steps.
double walk_probability(const GraphTopology& topo, std::size_t steps,
                        std::size_t from, std::size_t to);

// Exact integer walk counts A^steps as a row-major matrix. Entries sum to
// 2^steps per row, so steps is capped at 62 to stay within 64 bits.
std::vector<std::uint64_t> walk_counts(const GraphTopology& topo,
                                       std::size_t steps);

// Circulant symmetry A^y[x,k] == A^y[(x-z) mod 2n, (k-z) mod 2n]; holds for
// every argument combination by construction and is kept as a structural
// self-test.
bool rotation_check(const GraphTopology& topo, std::size_t y, std::size_t x,
                    std::size_t k, std::size_t z);

}  // namespace dblab
