#pragma once

#include <cstddef>
#include <vector>

#include "dblab/graph.hpp"
#include "dblab/protocol.hpp"

namespace dblab {

enum class Exactness { exact, upper_bound };

const char* exactness_name(Exactness e);

struct ClosedForm {
  double value = 0.0;
  Exactness exactness = Exactness::exact;
};

// Closed-form machinery for the graph-based protocol at a fixed round count.
// Holds the transition-matrix powers M^0..M^n that every formula below draws
// from; build once, then read-only (safe to share across threads).
class GraphAnalytics {
 public:
  explicit GraphAnalytics(std::size_t n);

  std::size_t rounds() const { return topo_.n; }

  // Probability that the pre-ask response harvested in round j matches the
  // correct response of round i, conditioned on the first challenge mismatch
  // happening in round t. Arguments are 1-based and must lie in [1, n].
  //   1        if i < t and i == j
  //   1/2      if i < t and i != j
  //   1/2      if i >= t and j < t
  //   1/2 + (1/4) sum_k (M^{i-t}[1,k] M^{j-t}[2,k] + M^{i-t}[2,k] M^{j-t}[1,k])
  //            otherwise,
  // with rows 1 and 2 taken mod 2n (the circulant shift pins the two
  // post-divergence nodes to indices 1 and 2).
  double theorem1_prob(std::size_t i, std::size_t j, std::size_t t) const;

  // Round j in [1, n] maximizing theorem1_prob(i, j, t); ties break toward
  // the smaller j.
  std::size_t best_source_round(std::size_t i, std::size_t t) const;

  // Best pre-ask adversary success probability in the mafia fraud:
  //   sum_{t=1}^{n} 2^{-t} prod_{i=t}^{n} max_j theorem1_prob(i, j, t) + 2^{-n}
  double mafia() const;

  // Distance-fraud upper bound: the quadratic bound at collision probability
  //   p = prod_{i=1}^{n} (1/2 + (1/2) sum_k M^i[0,k]^2).
  double distance_bound() const;

 private:
  GraphTopology topo_;
  std::vector<WalkMatrix> powers_;
};

// One-shot conveniences over a freshly built GraphAnalytics.
double theorem1_prob(std::size_t n, std::size_t i, std::size_t j,
                     std::size_t t);
double graph_mafia(std::size_t n);
double graph_distance_bound(std::size_t n);

// Distance-fraud bound for any single-bit-round protocol with prover-function
// collision probability `collision_prob` = Pr(f(x) = f(y)):
//   (2^{-n} + sqrt(2^{-2n} - 4*2^{-n} + 4*collision_prob)) / 2.
// Throws std::domain_error when collision_prob < 2^{-n}.
double generic_distance_bound(std::size_t n, double collision_prob);

// ATP (single tree of depth n): collision probability collapses to
// p = prod_{i=1}^{n} (1/2 + 2^{-(i+1)}).
double atp_distance_bound(std::size_t n);

// Mafia fraud success for KAP at predefined-challenge probability pd:
//   (pd/2) sum_{i=1}^{n} ((3-pd)/4)^{i-1} (1/2)^{n-i+1} + ((3-pd)/4)^n.
// At pd = 0 this equals the HKP value (3/4)^n bit-for-bit.
double kap_mafia(std::size_t n, double pd);

// Empirical per-tree distance-fraud constant for depth-3 ATP trees, obtained
// by exhausting all 2^14 tree labelings; the ATP3 value is this to the n/3.
inline constexpr double kAtp3DistanceBase = 0.3999;

// Tabulated closed forms per protocol.
//   mafia:    HKP (3/4)^n; KAP kap_mafia; ATP (1/2)^n (n/2 + 1);
//             ATP3 (1/2)^n (5/2)^{n/3}; GRAPH GraphAnalytics::mafia.
//   distance: HKP (3/4)^n exact; KAP (3/4 + pd/4)^n exact;
//             ATP upper bound; ATP3 (0.3999)^{n/3} exact;
//             GRAPH upper bound.
double closed_form_mafia(const ProtocolConfig& cfg);
ClosedForm closed_form_distance(const ProtocolConfig& cfg);

}  // namespace dblab
