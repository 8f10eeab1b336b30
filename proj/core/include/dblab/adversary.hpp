#pragma once

#include <cstdint>

#include "dblab/analytics.hpp"
#include "dblab/protocol.hpp"

namespace dblab {

enum class Fraud { mafia, distance };

const char* fraud_name(Fraud f);

struct MonteCarloOptions {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  // Trials are keyed by index, so results are identical for any worker count.
  unsigned threads = 1;
};

struct FraudEstimate {
  ProtocolConfig cfg;
  Fraud fraud = Fraud::mafia;
  double analytic = 0.0;
  Exactness exactness = Exactness::exact;
  double mc_mean = 0.0;
  double mc_stderr = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo estimate of the pre-ask mafia-fraud success probability. The
// adversary harvests responses to guessed challenges, then relays round i's
// harvested response until the first mismatch and the rule's source round
// afterwards: source j = i for HKP/KAP/ATP, best_j_rule for GRAPH. KAP
// provers latch on the first wrong predefined-round challenge.
FraudEstimate mafia_simulate(const ProtocolConfig& cfg,
                             const MonteCarloOptions& opts);

// Monte Carlo estimate of the distance-fraud success probability: per trial
// the (dishonest, far) prover enumerates the instance's prover function,
// commits to the most likely response string, and wins when the verifier's
// challenges land in its pre-image. ResourceError when n exceeds the
// prover-function enumeration limit.
FraudEstimate distance_simulate(const ProtocolConfig& cfg,
                                const MonteCarloOptions& opts);

// Success probability of the optimal committed response string for one
// concrete instance (the per-trial quantity behind distance_simulate).
double distance_success_probability(const ProtocolConfig& cfg,
                                    const Material& material);

// Round whose harvested response the graph-protocol adversary should play in
// round i when the first mismatch happened in round t: argmax over j of
// theorem1_prob(i, j, t), ties toward the smaller j.
std::size_t best_j_rule(std::size_t n, std::size_t i, std::size_t t);

// Hard cap for the exhaustive oracles below (cost grows like 2^{6n}).
inline constexpr std::size_t kOracleMaxRounds = 3;
inline constexpr std::size_t kMarginalOracleMaxRounds = 4;

// Exhaustively enumerated value of theorem1_prob(i, j, t): counts matching
// responses over every edge labeling, every verifier challenge string and
// every pre-ask string whose first mismatch is at round t, with the node
// values marginalized analytically. Exact dyadic rational returned as double.
double theorem1_marginal_oracle(std::size_t n, std::size_t i, std::size_t j,
                                std::size_t t);

// Brute-force recomputation of the graph mafia-fraud value: every per-round
// match probability is enumerated exhaustively (as in
// theorem1_marginal_oracle), the best source round is taken per (i, t), and
// the per-round optima are composed round-by-round with the guessed-all-
// challenges term added. Exact integer arithmetic throughout; must agree
// with GraphAnalytics::mafia to double precision.
double graph_mafia_exact(std::size_t n);

// Exact success probability of the pre-ask adversary playing the best_j_rule
// as a strategy in the full joint game (all rounds on one shared instance).
// The round-by-round composition above treats rounds as independent; this
// enumeration does not, and from n = 2 on it is strictly smaller. Kept as a
// diagnostic alongside graph_mafia_exact.
double graph_mafia_game_exact(std::size_t n);

// Exact expected distance-fraud success E[max_y Pr(f(c) = y)] by exhausting
// all instances (and, for KAP, weighting predefined-round patterns by p_d).
double distance_fraud_exact(const ProtocolConfig& cfg);

}  // namespace dblab
