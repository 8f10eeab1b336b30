#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dblab/bits.hpp"
#include "dblab/graph.hpp"
#include "dblab/prf.hpp"
#include "dblab/rng.hpp"

namespace dblab {

enum class Protocol { hkp, kap, atp, graph };

struct ProtocolConfig {
  Protocol kind = Protocol::hkp;
  std::size_t n = 0;
  // KAP: probability that a round uses a predefined challenge.
  double predefined_prob = 0.0;
  // ATP: n = alpha trees of depth `tree_depth`.
  std::size_t alpha = 0;
  std::size_t tree_depth = 0;
  // True only for configs made by atp3(): the linear-memory ATP variant is
  // catalogued separately even where it coincides structurally with atp(n).
  bool atp3_variant = false;

  static ProtocolConfig hkp(std::size_t n);
  static ProtocolConfig kap(std::size_t n, double pd);
  static ProtocolConfig atp(std::size_t n);   // single tree, depth n
  static ProtocolConfig atp3(std::size_t n);  // n/3 trees of depth 3
  static ProtocolConfig atp_split(std::size_t alpha, std::size_t depth);
  static ProtocolConfig graph(std::size_t n);

  bool is_atp3() const { return kind == Protocol::atp && atp3_variant; }
  // Short identifier used in CSV/JSON output: hkp, kap, atp, atp3, graph.
  std::string label() const;
  void validate() const;  // throws ConfigError
};

// Register/tree/graph bits shared by prover and verifier after the slow
// phase, shaped per protocol.
struct HkpMaterial {
  BitString r0, r1;  // R^0 = H_1..H_n, R^1 = H_{n+1}..H_2n
};

struct KapMaterial {
  BitString r0, r1;
  // t.bit(i) == 0 means round i uses the predefined challenge d.bit(i).
  BitString t, d;
};

// Complete binary decision tree in heap layout: index 0 is the unlabeled
// root, children of i are 2i+1 (challenge 0) and 2i+2 (challenge 1). Nodes
// 1..2^{depth+1}-2 carry response bits in breadth-first order.
struct DecisionTree {
  std::size_t depth = 0;
  std::vector<std::uint8_t> value;
};

struct AtpMaterial {
  BitString auth;  // slow-phase commitment bits, compared verbatim
  std::vector<DecisionTree> trees;
};

struct GraphMaterial {
  LabeledGraph graph;
};

using Material =
    std::variant<HkpMaterial, KapMaterial, AtpMaterial, GraphMaterial>;

// Number of slow-phase commitment bits exchanged in ATP sessions.
inline constexpr std::size_t kAtpAuthBits = 8;

// Derives the session material from the PRF stream, as both sides would.
// For KAP the predefined-round indicator is drawn per round from rng with
// P(predefined) = predefined_prob, so the parameter is exact and sweepable;
// the corresponding PRF register bits are discarded.
Material make_material(const ProtocolConfig& cfg, const Prf& prf,
                       std::uint64_t nonce_p, std::uint64_t nonce_v, Rng& rng);

// Same shapes with all bits drawn straight from rng (fraud games; the PRF
// stream is uniform, so the distributions coincide).
Material random_material(const ProtocolConfig& cfg, Rng& rng);

// Correct response sequence for a full challenge string, replayed statelessly
// from the material (the verifier's expectation).
std::vector<std::uint8_t> prover_responses(const ProtocolConfig& cfg,
                                           const Material& material,
                                           const BitString& challenges);

// Honest prover answering a pre-ask challenge sequence. KAP provers latch on
// the first wrong challenge in a predefined round and answer randomly from
// then on; detection_round is that 1-based round when it fires.
struct PreaskHarvest {
  BitString responses;
  std::optional<std::size_t> detection_round;
};
PreaskHarvest preask_prover(const ProtocolConfig& cfg, const Material& material,
                            const BitString& challenges, Rng& rng);

// Challenge the verifier sends in `round` (0-based): the predefined bit for
// KAP predefined rounds, a fresh coin otherwise.
std::uint8_t verifier_challenge(const ProtocolConfig& cfg,
                                const Material& material, std::size_t round,
                                Rng& rng);

struct RoundRecord {
  std::uint8_t challenge = 0;
  std::uint8_t response = 0;
  bool relayed = false;       // round-trip exceeded the bound (relay model)
  bool tag_detected = false;  // KAP detection latch state at this round
};

struct Transcript {
  std::vector<RoundRecord> rounds;
  bool accept = false;
};

struct SessionResult {
  Material material;
  Transcript transcript;
};

// Runs a full honest session (slow phase + n fast rounds) and verifies it.
SessionResult run_honest_session(const ProtocolConfig& cfg, const Prf& prf,
                                 Rng& rng);

// Accepts iff every response matches the correct response for the realized
// challenge sequence and no round is flagged relayed. KAP transcripts must
// also carry the predefined challenge on predefined rounds. Throws
// LayoutError when the transcript does not have exactly n rounds.
bool verify(const ProtocolConfig& cfg, const Material& material,
            const Transcript& transcript);

// Memory footprint in bits of the fast-phase material, as tabulated:
// HKP 2n, KAP 4n, GRAPH 4n, ATP alpha*(2^{depth+1}-2).
std::uint64_t memory_cost_bits(const ProtocolConfig& cfg);

// Explicit table of the prover function f: {0,1}^n -> {0,1}^n. Challenge
// strings are packed into integers with round i (1-based) at bit i-1; outputs
// use the same packing.
struct ProverFunction {
  std::size_t n = 0;
  std::vector<std::uint32_t> table;

  std::uint32_t operator()(std::uint32_t challenges) const {
    return table[challenges];
  }
};

inline constexpr std::size_t kProverFunctionMaxRounds = 16;

// Enumerates all 2^n challenge strings; ResourceError past
// kProverFunctionMaxRounds.
ProverFunction prover_function(const ProtocolConfig& cfg,
                               const Material& material);

}  // namespace dblab
