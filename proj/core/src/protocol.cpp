#include "dblab/protocol.hpp"

#include <cmath>

#include "dblab/errors.hpp"

namespace dblab {

namespace {

BitString random_bits(Rng& rng, std::size_t len) {
  BitString out;
  for (std::size_t i = 0; i < len; ++i) out.append(rng.next_bit());
  return out;
}

// Predefined-round indicator register: bit 0 means predefined.
BitString draw_kap_t(std::size_t n, double pd, Rng& rng) {
  BitString t;
  for (std::size_t i = 0; i < n; ++i)
    t.append(rng.next_unit() < pd ? 0u : 1u);
  return t;
}

std::size_t tree_node_count(std::size_t depth) {
  return (std::size_t{1} << (depth + 1)) - 1;
}

DecisionTree build_tree(std::size_t depth, const BitString& labels,
                        std::size_t offset) {
  DecisionTree tree;
  tree.depth = depth;
  tree.value.assign(tree_node_count(depth), 0u);
  for (std::size_t i = 1; i < tree.value.size(); ++i)
    tree.value[i] = labels.bit(offset + i - 1);
  return tree;
}

Material material_from_bits(const ProtocolConfig& cfg, const BitString& h,
                            Rng& rng) {
  const std::size_t n = cfg.n;
  switch (cfg.kind) {
    case Protocol::hkp: {
      auto regs = split_registers(h, {n, n});
      return HkpMaterial{std::move(regs[0]), std::move(regs[1])};
    }
    case Protocol::kap: {
      auto regs = split_registers(h, {n, n, n, n});
      KapMaterial m{std::move(regs[0]), std::move(regs[1]),
                    draw_kap_t(n, cfg.predefined_prob, rng),
                    std::move(regs[3])};
      return m;
    }
    case Protocol::atp: {
      AtpMaterial m;
      m.auth = h.slice(0, kAtpAuthBits);
      const std::size_t per_tree = tree_node_count(cfg.tree_depth) - 1;
      std::size_t offset = kAtpAuthBits;
      for (std::size_t i = 0; i < cfg.alpha; ++i) {
        m.trees.push_back(build_tree(cfg.tree_depth, h, offset));
        offset += per_tree;
      }
      return m;
    }
    case Protocol::graph:
      return GraphMaterial{label_graph(build_topology(n), h)};
  }
  throw ConfigError("material_from_bits: unknown protocol");
}

std::size_t material_bits(const ProtocolConfig& cfg) {
  switch (cfg.kind) {
    case Protocol::hkp:
      return 2 * cfg.n;
    case Protocol::kap:
      return 4 * cfg.n;
    case Protocol::atp:
      if (cfg.tree_depth > 24)
        throw ResourceError(
            "material_bits: ATP trees with depth above 24 are not materializable");
      return kAtpAuthBits + cfg.alpha * (tree_node_count(cfg.tree_depth) - 1);
    case Protocol::graph:
      return 4 * cfg.n;
  }
  throw ConfigError("material_bits: unknown protocol");
}

}  // namespace

ProtocolConfig ProtocolConfig::hkp(std::size_t n) {
  ProtocolConfig c{Protocol::hkp, n};
  c.validate();
  return c;
}

ProtocolConfig ProtocolConfig::kap(std::size_t n, double pd) {
  ProtocolConfig c{Protocol::kap, n, pd};
  c.validate();
  return c;
}

ProtocolConfig ProtocolConfig::atp(std::size_t n) {
  ProtocolConfig c{Protocol::atp, n, 0.0, 1, n};
  c.validate();
  return c;
}

ProtocolConfig ProtocolConfig::atp3(std::size_t n) {
  if (n == 0 || n % 3 != 0)
    throw ConfigError("atp3: round count must be a positive multiple of 3");
  ProtocolConfig c{Protocol::atp, n, 0.0, n / 3, 3, true};
  c.validate();
  return c;
}

ProtocolConfig ProtocolConfig::atp_split(std::size_t alpha, std::size_t depth) {
  ProtocolConfig c{Protocol::atp, alpha * depth, 0.0, alpha, depth};
  c.validate();
  return c;
}

ProtocolConfig ProtocolConfig::graph(std::size_t n) {
  ProtocolConfig c{Protocol::graph, n};
  c.validate();
  return c;
}

std::string ProtocolConfig::label() const {
  switch (kind) {
    case Protocol::hkp:
      return "hkp";
    case Protocol::kap:
      return "kap";
    case Protocol::atp:
      return is_atp3() ? "atp3" : "atp";
    case Protocol::graph:
      return "graph";
  }
  return "?";
}

void ProtocolConfig::validate() const {
  if (n == 0) throw ConfigError("protocol config: n must be positive");
  if (kind == Protocol::kap &&
      !(predefined_prob >= 0.0 && predefined_prob <= 1.0))
    throw ConfigError("protocol config: p_d must lie in [0,1]");
  if (kind == Protocol::atp) {
    if (alpha == 0 || tree_depth == 0 || alpha * tree_depth != n)
      throw ConfigError("protocol config: ATP requires n = alpha * depth");
  }
}

Material make_material(const ProtocolConfig& cfg, const Prf& prf,
                       std::uint64_t nonce_p, std::uint64_t nonce_v,
                       Rng& rng) {
  cfg.validate();
  return material_from_bits(
      cfg, prf.expand(nonce_p, nonce_v, material_bits(cfg)), rng);
}

Material random_material(const ProtocolConfig& cfg, Rng& rng) {
  cfg.validate();
  return material_from_bits(cfg, random_bits(rng, material_bits(cfg)), rng);
}

namespace {

// Stateless single-pass response machine shared by the honest session, the
// verifier recomputation and the pre-ask prover.
struct ResponseMachine {
  const ProtocolConfig& cfg;
  const Material& material;
  std::size_t round = 0;     // 0-based
  std::size_t position = 0;  // graph node / tree node index

  std::uint8_t respond(std::uint8_t challenge) {
    std::uint8_t r = 0;
    switch (cfg.kind) {
      case Protocol::hkp: {
        const auto& m = std::get<HkpMaterial>(material);
        r = challenge ? m.r1.bit(round) : m.r0.bit(round);
        break;
      }
      case Protocol::kap: {
        const auto& m = std::get<KapMaterial>(material);
        if (m.t.bit(round) == 1) {
          r = challenge ? m.r1.bit(round) : m.r0.bit(round);
        } else {
          // Predefined round; the verifier only ever sends d here, and the
          // expected response is always drawn from R^0.
          r = m.r0.bit(round);
        }
        break;
      }
      case Protocol::atp: {
        const auto& m = std::get<AtpMaterial>(material);
        const std::size_t tree = round / cfg.tree_depth;
        const std::size_t depth = round % cfg.tree_depth;
        if (depth == 0) position = 0;
        position = 2 * position + 1 + challenge;
        r = m.trees[tree].value[position];
        break;
      }
      case Protocol::graph: {
        const auto& m = std::get<GraphMaterial>(material);
        position = walk_step(m.graph, position, challenge);
        r = m.graph.node_value[position];
        break;
      }
    }
    ++round;
    return r;
  }
};

}  // namespace

std::vector<std::uint8_t> prover_responses(const ProtocolConfig& cfg,
                                           const Material& material,
                                           const BitString& challenges) {
  if (challenges.size() != cfg.n)
    throw LayoutError("prover_responses: need one challenge per round");
  ResponseMachine machine{cfg, material};
  std::vector<std::uint8_t> out(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i)
    out[i] = machine.respond(challenges.bit(i));
  return out;
}

PreaskHarvest preask_prover(const ProtocolConfig& cfg, const Material& material,
                            const BitString& challenges, Rng& rng) {
  if (challenges.size() != cfg.n)
    throw LayoutError("preask_prover: need one challenge per round");
  PreaskHarvest h;
  ResponseMachine machine{cfg, material};
  const KapMaterial* kap = std::get_if<KapMaterial>(&material);
  bool latched = false;
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const std::uint8_t c = challenges.bit(i);
    if (kap && !latched && kap->t.bit(i) == 0 && c != kap->d.bit(i)) {
      latched = true;
      h.detection_round = i + 1;
    }
    const std::uint8_t honest = machine.respond(c);
    h.responses.append(latched ? rng.next_bit() : honest);
  }
  return h;
}

std::uint8_t verifier_challenge(const ProtocolConfig& cfg,
                                const Material& material, std::size_t round,
                                Rng& rng) {
  if (const KapMaterial* kap = std::get_if<KapMaterial>(&material)) {
    if (kap->t.bit(round) == 0) return kap->d.bit(round);
  }
  return rng.next_bit();
}

SessionResult run_honest_session(const ProtocolConfig& cfg, const Prf& prf,
                                 Rng& rng) {
  cfg.validate();
  const std::uint64_t nonce_p = rng.next_u64();
  const std::uint64_t nonce_v = rng.next_u64();
  SessionResult session{make_material(cfg, prf, nonce_p, nonce_v, rng), {}};

  // Slow-phase commitment: the ATP prover sends the auth bits, the verifier
  // compares against its own expansion (identical by construction here).
  bool slow_phase_ok = true;
  if (const AtpMaterial* atp = std::get_if<AtpMaterial>(&session.material)) {
    const BitString received = atp->auth;
    slow_phase_ok = (received == atp->auth);
  }

  ResponseMachine prover{cfg, session.material};
  for (std::size_t i = 0; i < cfg.n; ++i) {
    RoundRecord rec;
    rec.challenge = verifier_challenge(cfg, session.material, i, rng);
    rec.response = prover.respond(rec.challenge);
    session.transcript.rounds.push_back(rec);
  }
  session.transcript.accept =
      slow_phase_ok && verify(cfg, session.material, session.transcript);
  return session;
}

bool verify(const ProtocolConfig& cfg, const Material& material,
            const Transcript& transcript) {
  if (transcript.rounds.size() != cfg.n)
    throw LayoutError("verify: transcript must have exactly n rounds");
  BitString challenges;
  for (const auto& rec : transcript.rounds) challenges.append(rec.challenge);
  const auto expected = prover_responses(cfg, material, challenges);
  const KapMaterial* kap = std::get_if<KapMaterial>(&material);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const auto& rec = transcript.rounds[i];
    if (rec.relayed) return false;
    if (rec.response != expected[i]) return false;
    if (kap && kap->t.bit(i) == 0 && rec.challenge != kap->d.bit(i))
      return false;
  }
  return true;
}

std::uint64_t memory_cost_bits(const ProtocolConfig& cfg) {
  cfg.validate();
  switch (cfg.kind) {
    case Protocol::hkp:
      return 2 * static_cast<std::uint64_t>(cfg.n);
    case Protocol::kap:
      return 4 * static_cast<std::uint64_t>(cfg.n);
    case Protocol::atp: {
      if (cfg.tree_depth > 61)
        throw ResourceError("memory_cost_bits: tree size exceeds 64 bits");
      const std::uint64_t per_tree =
          (std::uint64_t{1} << (cfg.tree_depth + 1)) - 2;
      return static_cast<std::uint64_t>(cfg.alpha) * per_tree;
    }
    case Protocol::graph:
      return 4 * static_cast<std::uint64_t>(cfg.n);
  }
  throw ConfigError("memory_cost_bits: unknown protocol");
}

ProverFunction prover_function(const ProtocolConfig& cfg,
                               const Material& material) {
  cfg.validate();
  if (cfg.n > kProverFunctionMaxRounds)
    throw ResourceError("prover_function: table of 2^n entries needs n <= 16");
  ProverFunction f;
  f.n = cfg.n;
  f.table.resize(std::size_t{1} << cfg.n);
  for (std::uint32_t c = 0; c < f.table.size(); ++c) {
    BitString challenges;
    for (std::size_t i = 0; i < cfg.n; ++i)
      challenges.append(static_cast<std::uint8_t>((c >> i) & 1u));
    const auto resp = prover_responses(cfg, material, challenges);
    std::uint32_t packed = 0;
    for (std::size_t i = 0; i < cfg.n; ++i)
      packed |= static_cast<std::uint32_t>(resp[i]) << i;
    f.table[c] = packed;
  }
  return f;
}

}  // namespace dblab
