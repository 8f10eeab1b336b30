#include <cmath>

#include "doctest.h"

#include "dblab/errors.hpp"
#include "dblab/protocol.hpp"

using namespace dblab;

namespace {

BitString random_bits(Rng& rng, std::size_t len) {
  BitString out;
  for (std::size_t i = 0; i < len; ++i) out.append(rng.next_bit());
  return out;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(ProtocolConfig::hkp(0), ConfigError);
  CHECK_THROWS_AS(ProtocolConfig::kap(4, -0.1), ConfigError);
  CHECK_THROWS_AS(ProtocolConfig::kap(4, 1.5), ConfigError);
  CHECK_THROWS_AS(ProtocolConfig::atp3(8), ConfigError);
  CHECK_NOTHROW(ProtocolConfig::atp3(9));
  CHECK_THROWS_AS(ProtocolConfig::atp_split(2, 0), ConfigError);
  CHECK(ProtocolConfig::atp3(6).label() == "atp3");
  CHECK(ProtocolConfig::atp(6).label() == "atp");
  // Structurally atp(3) and atp3(3) coincide; the label keeps them apart.
  CHECK(ProtocolConfig::atp(3).label() == "atp");
  CHECK(ProtocolConfig::atp3(3).label() == "atp3");
}

TEST_CASE("memory cost reproduces the comparison table") {
  CHECK(memory_cost_bits(ProtocolConfig::graph(8)) == 32);
  CHECK(memory_cost_bits(ProtocolConfig::atp(3)) == 14);
  CHECK(memory_cost_bits(ProtocolConfig::atp3(6)) == 28);
  for (std::size_t n : {3, 6, 9, 12}) {
    CHECK(memory_cost_bits(ProtocolConfig::hkp(n)) == 2 * n);
    CHECK(memory_cost_bits(ProtocolConfig::kap(n, 0.5)) == 4 * n);
    CHECK(memory_cost_bits(ProtocolConfig::atp(n)) ==
          (std::uint64_t{1} << (n + 1)) - 2);
    CHECK(memory_cost_bits(ProtocolConfig::atp3(n)) == 14 * n / 3);
    CHECK(memory_cost_bits(ProtocolConfig::graph(n)) == 4 * n);
  }
}

TEST_CASE("honest sessions always accept") {
  const Prf prf{0xD1CEULL};
  const ProtocolConfig configs[] = {
      ProtocolConfig::hkp(8),       ProtocolConfig::kap(8, 0.5),
      ProtocolConfig::kap(8, 1.0),  ProtocolConfig::atp(6),
      ProtocolConfig::atp3(6),      ProtocolConfig::graph(4),
  };
  for (const auto& cfg : configs) {
    Rng rng(1000 + cfg.n);
    for (int s = 0; s < 200; ++s) {
      const SessionResult session = run_honest_session(cfg, prf, rng);
      REQUIRE(session.transcript.rounds.size() == cfg.n);
      CHECK(session.transcript.accept);
    }
  }
}

TEST_CASE("KAP with p_d = 1 sends only predefined challenges") {
  const Prf prf{42};
  Rng rng(7);
  const auto cfg = ProtocolConfig::kap(8, 1.0);
  const SessionResult session = run_honest_session(cfg, prf, rng);
  const auto& kap = std::get<KapMaterial>(session.material);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    CHECK(kap.t.bit(i) == 0);
    CHECK(session.transcript.rounds[i].challenge == kap.d.bit(i));
  }
  CHECK(session.transcript.accept);
}

TEST_CASE("KAP material draws the predefined indicator from p_d") {
  Rng rng(11);
  const auto zero = random_material(ProtocolConfig::kap(16, 0.0), rng);
  for (std::size_t i = 0; i < 16; ++i)
    CHECK(std::get<KapMaterial>(zero).t.bit(i) == 1);
  const auto one = random_material(ProtocolConfig::kap(16, 1.0), rng);
  for (std::size_t i = 0; i < 16; ++i)
    CHECK(std::get<KapMaterial>(one).t.bit(i) == 0);
}

TEST_CASE("graph transcripts replay through the head-node walk") {
  const Prf prf{0xBEEF};
  Rng rng(3);
  const auto cfg = ProtocolConfig::graph(6);
  const SessionResult session = run_honest_session(cfg, prf, rng);
  const auto& g = std::get<GraphMaterial>(session.material).graph;
  BitString prefix;
  for (const auto& rec : session.transcript.rounds) {
    prefix.append(rec.challenge);
    CHECK(head_node(g, prefix).value == rec.response);
  }
}

TEST_CASE("verification rejects tampering") {
  const Prf prf{0xF00D};
  const ProtocolConfig configs[] = {
      ProtocolConfig::hkp(6),  ProtocolConfig::kap(6, 0.5),
      ProtocolConfig::atp(6),  ProtocolConfig::atp3(6),
      ProtocolConfig::graph(6),
  };
  for (const auto& cfg : configs) {
    Rng rng(17);
    const SessionResult session = run_honest_session(cfg, prf, rng);
    REQUIRE(verify(cfg, session.material, session.transcript));
    for (std::size_t i = 0; i < cfg.n; ++i) {
      Transcript tampered = session.transcript;
      tampered.rounds[i].response ^= 1u;
      CHECK_FALSE(verify(cfg, session.material, tampered));
    }
    for (std::size_t i = 0; i < cfg.n; ++i) {
      Transcript relayed = session.transcript;
      relayed.rounds[i].relayed = true;
      CHECK_FALSE(verify(cfg, session.material, relayed));
    }
  }
}

TEST_CASE("verification demands exactly n rounds") {
  const Prf prf{1};
  Rng rng(9);
  const auto cfg = ProtocolConfig::hkp(4);
  SessionResult session = run_honest_session(cfg, prf, rng);
  session.transcript.rounds.pop_back();
  CHECK_THROWS_AS(verify(cfg, session.material, session.transcript),
                  LayoutError);
}

TEST_CASE("prover function: HKP picks the challenge register") {
  Rng rng(21);
  const auto cfg = ProtocolConfig::hkp(5);
  const Material material = random_material(cfg, rng);
  const auto& m = std::get<HkpMaterial>(material);
  const ProverFunction f = prover_function(cfg, material);
  REQUIRE(f.table.size() == 32);
  for (std::uint32_t c = 0; c < 32; ++c) {
    for (std::size_t i = 0; i < 5; ++i) {
      const std::uint8_t expect =
          ((c >> i) & 1u) ? m.r1.bit(i) : m.r0.bit(i);
      CHECK(((f(c) >> i) & 1u) == expect);
    }
  }
}

TEST_CASE("prover function: identical registers collapse to a constant") {
  const std::size_t n = 6;
  const auto cfg = ProtocolConfig::hkp(n);
  Rng rng(100);
  BitString reg = random_bits(rng, n);
  const Material material = HkpMaterial{reg, reg};
  const ProverFunction f = prover_function(cfg, material);
  // Constant map: the lone output has the full 2^n pre-image.
  for (std::uint32_t c = 0; c < (1u << n); ++c) CHECK(f(c) == f(0));
}

TEST_CASE("prover function: graph table equals head-node traces") {
  const auto cfg = ProtocolConfig::graph(2);
  const GraphTopology topo = build_topology(2);
  const LabeledGraph g = label_graph(topo, BitString::parse("0101 1100"));
  const ProverFunction f = prover_function(cfg, GraphMaterial{g});
  REQUIRE(f.table.size() == 4);
  for (std::uint32_t c = 0; c < 4; ++c) {
    BitString prefix;
    for (std::size_t i = 0; i < 2; ++i) {
      prefix.append(static_cast<std::uint8_t>((c >> i) & 1u));
      CHECK(((f(c) >> i) & 1u) == head_node(g, prefix).value);
    }
  }
}

TEST_CASE("prover function agrees with the running state machine") {
  Rng rng(555);
  for (std::size_t n = 1; n <= 10; ++n) {
    std::vector<ProtocolConfig> configs = {
        ProtocolConfig::hkp(n), ProtocolConfig::kap(n, 0.4),
        ProtocolConfig::atp(n), ProtocolConfig::graph(n)};
    if (n % 3 == 0) configs.push_back(ProtocolConfig::atp3(n));
    for (const auto& cfg : configs) {
      const Material material = random_material(cfg, rng);
      const ProverFunction f = prover_function(cfg, material);
      for (int trial = 0; trial < 5; ++trial) {
        const std::uint32_t c = static_cast<std::uint32_t>(
            rng.next_u64() & ((1u << n) - 1u));
        BitString challenges;
        for (std::size_t i = 0; i < n; ++i)
          challenges.append(static_cast<std::uint8_t>((c >> i) & 1u));
        const auto resp = prover_responses(cfg, material, challenges);
        for (std::size_t i = 0; i < n; ++i)
          CHECK(((f(c) >> i) & 1u) == resp[i]);
      }
    }
  }
}

TEST_CASE("prover function enumeration limit") {
  Rng rng(1);
  const auto cfg = ProtocolConfig::hkp(17);
  const Material material = random_material(cfg, rng);
  CHECK_THROWS_AS(prover_function(cfg, material), ResourceError);
}

TEST_CASE("pre-ask prover latches on wrong predefined challenges") {
  const std::size_t n = 8;
  const auto cfg = ProtocolConfig::kap(n, 1.0);  // every round predefined
  Rng rng(66);
  const Material material = random_material(cfg, rng);
  const auto& kap = std::get<KapMaterial>(material);

  // Honest pre-ask (the predefined challenges themselves): no detection.
  BitString honest;
  for (std::size_t i = 0; i < n; ++i) honest.append(kap.d.bit(i));
  const PreaskHarvest clean = preask_prover(cfg, material, honest, rng);
  CHECK_FALSE(clean.detection_round.has_value());
  CHECK(clean.responses.bits() == prover_responses(cfg, material, honest));

  // Wrong challenge in round 3: latch fires there.
  BitString probe = honest;
  probe.set_bit(2, probe.bit(2) ^ 1u);
  const PreaskHarvest tripped = preask_prover(cfg, material, probe, rng);
  REQUIRE(tripped.detection_round.has_value());
  CHECK(*tripped.detection_round == 3);
  // Rounds before the latch answer honestly.
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(tripped.responses.bit(i) == clean.responses.bit(i));
}

TEST_CASE("graph pre-ask responses before a mismatch are certain") {
  const auto cfg = ProtocolConfig::graph(8);
  Rng rng(88);
  for (int iter = 0; iter < 50; ++iter) {
    const Material material = random_material(cfg, rng);
    const BitString challenges = random_bits(rng, 8);
    BitString probe = challenges;
    const std::size_t flip = 2 + rng.next_index(6);
    for (std::size_t i = flip; i < 8; ++i) probe.set_bit(i, rng.next_bit());
    probe.set_bit(flip, challenges.bit(flip) ^ 1u);
    const PreaskHarvest harvest = preask_prover(cfg, material, probe, rng);
    const auto correct = prover_responses(cfg, material, challenges);
    for (std::size_t i = 0; i < flip; ++i)
      CHECK(harvest.responses.bit(i) == correct[i]);
  }
}
