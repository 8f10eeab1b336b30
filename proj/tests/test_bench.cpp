#include <cmath>

#include "doctest.h"
#include "json.hpp"

#include "dblab/bench.hpp"
#include "dblab/errors.hpp"

using namespace dblab;

namespace {

SweepSpec basic_spec(const std::string& protocols, const std::string& frauds,
                     const std::string& rounds) {
  SweepSpec spec;
  spec.protocols = parse_protocols(protocols);
  spec.frauds = parse_frauds(frauds);
  spec.rounds = parse_rounds(rounds);
  return spec;
}

}  // namespace

TEST_CASE("argument parsing") {
  CHECK(parse_protocols("all").size() == 5);
  CHECK(parse_protocols("hkp,graph").size() == 2);
  CHECK_THROWS_AS(parse_protocols("hpk"), ConfigError);
  CHECK(parse_frauds("mafia").size() == 1);
  CHECK(parse_frauds("all").size() == 2);
  CHECK_THROWS_AS(parse_frauds("terrorist"), ConfigError);
  CHECK(parse_rounds("8") == std::vector<std::size_t>{8});
  CHECK(parse_rounds("1..4") == std::vector<std::size_t>{1, 2, 3, 4});
  CHECK(parse_rounds("1,2,8") == std::vector<std::size_t>{1, 2, 8});
  CHECK_THROWS_AS(parse_rounds(""), ConfigError);
  CHECK_THROWS_AS(parse_rounds("4..2"), ConfigError);
  CHECK_THROWS_AS(parse_rounds("0"), ConfigError);
  CHECK(parse_doubles("0.25,0.5").size() == 2);
  CHECK_THROWS_AS(parse_doubles("x"), ConfigError);
}

TEST_CASE("analyze sweep") {
  SUBCASE("HKP mafia over n = 1..4") {
    const auto rows = run_analyze(basic_spec("hkp", "mafia", "1..4"));
    REQUIRE(rows.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(rows[k].n == k + 1);
      CHECK(rows[k].value == std::pow(0.75, static_cast<double>(k + 1)));
      CHECK(rows[k].exactness == Exactness::exact);
      CHECK_FALSE(rows[k].pd.has_value());
    }
  }
  SUBCASE("all protocols at n=8 yield 8 rows, ATP3 skipped") {
    const auto rows = run_analyze(basic_spec("all", "all", "8"));
    CHECK(rows.size() == 8);
    for (const auto& row : rows) {
      CHECK(row.value >= 0.0);
      CHECK(row.value <= 1.0);
      CHECK(row.protocol != "atp3");
    }
  }
  SUBCASE("ATP3 appears where 3 divides n") {
    const auto rows = run_analyze(basic_spec("atp3", "mafia", "1..9"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].n == 3);
    CHECK(rows[2].n == 9);
  }
  SUBCASE("KAP sweeps the p_d axis") {
    SweepSpec spec = basic_spec("kap", "mafia", "4");
    spec.pds = {0.25, 0.75};
    const auto rows = run_analyze(spec);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].pd == 0.25);
    CHECK(rows[1].pd == 0.75);
  }
  SUBCASE("empty selections are usage errors") {
    SweepSpec spec = basic_spec("hkp", "mafia", "4");
    spec.rounds.clear();
    CHECK_THROWS_AS(run_analyze(spec), ConfigError);
    CHECK_THROWS_AS(run_analyze(basic_spec("", "mafia", "4")), ConfigError);
  }
}

TEST_CASE("simulate sweep") {
  SweepSpec spec = basic_spec("hkp,graph", "mafia", "1,4");
  spec.trials = 20000;
  spec.seed = 7;
  const auto rows = run_simulate(spec);
  REQUIRE(rows.size() == 4);
  SUBCASE("estimates look sane") {
    for (const auto& row : rows) {
      CHECK(row.mc_mean >= 0.0);
      CHECK(row.mc_mean <= 1.0);
      CHECK(row.trials == 20000);
      CHECK(row.seed == 7);
      if (row.mc_mean > 0.0 && row.mc_mean < 1.0) CHECK(row.mc_stderr > 0.0);
    }
  }
  SUBCASE("reruns reproduce the numbers exactly") {
    const auto again = run_simulate(spec);
    REQUIRE(again.size() == rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      CHECK(again[k].mc_mean == rows[k].mc_mean);
      CHECK(again[k].mc_stderr == rows[k].mc_stderr);
    }
  }
  SUBCASE("rows are keyed by content, not position") {
    SweepSpec reordered = spec;
    reordered.protocols = parse_protocols("graph,hkp");
    const auto swapped = run_simulate(reordered);
    REQUIRE(swapped.size() == 4);
    // hkp rows come last now but carry the same estimates.
    CHECK(swapped[2].protocol == "hkp");
    CHECK(swapped[2].mc_mean == rows[0].mc_mean);
    CHECK(swapped[3].mc_mean == rows[1].mc_mean);
  }
}

TEST_CASE("tradeoff map") {
  SUBCASE("loose targets are won by the cheapest protocol at n=1") {
    TradeoffSpec spec;
    spec.mafia_targets = {0.8};
    spec.distance_targets = {0.9};
    spec.n_max = 4;
    const auto cells = run_tradeoff(spec);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].achievable);
    CHECK(cells[0].winner == "hkp");
    CHECK(cells[0].rounds == 1);
    CHECK(cells[0].memory_bits == 2);
  }
  SUBCASE("unreachable targets are marked") {
    TradeoffSpec spec;
    spec.mafia_targets = {1e-9};
    spec.distance_targets = {1e-9};
    spec.n_max = 4;
    const auto cells = run_tradeoff(spec);
    REQUIRE(cells.size() == 1);
    CHECK_FALSE(cells[0].achievable);
    CHECK(cells[0].winner == "none");
  }
  SUBCASE("tightening a target never reduces the round count") {
    TradeoffSpec spec;
    spec.mafia_targets = log_spaced_targets(1e-6, 0.5, 6);
    spec.distance_targets = {0.4};
    spec.n_max = 32;
    const auto cells = run_tradeoff(spec);
    REQUIRE(cells.size() == 6);
    for (std::size_t k = 1; k < cells.size(); ++k) {
      if (!cells[k - 1].achievable) continue;
      REQUIRE(cells[k].achievable);
      CHECK(cells[k - 1].rounds >= cells[k].rounds);  // targets grow with k
    }
  }
  SUBCASE("winners do not depend on the protocol list order") {
    TradeoffSpec spec;
    spec.mafia_targets = log_spaced_targets(1e-4, 0.5, 5);
    spec.distance_targets = log_spaced_targets(1e-4, 0.5, 5);
    spec.n_max = 24;
    const auto cells = run_tradeoff(spec);
    TradeoffSpec reversed = spec;
    reversed.protocols = {ProtoName::graph, ProtoName::atp3, ProtoName::kap,
                          ProtoName::hkp};
    const auto cells2 = run_tradeoff(reversed);
    REQUIRE(cells.size() == cells2.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
      CHECK(cells[k].winner == cells2[k].winner);
      CHECK(cells[k].rounds == cells2[k].rounds);
    }
  }
  SUBCASE("target validation") {
    TradeoffSpec spec;
    spec.mafia_targets = {0.5};
    spec.distance_targets = {1.5};
    CHECK_THROWS_AS(run_tradeoff(spec), ConfigError);
  }
}

TEST_CASE("log-spaced targets") {
  const auto ts = log_spaced_targets(1e-4, 0.1, 4);
  REQUIRE(ts.size() == 4);
  CHECK(ts.front() == 1e-4);
  CHECK(ts.back() == 0.1);
  for (std::size_t k = 1; k < ts.size(); ++k) CHECK(ts[k] > ts[k - 1]);
  CHECK_THROWS_AS(log_spaced_targets(0.0, 0.5, 3), ConfigError);
}

TEST_CASE("oracle report passes everywhere") {
  const auto rows = run_oracle(3, 0.5);
  CHECK(rows.size() == 16);
  for (const auto& row : rows) {
    INFO(row.protocol, " ", row.fraud, " n=", row.n);
    CHECK(row.pass);
  }
  CHECK_THROWS_AS(run_oracle(4, 0.5), ResourceError);
  CHECK_THROWS_AS(run_oracle(0, 0.5), ConfigError);
}

TEST_CASE("CSV rendering") {
  SweepSpec spec = basic_spec("hkp", "mafia", "1..2");
  spec.trials = 1000;
  const auto rows = run_simulate(spec);
  SUBCASE("bytes are stable across renders") {
    CHECK(to_csv(rows, false) == to_csv(rows, false));
  }
  SUBCASE("header timestamp is optional") {
    const std::string with = to_csv(rows, true);
    const std::string without = to_csv(rows, false);
    CHECK(with.substr(0, 12) == "# generated:");
    CHECK(without.substr(0, 8) == "protocol");
    CHECK(without ==
          "protocol,fraud,n,param,analytic,exactness,mc_mean,mc_stderr,"
          "trials,seed\n" +
              without.substr(without.find('\n') + 1));
  }
  SUBCASE("one line per row plus header") {
    const std::string text = to_csv(rows, false);
    std::size_t lines = 0;
    for (char c : text) lines += (c == '\n');
    CHECK(lines == rows.size() + 1);
  }
}

TEST_CASE("JSON rendering round-trips through a parser") {
  SweepSpec spec = basic_spec("kap", "all", "2");
  spec.pds = {0.5};
  spec.trials = 1000;
  const auto sim = run_simulate(spec);
  const auto parsed = nlohmann::json::parse(to_json(sim));
  REQUIRE(parsed.is_array());
  REQUIRE(parsed.size() == sim.size());
  CHECK(parsed[0]["protocol"] == "kap");
  CHECK(parsed[0]["param"] == 0.5);
  CHECK(parsed[0].contains("mc_stderr"));

  const auto cells = run_tradeoff([] {
    TradeoffSpec s;
    s.mafia_targets = {0.5};
    s.distance_targets = {0.5};
    s.n_max = 8;
    return s;
  }());
  const auto tj = nlohmann::json::parse(to_json(cells));
  REQUIRE(tj.is_array());
  CHECK(tj[0].contains("winner"));

  const auto oj = nlohmann::json::parse(to_json(run_oracle(1, 0.5)));
  CHECK(oj[0]["pass"].is_boolean());
}
