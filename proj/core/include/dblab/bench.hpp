#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dblab/adversary.hpp"

namespace dblab {

// Protocols as selectable on the command line; atp is the single-tree
// configuration, atp3 the linear-memory split into depth-3 trees.
enum class ProtoName { hkp, kap, atp, atp3, graph };

std::string proto_label(ProtoName p);

// Parses "all" or a comma-separated subset of hkp,kap,atp,atp3,graph.
std::vector<ProtoName> parse_protocols(const std::string& text);
// Parses "all", "mafia", "distance" or a comma list.
std::vector<Fraud> parse_frauds(const std::string& text);
// Parses "8", "1..8" or "1,2,4" into an ascending-as-written list.
std::vector<std::size_t> parse_rounds(const std::string& text);
std::vector<double> parse_doubles(const std::string& text);

// Builds the protocol config at round count n, or nullopt when the protocol
// cannot run there (ATP3 needs 3 | n); pd only applies to KAP.
std::optional<ProtocolConfig> instantiate(ProtoName p, std::size_t n,
                                          double pd);

struct SweepSpec {
  std::vector<ProtoName> protocols;
  std::vector<Fraud> frauds;
  std::vector<std::size_t> rounds;
  std::vector<double> pds{0.5};
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct AnalyzeRow {
  std::string protocol;
  std::string fraud;
  std::size_t n = 0;
  std::optional<double> pd;
  double value = 0.0;
  Exactness exactness = Exactness::exact;
};

// One closed-form row per (protocol, fraud, n[, pd for KAP]); rows for
// (protocol, n) combinations that cannot run are skipped.
std::vector<AnalyzeRow> run_analyze(const SweepSpec& spec);

struct SimulateRow {
  std::string protocol;
  std::string fraud;
  std::size_t n = 0;
  std::optional<double> pd;
  double analytic = 0.0;
  Exactness exactness = Exactness::exact;
  double mc_mean = 0.0;
  double mc_stderr = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo sweep. Each row runs on its own trial stream derived from the
// sweep seed and the row's identity, so output is reproducible and does not
// depend on row order or thread count.
std::vector<SimulateRow> run_simulate(const SweepSpec& spec);

struct TradeoffSpec {
  std::vector<ProtoName> protocols{ProtoName::hkp, ProtoName::kap,
                                   ProtoName::atp3, ProtoName::graph};
  std::vector<double> mafia_targets;
  std::vector<double> distance_targets;
  std::size_t n_max = 64;
  double pd = 0.5;  // KAP operating point
};

struct TradeoffCell {
  double mafia_target = 0.0;
  double distance_target = 0.0;
  bool achievable = false;
  std::string winner = "none";
  std::size_t rounds = 0;
  std::uint64_t memory_bits = 0;
  double mafia_value = 0.0;
  double distance_value = 0.0;
  Exactness mafia_exactness = Exactness::exact;
  Exactness distance_exactness = Exactness::exact;
};

// For every target pair: the protocol reaching both targets with the fewest
// rounds; ties break by memory, then by the fixed protocol order above (so
// the winner does not depend on the order protocols were listed in). Upper
// bounds count as reaching a target when the bound itself does.
std::vector<TradeoffCell> run_tradeoff(const TradeoffSpec& spec);

// count log-spaced values from lo up to hi inclusive.
std::vector<double> log_spaced_targets(double lo, double hi,
                                       std::size_t count);

struct OracleRow {
  std::string protocol;
  std::string fraud;
  std::size_t n = 0;
  std::optional<double> pd;
  double oracle = 0.0;
  double analytic = 0.0;
  Exactness exactness = Exactness::exact;
  double abs_delta = 0.0;
  bool pass = false;
};

inline constexpr double kOracleExactTolerance = 1e-12;
// The ATP3 per-tree constant is published to four digits only.
inline constexpr double kAtp3ConstantTolerance = 1e-3;

// Cross-checks every exhaustive oracle against its closed form for
// n = 1..n_max (capped at 3): exact forms must agree to 1e-12, upper bounds
// must dominate the enumerated value.
std::vector<OracleRow> run_oracle(std::size_t n_max, double pd);

// CSV rendering; the first line is "# generated: <UTC time>" unless
// with_timestamp is false. Field order matches the struct declarations.
std::string to_csv(const std::vector<AnalyzeRow>& rows, bool with_timestamp);
std::string to_csv(const std::vector<SimulateRow>& rows, bool with_timestamp);
std::string to_csv(const std::vector<TradeoffCell>& rows, bool with_timestamp);
std::string to_csv(const std::vector<OracleRow>& rows, bool with_timestamp);

// JSON rendering (array of objects, one per row); never timestamped.
std::string to_json(const std::vector<AnalyzeRow>& rows);
std::string to_json(const std::vector<SimulateRow>& rows);
std::string to_json(const std::vector<TradeoffCell>& rows);
std::string to_json(const std::vector<OracleRow>& rows);

}  // namespace dblab
