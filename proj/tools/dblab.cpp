// Command-line front end for the distance-bounding laboratory: closed-form
// sweeps, Monte Carlo campaigns, exhaustive-oracle cross-checks and the
// round/memory trade-off map. Emits CSV (default) or JSON.
//
// Exit codes: 0 success, 2 usage error, 3 resource limit, 4 oracle mismatch.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "dblab/bench.hpp"
#include "dblab/errors.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;
constexpr int kExitOracleMismatch = 4;

struct OutputOptions {
  std::string format = "csv";
  std::string out_path;
  bool no_timestamp = false;
};

void add_output_options(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", out.out_path, "Write output to FILE (default: stdout)");
  cmd->add_flag("--no-header-timestamp", out.no_timestamp,
                "Omit the CSV timestamp header (byte-reproducible output)");
}

void write_output(const OutputOptions& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(opts.out_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + opts.out_path);
  file << text;
}

template <typename Rows>
void emit(const OutputOptions& opts, const Rows& rows) {
  if (opts.format == "json")
    write_output(opts, dblab::to_json(rows));
  else
    write_output(opts, dblab::to_csv(rows, !opts.no_timestamp));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dblab: distance-bounding protocol laboratory"};
  app.require_subcommand(1);

  // ---- analyze ----
  std::string an_protocols = "all", an_frauds = "all", an_rounds, an_pds = "0.5";
  OutputOptions an_out;
  CLI::App* analyze =
      app.add_subcommand("analyze", "Closed-form fraud probabilities");
  analyze->add_option("--protocols", an_protocols,
                      "Comma list of hkp,kap,atp,atp3,graph or 'all'")
      ->capture_default_str();
  analyze->add_option("--fraud", an_frauds, "mafia, distance or 'all'")
      ->capture_default_str();
  analyze->add_option("--n", an_rounds, "Round counts: '8', '1..8' or '1,2,4'")
      ->required();
  analyze->add_option("--pd", an_pds, "KAP predefined-challenge probabilities")
      ->capture_default_str();
  add_output_options(analyze, an_out);

  // ---- simulate ----
  std::string si_protocols = "all", si_frauds = "all", si_rounds,
              si_pds = "0.5";
  std::uint64_t si_trials = 100000, si_seed = 1;
  unsigned si_threads = 1;
  OutputOptions si_out;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo fraud estimates against the closed forms");
  simulate->add_option("--protocols", si_protocols,
                       "Comma list of hkp,kap,atp,atp3,graph or 'all'")
      ->capture_default_str();
  simulate->add_option("--fraud", si_frauds, "mafia, distance or 'all'")
      ->capture_default_str();
  simulate->add_option("--n", si_rounds, "Round counts: '8', '1..8' or '1,2,4'")
      ->required();
  simulate->add_option("--pd", si_pds, "KAP predefined-challenge probabilities")
      ->capture_default_str();
  simulate->add_option("--trials", si_trials, "Trials per estimate")
      ->capture_default_str();
  simulate->add_option("--seed", si_seed, "Base seed; reruns reproduce output")
      ->capture_default_str();
  simulate->add_option("--threads", si_threads,
                       "Worker threads (results are thread-count independent)")
      ->capture_default_str();
  add_output_options(simulate, si_out);

  // ---- tradeoff ----
  std::string to_protocols = "hkp,kap,atp3,graph";
  std::string to_mafia_targets, to_distance_targets;
  std::size_t to_grid = 10, to_n_max = 64;
  double to_grid_min = 1e-6, to_grid_max = 0.5, to_pd = 0.5;
  OutputOptions to_out;
  CLI::App* tradeoff = app.add_subcommand(
      "tradeoff",
      "Per target pair, the protocol reaching both fraud targets with the "
      "fewest rounds (ties by memory)");
  tradeoff->add_option("--protocols", to_protocols, "Protocols to rank")
      ->capture_default_str();
  tradeoff->add_option("--mafia-targets", to_mafia_targets,
                       "Comma list; overrides the log-spaced grid");
  tradeoff->add_option("--distance-targets", to_distance_targets,
                       "Comma list; overrides the log-spaced grid");
  tradeoff->add_option("--grid", to_grid, "Log-spaced grid size per axis")
      ->capture_default_str();
  tradeoff->add_option("--grid-min", to_grid_min, "Smallest grid target")
      ->capture_default_str();
  tradeoff->add_option("--grid-max", to_grid_max, "Largest grid target")
      ->capture_default_str();
  tradeoff->add_option("--n-max", to_n_max, "Largest round count considered")
      ->capture_default_str();
  tradeoff->add_option("--pd", to_pd, "KAP operating point")
      ->capture_default_str();
  add_output_options(tradeoff, to_out);

  // ---- oracle ----
  std::size_t or_n_max = 3;
  double or_pd = 0.5;
  OutputOptions or_out;
  CLI::App* oracle = app.add_subcommand(
      "oracle", "Exhaustive brute-force oracles vs closed forms (CI gate)");
  oracle->add_option("--n-max", or_n_max, "Enumerate n = 1..n_max (max 3)")
      ->capture_default_str();
  oracle->add_option("--pd", or_pd, "KAP operating point")
      ->capture_default_str();
  add_output_options(oracle, or_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*analyze) {
      dblab::SweepSpec spec;
      spec.protocols = dblab::parse_protocols(an_protocols);
      spec.frauds = dblab::parse_frauds(an_frauds);
      spec.rounds = dblab::parse_rounds(an_rounds);
      spec.pds = dblab::parse_doubles(an_pds);
      emit(an_out, dblab::run_analyze(spec));
    } else if (*simulate) {
      dblab::SweepSpec spec;
      spec.protocols = dblab::parse_protocols(si_protocols);
      spec.frauds = dblab::parse_frauds(si_frauds);
      spec.rounds = dblab::parse_rounds(si_rounds);
      spec.pds = dblab::parse_doubles(si_pds);
      spec.trials = si_trials;
      spec.seed = si_seed;
      spec.threads = si_threads;
      emit(si_out, dblab::run_simulate(spec));
    } else if (*tradeoff) {
      dblab::TradeoffSpec spec;
      spec.protocols = dblab::parse_protocols(to_protocols);
      spec.mafia_targets =
          to_mafia_targets.empty()
              ? dblab::log_spaced_targets(to_grid_min, to_grid_max, to_grid)
              : dblab::parse_doubles(to_mafia_targets);
      spec.distance_targets =
          to_distance_targets.empty()
              ? dblab::log_spaced_targets(to_grid_min, to_grid_max, to_grid)
              : dblab::parse_doubles(to_distance_targets);
      spec.n_max = to_n_max;
      spec.pd = to_pd;
      emit(to_out, dblab::run_tradeoff(spec));
    } else if (*oracle) {
      const auto rows = dblab::run_oracle(or_n_max, or_pd);
      emit(or_out, rows);
      for (const auto& row : rows) {
        if (!row.pass) {
          std::cerr << "oracle mismatch: " << row.protocol << " " << row.fraud
                    << " n=" << row.n << " |delta|=" << row.abs_delta << "\n";
          return kExitOracleMismatch;
        }
      }
    }
  } catch (const dblab::ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const dblab::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const dblab::LayoutError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
