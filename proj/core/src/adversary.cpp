#include "dblab/adversary.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <vector>

#include "dblab/errors.hpp"

namespace dblab {

const char* fraud_name(Fraud f) {
  return f == Fraud::mafia ? "mafia" : "distance";
}

namespace {

BitString random_bits(Rng& rng, std::size_t len) {
  BitString out;
  for (std::size_t i = 0; i < len; ++i) out.append(rng.next_bit());
  return out;
}

double binomial_stderr(double mean, std::uint64_t trials) {
  return std::sqrt(mean * (1.0 - mean) / static_cast<double>(trials));
}

// (i, t) -> source round table for the graph adversary, 1-based.
struct SourceRuleTable {
  std::size_t n = 0;
  std::vector<std::size_t> j;  // (i-1)*n + (t-1)

  std::size_t at(std::size_t i, std::size_t t) const {
    return j[(i - 1) * n + (t - 1)];
  }
};

SourceRuleTable make_source_rule(const GraphAnalytics& ga) {
  SourceRuleTable table;
  table.n = ga.rounds();
  table.j.resize(table.n * table.n, 1);
  for (std::size_t i = 1; i <= table.n; ++i)
    for (std::size_t t = 1; t <= table.n; ++t)
      table.j[(i - 1) * table.n + (t - 1)] = ga.best_source_round(i, t);
  return table;
}

template <typename TrialFn>
std::uint64_t run_trials(const MonteCarloOptions& opts, const TrialFn& trial) {
  const Rng base(opts.seed);
  auto run_range = [&](std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t successes = 0;
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      Rng rng = base.derive(idx);
      if (trial(rng)) ++successes;
    }
    return successes;
  };
  if (opts.threads <= 1) return run_range(0, opts.trials);
  const std::uint64_t workers = opts.threads;
  const std::uint64_t chunk = (opts.trials + workers - 1) / workers;
  std::vector<std::future<std::uint64_t>> futures;
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t lo = w * chunk;
    const std::uint64_t hi = std::min(opts.trials, lo + chunk);
    if (lo >= hi) break;
    futures.push_back(std::async(std::launch::async, run_range, lo, hi));
  }
  std::uint64_t successes = 0;
  for (auto& f : futures) successes += f.get();
  return successes;
}

bool mafia_trial(const ProtocolConfig& cfg, const SourceRuleTable* rule,
                 Rng& rng) {
  const std::size_t n = cfg.n;
  const Material material = random_material(cfg, rng);
  const BitString preask = random_bits(rng, n);
  const PreaskHarvest harvest = preask_prover(cfg, material, preask, rng);

  BitString challenges;
  std::vector<std::uint8_t> answers(n);
  std::size_t mismatch = 0;  // first differing round, 1-based; 0 = none yet
  for (std::size_t i = 1; i <= n; ++i) {
    const std::uint8_t c =
        verifier_challenge(cfg, material, i - 1, rng);
    challenges.append(c);
    if (mismatch == 0 && c != preask.bit(i - 1)) mismatch = i;
    const std::size_t source =
        (mismatch == 0) ? i : (rule ? rule->at(i, mismatch) : i);
    answers[i - 1] = harvest.responses.bit(source - 1);
  }
  return answers == prover_responses(cfg, material, challenges);
}

// Most frequent value in a scratch vector; ties go to the smallest value.
std::pair<std::uint32_t, std::size_t> longest_run(
    std::vector<std::uint32_t>& values) {
  std::sort(values.begin(), values.end());
  std::uint32_t best = values.front();
  std::size_t best_count = 0;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    if (j - i > best_count) {
      best_count = j - i;
      best = values[i];
    }
    i = j;
  }
  return {best, best_count};
}

struct CommitChoice {
  std::uint32_t response = 0;   // packed best response string y*
  double success_prob = 0.0;    // Pr(f(c) = y*) under the challenge draw
};

CommitChoice best_commitment(const ProtocolConfig& cfg,
                             const Material& material,
                             const ProverFunction& f) {
  std::vector<std::uint32_t> outputs;
  if (const KapMaterial* kap = std::get_if<KapMaterial>(&material)) {
    // Only strings matching the predefined rounds can be realized; they are
    // a subcube indexed by the free (random-challenge) rounds.
    std::uint32_t fixed = 0;
    std::vector<std::size_t> free_rounds;
    for (std::size_t i = 0; i < cfg.n; ++i) {
      if (kap->t.bit(i) == 0)
        fixed |= static_cast<std::uint32_t>(kap->d.bit(i)) << i;
      else
        free_rounds.push_back(i);
    }
    outputs.reserve(std::size_t{1} << free_rounds.size());
    for (std::uint32_t v = 0; v < (1u << free_rounds.size()); ++v) {
      std::uint32_t c = fixed;
      for (std::size_t b = 0; b < free_rounds.size(); ++b)
        c |= ((v >> b) & 1u) << free_rounds[b];
      outputs.push_back(f(c));
    }
  } else {
    outputs.reserve(f.table.size());
    outputs.assign(f.table.begin(), f.table.end());
  }
  const auto [value, count] = longest_run(outputs);
  return {value, static_cast<double>(count) /
                     static_cast<double>(outputs.size())};
}

bool distance_trial(const ProtocolConfig& cfg, Rng& rng) {
  const Material material = random_material(cfg, rng);
  const ProverFunction f = prover_function(cfg, material);
  const CommitChoice choice = best_commitment(cfg, material, f);
  std::uint32_t c = 0;
  for (std::size_t i = 0; i < cfg.n; ++i)
    c |= static_cast<std::uint32_t>(
             verifier_challenge(cfg, material, i, rng))
         << i;
  return f(c) == choice.response;
}

}  // namespace

FraudEstimate mafia_simulate(const ProtocolConfig& cfg,
                             const MonteCarloOptions& opts) {
  cfg.validate();
  if (opts.trials == 0) throw ConfigError("mafia_simulate: trials must be >= 1");
  SourceRuleTable rule;
  const SourceRuleTable* rule_ptr = nullptr;
  if (cfg.kind == Protocol::graph) {
    rule = make_source_rule(GraphAnalytics(cfg.n));
    rule_ptr = &rule;
  }
  const std::uint64_t successes = run_trials(
      opts, [&](Rng& rng) { return mafia_trial(cfg, rule_ptr, rng); });
  FraudEstimate est;
  est.cfg = cfg;
  est.fraud = Fraud::mafia;
  est.analytic = closed_form_mafia(cfg);
  est.exactness = Exactness::exact;
  est.mc_mean = static_cast<double>(successes) / static_cast<double>(opts.trials);
  est.mc_stderr = binomial_stderr(est.mc_mean, opts.trials);
  est.trials = opts.trials;
  est.seed = opts.seed;
  return est;
}

FraudEstimate distance_simulate(const ProtocolConfig& cfg,
                                const MonteCarloOptions& opts) {
  cfg.validate();
  if (opts.trials == 0)
    throw ConfigError("distance_simulate: trials must be >= 1");
  if (cfg.n > kProverFunctionMaxRounds)
    throw ResourceError(
        "distance_simulate: the adversary enumerates 2^n candidate strings "
        "per trial, which is capped at n <= 16");
  const std::uint64_t successes =
      run_trials(opts, [&](Rng& rng) { return distance_trial(cfg, rng); });
  FraudEstimate est;
  est.cfg = cfg;
  est.fraud = Fraud::distance;
  const ClosedForm analytic = closed_form_distance(cfg);
  est.analytic = analytic.value;
  est.exactness = analytic.exactness;
  est.mc_mean = static_cast<double>(successes) / static_cast<double>(opts.trials);
  est.mc_stderr = binomial_stderr(est.mc_mean, opts.trials);
  est.trials = opts.trials;
  est.seed = opts.seed;
  return est;
}

double distance_success_probability(const ProtocolConfig& cfg,
                                    const Material& material) {
  const ProverFunction f = prover_function(cfg, material);
  return best_commitment(cfg, material, f).success_prob;
}

std::size_t best_j_rule(std::size_t n, std::size_t i, std::size_t t) {
  return GraphAnalytics(n).best_source_round(i, t);
}

namespace {

// Walks on the circulant topology with edge labels packed into a mask
// (bit v = short-edge label of node v).
struct MaskWalker {
  std::size_t nodes = 0;
  std::uint32_t s_mask = 0;

  std::size_t step(std::size_t node, std::uint32_t challenge) const {
    const std::uint32_t label = (s_mask >> node) & 1u;
    return label == challenge ? (node + 1) % nodes : (node + 2) % nodes;
  }
};

// Enumerates, for fixed (n, t), every edge labeling, verifier string c and
// pre-ask string whose first mismatch is at round t, and hands the two node
// trajectories (1-based, v[i] = node after i rounds) to the sink.
template <typename Sink>
void enumerate_divergent_walks(std::size_t n, std::size_t t,
                               const Sink& sink) {
  const std::size_t nodes = 2 * n;
  std::array<std::size_t, kMarginalOracleMaxRounds + 1> v{}, a{};
  for (std::uint32_t s = 0; s < (1u << nodes); ++s) {
    const MaskWalker walker{nodes, s};
    for (std::uint32_t c = 0; c < (1u << n); ++c) {
      v[0] = 0;
      for (std::size_t i = 1; i <= n; ++i)
        v[i] = walker.step(v[i - 1], (c >> (i - 1)) & 1u);
      for (std::uint32_t suffix = 0; suffix < (1u << (n - t)); ++suffix) {
        // Pre-ask string: agree before t, flip at t, free afterwards.
        std::uint32_t cc = c & ((1u << (t - 1)) - 1u);
        cc |= (~c & (1u << (t - 1)));
        cc |= suffix << t;
        a[0] = 0;
        for (std::size_t i = 1; i <= n; ++i)
          a[i] = walker.step(a[i - 1], (cc >> (i - 1)) & 1u);
        sink(v, a);
      }
    }
  }
}

void check_oracle_rounds(std::size_t n, std::size_t cap, const char* what) {
  if (n == 0) throw ConfigError("oracle: n must be positive");
  if (n > cap) throw ResourceError(std::string(what) +
                                   ": exhaustive enumeration is capped at n <= " +
                                   std::to_string(cap));
}

}  // namespace

double theorem1_marginal_oracle(std::size_t n, std::size_t i, std::size_t j,
                                std::size_t t) {
  check_oracle_rounds(n, kMarginalOracleMaxRounds, "theorem1_marginal_oracle");
  if (i < 1 || i > n || j < 1 || j > n || t < 1 || t > n)
    throw ConfigError("theorem1_marginal_oracle: rounds must lie in [1, n]");
  // Node values are uniform and independent, so a tuple contributes
  // certainty (2/2) when the nodes coincide and a fair coin (1/2) otherwise.
  std::uint64_t numerator = 0;
  std::uint64_t tuples = 0;
  enumerate_divergent_walks(n, t, [&](const auto& v, const auto& a) {
    numerator += (a[j] == v[i]) ? 2u : 1u;
    ++tuples;
  });
  return static_cast<double>(numerator) / (2.0 * static_cast<double>(tuples));
}

double graph_mafia_exact(std::size_t n) {
  check_oracle_rounds(n, kOracleMaxRounds, "graph_mafia_exact");
  // Every quantity below is a dyadic rational tracked as numerator and
  // exponent, so the composition stays exact end to end.
  unsigned __int128 total_num = 0;
  int total_exp = static_cast<int>(n);
  total_num = 1;  // the all-challenges-guessed term 2^{-n}
  for (std::size_t t = 1; t <= n; ++t) {
    std::array<std::array<std::uint64_t, kOracleMaxRounds + 1>,
               kOracleMaxRounds + 1>
        num{};  // num[i][j]
    std::uint64_t tuples = 0;
    enumerate_divergent_walks(n, t, [&](const auto& v, const auto& a) {
      for (std::size_t i = t; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j)
          num[i][j] += (a[j] == v[i]) ? 2u : 1u;
      ++tuples;
    });
    // All marginals at this t share the denominator 2 * tuples = 2^{4n-t+1}.
    int denom_log2 = 0;
    while ((std::uint64_t{1} << denom_log2) != 2 * tuples) ++denom_log2;
    unsigned __int128 term_num = 1;
    int term_exp = static_cast<int>(t);
    for (std::size_t i = t; i <= n; ++i) {
      std::uint64_t best = 0;
      for (std::size_t j = 1; j <= n; ++j) best = std::max(best, num[i][j]);
      term_num *= best;
      term_exp += denom_log2;
    }
    if (term_exp > total_exp) {
      total_num <<= (term_exp - total_exp);
      total_exp = term_exp;
    }
    total_num += term_num << (total_exp - term_exp);
  }
  return std::ldexp(static_cast<double>(static_cast<std::uint64_t>(total_num)),
                    -total_exp);
}

double graph_mafia_game_exact(std::size_t n) {
  check_oracle_rounds(n, kOracleMaxRounds, "graph_mafia_game_exact");
  const SourceRuleTable rule = make_source_rule(GraphAnalytics(n));
  const std::size_t nodes = 2 * n;
  std::array<std::size_t, kOracleMaxRounds + 1> v{}, a{};
  std::uint64_t successes = 0;
  for (std::uint32_t s = 0; s < (1u << nodes); ++s) {
    const MaskWalker walker{nodes, s};
    for (std::uint32_t c = 0; c < (1u << n); ++c) {
      v[0] = 0;
      for (std::size_t i = 1; i <= n; ++i)
        v[i] = walker.step(v[i - 1], (c >> (i - 1)) & 1u);
      for (std::uint32_t cc = 0; cc < (1u << n); ++cc) {
        a[0] = 0;
        for (std::size_t i = 1; i <= n; ++i)
          a[i] = walker.step(a[i - 1], (cc >> (i - 1)) & 1u);
        std::size_t mismatch = 0;
        for (std::size_t i = 1; i <= n && mismatch == 0; ++i)
          if (((c ^ cc) >> (i - 1)) & 1u) mismatch = i;
        for (std::uint32_t q = 0; q < (1u << nodes); ++q) {
          bool ok = true;
          for (std::size_t i = 1; i <= n && ok; ++i) {
            const std::size_t src =
                (mismatch == 0 || i < mismatch) ? i : rule.at(i, mismatch);
            ok = ((q >> a[src]) & 1u) == ((q >> v[i]) & 1u);
          }
          successes += ok;
        }
      }
    }
  }
  return std::ldexp(static_cast<double>(successes),
                    -static_cast<int>(6 * n));
}

namespace {

BitString mask_bits(std::uint32_t mask, std::size_t len) {
  BitString out;
  for (std::size_t i = 0; i < len; ++i)
    out.append(static_cast<std::uint8_t>((mask >> i) & 1u));
  return out;
}

std::uint64_t max_preimage_count(const ProtocolConfig& cfg,
                                 const Material& material) {
  const ProverFunction f = prover_function(cfg, material);
  std::vector<std::uint32_t> outputs(f.table.begin(), f.table.end());
  return longest_run(outputs).second;
}

}  // namespace

double distance_fraud_exact(const ProtocolConfig& cfg) {
  cfg.validate();
  check_oracle_rounds(cfg.n, kOracleMaxRounds, "distance_fraud_exact");
  const std::size_t n = cfg.n;
  switch (cfg.kind) {
    case Protocol::hkp: {
      std::uint64_t acc = 0;
      for (std::uint32_t m = 0; m < (1u << (2 * n)); ++m) {
        const HkpMaterial mat{mask_bits(m, n), mask_bits(m >> n, n)};
        acc += max_preimage_count(cfg, mat);
      }
      return std::ldexp(static_cast<double>(acc), -static_cast<int>(3 * n));
    }
    case Protocol::kap: {
      const double pd = cfg.predefined_prob;
      double total = 0.0;
      for (std::uint32_t tmask = 0; tmask < (1u << n); ++tmask) {
        // tmask bit = 1 marks a random-challenge round (t register value 1).
        double weight = 1.0;
        for (std::size_t i = 0; i < n; ++i)
          weight *= ((tmask >> i) & 1u) ? (1.0 - pd) : pd;
        if (weight == 0.0) continue;
        double inner = 0.0;
        for (std::uint32_t m = 0; m < (1u << (3 * n)); ++m) {
          const KapMaterial mat{mask_bits(m, n), mask_bits(m >> n, n),
                                mask_bits(tmask, n), mask_bits(m >> (2 * n), n)};
          inner += distance_success_probability(cfg, mat);
        }
        total += weight * std::ldexp(inner, -static_cast<int>(3 * n));
      }
      return total;
    }
    case Protocol::atp: {
      const std::size_t per_tree = (std::size_t{1} << (cfg.tree_depth + 1)) - 2;
      const std::size_t label_bits = cfg.alpha * per_tree;
      std::uint64_t acc = 0;
      for (std::uint32_t m = 0; m < (1u << label_bits); ++m) {
        AtpMaterial mat;
        mat.auth = BitString::zeros(kAtpAuthBits);
        std::size_t offset = 0;
        for (std::size_t tr = 0; tr < cfg.alpha; ++tr) {
          DecisionTree tree;
          tree.depth = cfg.tree_depth;
          tree.value.assign(per_tree + 1, 0u);
          for (std::size_t i = 1; i <= per_tree; ++i)
            tree.value[i] =
                static_cast<std::uint8_t>((m >> (offset + i - 1)) & 1u);
          offset += per_tree;
          mat.trees.push_back(std::move(tree));
        }
        acc += max_preimage_count(cfg, Material{std::move(mat)});
      }
      return std::ldexp(static_cast<double>(acc),
                        -static_cast<int>(label_bits + n));
    }
    case Protocol::graph: {
      const GraphTopology topo = build_topology(n);
      std::uint64_t acc = 0;
      for (std::uint32_t m = 0; m < (1u << (4 * n)); ++m) {
        const GraphMaterial mat{label_graph(topo, mask_bits(m, 4 * n))};
        acc += max_preimage_count(cfg, mat);
      }
      return std::ldexp(static_cast<double>(acc), -static_cast<int>(5 * n));
    }
  }
  throw ConfigError("distance_fraud_exact: unknown protocol");
}

}  // namespace dblab
