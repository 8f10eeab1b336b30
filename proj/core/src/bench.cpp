#include "dblab/bench.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>

#include "json.hpp"

#include "dblab/errors.hpp"
#include "dblab/rng.hpp"

namespace dblab {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == ',') {
      parts.push_back(current);
      current.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string timestamp_line() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "# generated: %Y-%m-%dT%H:%M:%SZ\n", &tm);
  return buf;
}

}  // namespace

std::string proto_label(ProtoName p) {
  switch (p) {
    case ProtoName::hkp:
      return "hkp";
    case ProtoName::kap:
      return "kap";
    case ProtoName::atp:
      return "atp";
    case ProtoName::atp3:
      return "atp3";
    case ProtoName::graph:
      return "graph";
  }
  return "?";
}

std::vector<ProtoName> parse_protocols(const std::string& text) {
  if (text == "all")
    return {ProtoName::hkp, ProtoName::kap, ProtoName::atp, ProtoName::atp3,
            ProtoName::graph};
  std::vector<ProtoName> out;
  for (const auto& name : split_csv_list(text)) {
    if (name == "hkp")
      out.push_back(ProtoName::hkp);
    else if (name == "kap")
      out.push_back(ProtoName::kap);
    else if (name == "atp")
      out.push_back(ProtoName::atp);
    else if (name == "atp3")
      out.push_back(ProtoName::atp3);
    else if (name == "graph")
      out.push_back(ProtoName::graph);
    else
      throw ConfigError("unknown protocol: '" + name + "'");
  }
  return out;
}

std::vector<Fraud> parse_frauds(const std::string& text) {
  if (text == "all") return {Fraud::mafia, Fraud::distance};
  std::vector<Fraud> out;
  for (const auto& name : split_csv_list(text)) {
    if (name == "mafia")
      out.push_back(Fraud::mafia);
    else if (name == "distance")
      out.push_back(Fraud::distance);
    else
      throw ConfigError("unknown fraud kind: '" + name + "'");
  }
  return out;
}

namespace {

std::size_t parse_positive(const std::string& text) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    throw ConfigError("expected a positive integer, got '" + text + "'");
  }
  if (pos != text.size() || v == 0)
    throw ConfigError("expected a positive integer, got '" + text + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

std::vector<std::size_t> parse_rounds(const std::string& text) {
  if (text.empty()) throw ConfigError("empty round range");
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const std::size_t lo = parse_positive(text.substr(0, dots));
    const std::size_t hi = parse_positive(text.substr(dots + 2));
    if (hi < lo) throw ConfigError("round range upper bound below lower");
    std::vector<std::size_t> out;
    for (std::size_t n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  std::vector<std::size_t> out;
  for (const auto& part : split_csv_list(text))
    out.push_back(parse_positive(part));
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  if (text.empty()) throw ConfigError("empty numeric list");
  std::vector<double> out;
  for (const auto& part : split_csv_list(text)) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &pos);
    } catch (const std::exception&) {
      throw ConfigError("expected a number, got '" + part + "'");
    }
    if (pos != part.size())
      throw ConfigError("expected a number, got '" + part + "'");
    out.push_back(v);
  }
  return out;
}

std::optional<ProtocolConfig> instantiate(ProtoName p, std::size_t n,
                                          double pd) {
  switch (p) {
    case ProtoName::hkp:
      return ProtocolConfig::hkp(n);
    case ProtoName::kap:
      return ProtocolConfig::kap(n, pd);
    case ProtoName::atp:
      return ProtocolConfig::atp(n);
    case ProtoName::atp3:
      if (n % 3 != 0) return std::nullopt;
      return ProtocolConfig::atp3(n);
    case ProtoName::graph:
      return ProtocolConfig::graph(n);
  }
  return std::nullopt;
}

namespace {

// Closed forms for the graph protocol reuse one matrix-power cache per n
// within a command invocation.
class ClosedFormCache {
 public:
  double mafia(const ProtocolConfig& cfg) {
    if (cfg.kind == Protocol::graph) return analytics(cfg.n).mafia();
    return closed_form_mafia(cfg);
  }

  ClosedForm distance(const ProtocolConfig& cfg) {
    if (cfg.kind == Protocol::graph)
      return {analytics(cfg.n).distance_bound(), Exactness::upper_bound};
    return closed_form_distance(cfg);
  }

 private:
  GraphAnalytics& analytics(std::size_t n) {
    auto it = cache_.find(n);
    if (it == cache_.end())
      it = cache_.emplace(n, GraphAnalytics(n)).first;
    return it->second;
  }

  std::map<std::size_t, GraphAnalytics> cache_;
};

void validate_sweep(const SweepSpec& spec) {
  if (spec.protocols.empty()) throw ConfigError("no protocols selected");
  if (spec.frauds.empty()) throw ConfigError("no fraud kinds selected");
  if (spec.rounds.empty()) throw ConfigError("empty round range");
  if (spec.pds.empty()) throw ConfigError("empty p_d list");
  for (double pd : spec.pds)
    if (!(pd >= 0.0 && pd <= 1.0))
      throw ConfigError("p_d values must lie in [0,1]");
}

// Only KAP sweeps over p_d; every other protocol contributes one row.
std::vector<std::optional<double>> pd_axis(ProtoName p,
                                           const std::vector<double>& pds) {
  if (p == ProtoName::kap) {
    std::vector<std::optional<double>> out;
    for (double pd : pds) out.emplace_back(pd);
    return out;
  }
  return {std::nullopt};
}

std::uint64_t row_seed(const SweepSpec& spec, const std::string& protocol,
                       Fraud fraud, std::size_t n, std::optional<double> pd) {
  std::uint64_t h = detail::mix64(spec.seed ^ 0x51AFE0C1D3B2A847ULL);
  h = detail::mix64(h ^ (fraud == Fraud::mafia ? 1u : 2u));
  h = detail::mix64(h ^ static_cast<std::uint64_t>(n));
  for (char ch : protocol)
    h = detail::mix64(h ^ static_cast<std::uint8_t>(ch));
  if (pd) h = detail::mix64(h ^ std::bit_cast<std::uint64_t>(*pd));
  return h;
}

}  // namespace

std::vector<AnalyzeRow> run_analyze(const SweepSpec& spec) {
  validate_sweep(spec);
  ClosedFormCache cache;
  std::vector<AnalyzeRow> rows;
  for (ProtoName p : spec.protocols) {
    for (Fraud fraud : spec.frauds) {
      for (std::size_t n : spec.rounds) {
        for (const auto& pd : pd_axis(p, spec.pds)) {
          const auto cfg = instantiate(p, n, pd.value_or(0.0));
          if (!cfg) continue;
          AnalyzeRow row;
          row.protocol = proto_label(p);
          row.fraud = fraud_name(fraud);
          row.n = n;
          row.pd = pd;
          if (fraud == Fraud::mafia) {
            row.value = cache.mafia(*cfg);
            row.exactness = Exactness::exact;
          } else {
            const ClosedForm cf = cache.distance(*cfg);
            row.value = cf.value;
            row.exactness = cf.exactness;
          }
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

std::vector<SimulateRow> run_simulate(const SweepSpec& spec) {
  validate_sweep(spec);
  if (spec.trials == 0) throw ConfigError("trials must be >= 1");
  std::vector<SimulateRow> rows;
  for (ProtoName p : spec.protocols) {
    for (Fraud fraud : spec.frauds) {
      for (std::size_t n : spec.rounds) {
        for (const auto& pd : pd_axis(p, spec.pds)) {
          const auto cfg = instantiate(p, n, pd.value_or(0.0));
          if (!cfg) continue;
          MonteCarloOptions opts;
          opts.trials = spec.trials;
          opts.threads = spec.threads;
          opts.seed = row_seed(spec, proto_label(p), fraud, n, pd);
          const FraudEstimate est = fraud == Fraud::mafia
                                        ? mafia_simulate(*cfg, opts)
                                        : distance_simulate(*cfg, opts);
          SimulateRow row;
          row.protocol = proto_label(p);
          row.fraud = fraud_name(fraud);
          row.n = n;
          row.pd = pd;
          row.analytic = est.analytic;
          row.exactness = est.exactness;
          row.mc_mean = est.mc_mean;
          row.mc_stderr = est.mc_stderr;
          row.trials = est.trials;
          row.seed = spec.seed;
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

std::vector<double> log_spaced_targets(double lo, double hi,
                                       std::size_t count) {
  if (!(lo > 0.0 && hi >= lo && hi < 1.0))
    throw ConfigError("targets must satisfy 0 < lo <= hi < 1");
  if (count == 0) throw ConfigError("target count must be >= 1");
  if (count == 1) return {lo};
  std::vector<double> out;
  const double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(count - 1));
  double v = lo;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(i + 1 == count ? hi : v);
    v *= ratio;
  }
  return out;
}

std::vector<TradeoffCell> run_tradeoff(const TradeoffSpec& spec) {
  if (spec.protocols.empty()) throw ConfigError("no protocols selected");
  if (spec.mafia_targets.empty() || spec.distance_targets.empty())
    throw ConfigError("empty target list");
  if (spec.n_max == 0) throw ConfigError("n_max must be >= 1");
  for (double t : spec.mafia_targets)
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("targets must lie in (0,1)");
  for (double t : spec.distance_targets)
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("targets must lie in (0,1)");

  // Value tables per protocol; NaN marks round counts a protocol cannot run.
  struct ProtoTable {
    ProtoName name;
    std::vector<double> mafia, distance;
    std::vector<Exactness> mafia_ex, distance_ex;
  };
  ClosedFormCache cache;
  const ProtoName canonical[] = {ProtoName::hkp, ProtoName::kap,
                                 ProtoName::atp, ProtoName::atp3,
                                 ProtoName::graph};
  std::vector<ProtoTable> tables;
  for (ProtoName p : canonical) {
    bool selected = false;
    for (ProtoName q : spec.protocols) selected = selected || q == p;
    if (!selected) continue;
    ProtoTable table;
    table.name = p;
    table.mafia.assign(spec.n_max + 1, std::nan(""));
    table.distance.assign(spec.n_max + 1, std::nan(""));
    table.mafia_ex.assign(spec.n_max + 1, Exactness::exact);
    table.distance_ex.assign(spec.n_max + 1, Exactness::exact);
    for (std::size_t n = 1; n <= spec.n_max; ++n) {
      const auto cfg = instantiate(p, n, spec.pd);
      if (!cfg) continue;
      table.mafia[n] = cache.mafia(*cfg);
      const ClosedForm cf = cache.distance(*cfg);
      table.distance[n] = cf.value;
      table.distance_ex[n] = cf.exactness;
    }
    tables.push_back(std::move(table));
  }

  std::vector<TradeoffCell> cells;
  for (double mt : spec.mafia_targets) {
    for (double dt : spec.distance_targets) {
      TradeoffCell cell;
      cell.mafia_target = mt;
      cell.distance_target = dt;
      std::size_t best_rounds = 0;
      std::uint64_t best_memory = 0;
      for (const auto& table : tables) {
        for (std::size_t n = 1; n <= spec.n_max; ++n) {
          if (std::isnan(table.mafia[n])) continue;
          if (!(table.mafia[n] <= mt && table.distance[n] <= dt)) continue;
          const auto cfg = instantiate(table.name, n, spec.pd);
          const std::uint64_t memory = memory_cost_bits(*cfg);
          const bool better =
              !cell.achievable || n < best_rounds ||
              (n == best_rounds && memory < best_memory);
          if (better) {
            cell.achievable = true;
            cell.winner = proto_label(table.name);
            cell.rounds = n;
            cell.memory_bits = memory;
            cell.mafia_value = table.mafia[n];
            cell.distance_value = table.distance[n];
            cell.mafia_exactness = table.mafia_ex[n];
            cell.distance_exactness = table.distance_ex[n];
            best_rounds = n;
            best_memory = memory;
          }
          break;  // smallest qualifying n for this protocol
        }
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::vector<OracleRow> run_oracle(std::size_t n_max, double pd) {
  if (n_max == 0) throw ConfigError("oracle: n_max must be >= 1");
  if (n_max > kOracleMaxRounds)
    throw ResourceError("oracle: exhaustive enumeration is capped at n <= 3");
  if (!(pd >= 0.0 && pd <= 1.0))
    throw ConfigError("oracle: p_d must lie in [0,1]");

  std::vector<OracleRow> rows;
  auto add = [&rows](std::string protocol, Fraud fraud, std::size_t n,
                     std::optional<double> pd_value, double oracle,
                     double analytic, Exactness ex, double tolerance) {
    OracleRow row;
    row.protocol = std::move(protocol);
    row.fraud = fraud_name(fraud);
    row.n = n;
    row.pd = pd_value;
    row.oracle = oracle;
    row.analytic = analytic;
    row.exactness = ex;
    row.abs_delta = std::fabs(oracle - analytic);
    row.pass = ex == Exactness::exact
                   ? row.abs_delta <= tolerance
                   : oracle <= analytic + kOracleExactTolerance;
    rows.push_back(std::move(row));
  };

  for (std::size_t n = 1; n <= n_max; ++n) {
    add("graph", Fraud::mafia, n, std::nullopt, graph_mafia_exact(n),
        graph_mafia(n), Exactness::exact, kOracleExactTolerance);
    add("hkp", Fraud::distance, n, std::nullopt,
        distance_fraud_exact(ProtocolConfig::hkp(n)),
        closed_form_distance(ProtocolConfig::hkp(n)).value, Exactness::exact,
        kOracleExactTolerance);
    add("kap", Fraud::distance, n, pd,
        distance_fraud_exact(ProtocolConfig::kap(n, pd)),
        closed_form_distance(ProtocolConfig::kap(n, pd)).value,
        Exactness::exact, kOracleExactTolerance);
    add("atp", Fraud::distance, n, std::nullopt,
        distance_fraud_exact(ProtocolConfig::atp(n)),
        closed_form_distance(ProtocolConfig::atp(n)).value,
        Exactness::upper_bound, kOracleExactTolerance);
    if (n % 3 == 0)
      add("atp3", Fraud::distance, n, std::nullopt,
          distance_fraud_exact(ProtocolConfig::atp3(n)),
          closed_form_distance(ProtocolConfig::atp3(n)).value,
          Exactness::exact, kAtp3ConstantTolerance);
    add("graph", Fraud::distance, n, std::nullopt,
        distance_fraud_exact(ProtocolConfig::graph(n)),
        closed_form_distance(ProtocolConfig::graph(n)).value,
        Exactness::upper_bound, kOracleExactTolerance);
  }
  return rows;
}

namespace {

void append_csv_field(std::string& line, const std::string& value) {
  if (!line.empty()) line.push_back(',');
  line += value;
}

std::string csv_optional(const std::optional<double>& v) {
  return v ? fmt_double(*v) : "";
}

}  // namespace

std::string to_csv(const std::vector<AnalyzeRow>& rows, bool with_timestamp) {
  std::string out;
  if (with_timestamp) out += timestamp_line();
  out += "protocol,fraud,n,param,value,exactness\n";
  for (const auto& r : rows) {
    std::string line;
    append_csv_field(line, r.protocol);
    append_csv_field(line, r.fraud);
    append_csv_field(line, std::to_string(r.n));
    append_csv_field(line, csv_optional(r.pd));
    append_csv_field(line, fmt_double(r.value));
    append_csv_field(line, exactness_name(r.exactness));
    out += line + "\n";
  }
  return out;
}

std::string to_csv(const std::vector<SimulateRow>& rows, bool with_timestamp) {
  std::string out;
  if (with_timestamp) out += timestamp_line();
  out += "protocol,fraud,n,param,analytic,exactness,mc_mean,mc_stderr,trials,seed\n";
  for (const auto& r : rows) {
    std::string line;
    append_csv_field(line, r.protocol);
    append_csv_field(line, r.fraud);
    append_csv_field(line, std::to_string(r.n));
    append_csv_field(line, csv_optional(r.pd));
    append_csv_field(line, fmt_double(r.analytic));
    append_csv_field(line, exactness_name(r.exactness));
    append_csv_field(line, fmt_double(r.mc_mean));
    append_csv_field(line, fmt_double(r.mc_stderr));
    append_csv_field(line, std::to_string(r.trials));
    append_csv_field(line, std::to_string(r.seed));
    out += line + "\n";
  }
  return out;
}

std::string to_csv(const std::vector<TradeoffCell>& rows,
                   bool with_timestamp) {
  std::string out;
  if (with_timestamp) out += timestamp_line();
  out +=
      "mafia_target,distance_target,winner,rounds,memory_bits,mafia_value,"
      "distance_value,mafia_exactness,distance_exactness\n";
  for (const auto& r : rows) {
    std::string line;
    append_csv_field(line, fmt_double(r.mafia_target));
    append_csv_field(line, fmt_double(r.distance_target));
    append_csv_field(line, r.winner);
    append_csv_field(line, r.achievable ? std::to_string(r.rounds) : "");
    append_csv_field(line, r.achievable ? std::to_string(r.memory_bits) : "");
    append_csv_field(line, r.achievable ? fmt_double(r.mafia_value) : "");
    append_csv_field(line, r.achievable ? fmt_double(r.distance_value) : "");
    append_csv_field(line,
                     r.achievable ? exactness_name(r.mafia_exactness) : "");
    append_csv_field(line,
                     r.achievable ? exactness_name(r.distance_exactness) : "");
    out += line + "\n";
  }
  return out;
}

std::string to_csv(const std::vector<OracleRow>& rows, bool with_timestamp) {
  std::string out;
  if (with_timestamp) out += timestamp_line();
  out += "protocol,fraud,n,param,oracle,analytic,exactness,abs_delta,pass\n";
  for (const auto& r : rows) {
    std::string line;
    append_csv_field(line, r.protocol);
    append_csv_field(line, r.fraud);
    append_csv_field(line, std::to_string(r.n));
    append_csv_field(line, csv_optional(r.pd));
    append_csv_field(line, fmt_double(r.oracle));
    append_csv_field(line, fmt_double(r.analytic));
    append_csv_field(line, exactness_name(r.exactness));
    append_csv_field(line, fmt_double(r.abs_delta));
    append_csv_field(line, r.pass ? "pass" : "fail");
    out += line + "\n";
  }
  return out;
}

namespace {

void put_pd(ordered_json& obj, const std::optional<double>& pd) {
  if (pd)
    obj["param"] = *pd;
  else
    obj["param"] = nullptr;
}

}  // namespace

std::string to_json(const std::vector<AnalyzeRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json obj;
    obj["protocol"] = r.protocol;
    obj["fraud"] = r.fraud;
    obj["n"] = r.n;
    put_pd(obj, r.pd);
    obj["value"] = r.value;
    obj["exactness"] = exactness_name(r.exactness);
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::string to_json(const std::vector<SimulateRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json obj;
    obj["protocol"] = r.protocol;
    obj["fraud"] = r.fraud;
    obj["n"] = r.n;
    put_pd(obj, r.pd);
    obj["analytic"] = r.analytic;
    obj["exactness"] = exactness_name(r.exactness);
    obj["mc_mean"] = r.mc_mean;
    obj["mc_stderr"] = r.mc_stderr;
    obj["trials"] = r.trials;
    obj["seed"] = r.seed;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::string to_json(const std::vector<TradeoffCell>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json obj;
    obj["mafia_target"] = r.mafia_target;
    obj["distance_target"] = r.distance_target;
    obj["winner"] = r.winner;
    if (r.achievable) {
      obj["rounds"] = r.rounds;
      obj["memory_bits"] = r.memory_bits;
      obj["mafia_value"] = r.mafia_value;
      obj["distance_value"] = r.distance_value;
      obj["mafia_exactness"] = exactness_name(r.mafia_exactness);
      obj["distance_exactness"] = exactness_name(r.distance_exactness);
    } else {
      obj["rounds"] = nullptr;
      obj["memory_bits"] = nullptr;
      obj["mafia_value"] = nullptr;
      obj["distance_value"] = nullptr;
      obj["mafia_exactness"] = nullptr;
      obj["distance_exactness"] = nullptr;
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::string to_json(const std::vector<OracleRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json obj;
    obj["protocol"] = r.protocol;
    obj["fraud"] = r.fraud;
    obj["n"] = r.n;
    put_pd(obj, r.pd);
    obj["oracle"] = r.oracle;
    obj["analytic"] = r.analytic;
    obj["exactness"] = exactness_name(r.exactness);
    obj["abs_delta"] = r.abs_delta;
    obj["pass"] = r.pass;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

}  // namespace dblab
