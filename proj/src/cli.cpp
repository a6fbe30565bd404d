#include "shufflab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "shufflab/error.hpp"
#include "shufflab/experiments.hpp"
#include "shufflab/index_sim.hpp"
#include "shufflab/oracle.hpp"
#include "shufflab/reduction.hpp"
#include "shufflab/strategies.hpp"
#include "shufflab/trace_io.hpp"

namespace shufflab {

namespace {

namespace fs = std::filesystem;

// Raw flag values, parsed into numbers by each command.
struct Flags {
  std::string n, t, strategy = "cascade", structure = "lsm", ell = "2", B = "64", M = "0", N, rounds = "0",
                    queries = "-1", seed = "0", jobs = "1", out = ".", ops;
};

class FieldReader {
 public:
  Count integer(const std::string& name, const std::string& text, Count min) {
    Count v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
      errors_.push_back({name, text.empty() ? "is required" : "not an integer: '" + text + "'"});
      return min;
    }
    if (v < min) {
      errors_.push_back({name, "must be >= " + std::to_string(min)});
      return min;
    }
    return v;
  }
  std::vector<Count> range(const std::string& name, const std::string& text) {
    try {
      return parse_range(text);
    } catch (const ValidationError&) {
      errors_.push_back({name, "bad range '" + text + "' (use a:b or a,b,c)"});
      return {};
    }
  }
  template <class F>
  auto choice(const std::string& name, const std::string& text, F parse) -> decltype(parse(text)) {
    try {
      return parse(text);
    } catch (const ValidationError& e) {
      errors_.push_back({name, e.fields().front().message});
      return {};
    }
  }
  void add(FieldError e) { errors_.push_back(std::move(e)); }
  void check() {
    if (!errors_.empty()) throw ValidationError(std::move(errors_));
  }

 private:
  std::vector<FieldError> errors_;
};

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("ops", "cannot read '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e)) return "ValidationError";
  if (dynamic_cast<const ApplicabilityError*>(&e)) return "ApplicabilityError";
  if (dynamic_cast<const BudgetError*>(&e)) return "BudgetError";
  if (dynamic_cast<const ReplayError*>(&e)) return "ReplayError";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const TraceError*>(&e)) return "TraceError";
  if (dynamic_cast<const NoCleanGroupError*>(&e)) return "NoCleanGroupError";
  if (dynamic_cast<const CoverError*>(&e)) return "CoverError";
  if (dynamic_cast<const IllegalOpError*>(&e)) return "IllegalOpError";
  return "Error";
}

int report(std::ostream& err, const std::string& kind, const std::string& message,
           const std::vector<FieldError>& fields, int code) {
  nlohmann::json j;
  j["error"] = kind;
  j["message"] = message;
  j["fields"] = nlohmann::json::array();
  for (const auto& f : fields) j["fields"].push_back({{"field", f.field}, {"message", f.message}});
  err << j.dump() << '\n';
  return code;
}

int shuffle_run(const Flags& f, std::ostream& out) {
  FieldReader r;
  const Count n = r.integer("n", f.n, 1);
  const Count t = r.integer("t", f.t.empty() ? "1" : f.t, 1);
  const auto kind = r.choice("strategy", f.strategy, parse_strategy);
  r.check();
  const StrategyConfig cfg{kind, n, t};
  const auto run = run_strategy(cfg);
  std::string csv = "strategy,n,t,cost,bound,corrected_bound\n";
  csv += std::string(to_string(kind)) + ',' + std::to_string(n) + ',' + std::to_string(t) + ',' +
         std::to_string(run.total_cost) + ',' + format_real(strategy_cost_bound(cfg)) + ',' +
         format_real(corrected_cost_bound(cfg)) + '\n';
  const fs::path dir(f.out);
  write_file(dir / "shuffle_run.csv", csv);
  write_file(dir / (std::string(to_string(kind)) + "_n" + std::to_string(n) + "_t" + std::to_string(t) + ".ops"),
             format_ops(static_cast<std::size_t>(t), run.ops));
  out << csv;
  return kExitOk;
}

int shuffle_oracle(const Flags& f, std::ostream& out) {
  FieldReader r;
  const Count n = r.integer("n", f.n, 1);
  const Count t = r.integer("t", f.t, 1);
  r.check();
  const auto result = optimal_cost_merging(n, t);
  const fs::path dir(f.out);
  const fs::path witness = dir / ("oracle_n" + std::to_string(n) + "_t" + std::to_string(t) + ".ops");
  write_file(witness, format_ops(static_cast<std::size_t>(t), result.witness));
  const std::string csv = "n,t,f,witness\n" + std::to_string(n) + ',' + std::to_string(t) + ',' +
                          std::to_string(result.optimal_cost) + ',' + witness.generic_string() + '\n';
  write_file(dir / "oracle.csv", csv);
  out << csv;
  return kExitOk;
}

int shuffle_bounds(const Flags& f, std::ostream& out) {
  FieldReader r;
  const Count n = r.integer("n", f.n, 1);
  const Count t = r.integer("t", f.t, 1);
  r.check();
  const auto b = theorem_bounds(n, t);
  std::string csv = "n,t,bound_i,bound_ii,second_phase,f,capacity_holds\n";
  std::string f_col, cap_col;
  if (n <= kMergingMaxBalls && t <= kMergingMaxBins) {
    const Count fv = optimal_cost_merging(n, t).optimal_cost;
    f_col = std::to_string(fv);
    cap_col = capacity_bound_holds(n, t, fv) ? "1" : "0";
  }
  csv += std::to_string(n) + ',' + std::to_string(t) + ',' + format_real(b.bound_i) + ',' +
         format_real(b.bound_ii) + ',' + (b.second_phase ? "1" : "0") + ',' + f_col + ',' + cap_col + '\n';
  std::string constraints = "constraint,satisfied\n";
  for (const auto& c : check_constraints(BoundParams{}))
    constraints += '"' + c.name + "\"," + (c.satisfied ? "1" : "0") + '\n';
  const fs::path dir(f.out);
  write_file(dir / "bounds.csv", csv);
  write_file(dir / "constraints.csv", constraints);
  out << csv << constraints;
  return kExitOk;
}

int shuffle_replay(const Flags& f, std::ostream& out) {
  FieldReader r;
  const Count t = r.integer("t", f.t, 1);
  if (f.ops.empty()) r.add({"ops", "is required"});
  r.check();
  const auto ops = parse_ops(static_cast<std::size_t>(t), read_file(f.ops));
  const auto result = replay(static_cast<std::size_t>(t), ops);
  out << "t,balls,cost\n" << t << ',' << result.state.balls_placed() << ',' << result.ledger.total() << '\n';
  return kExitOk;
}

IndexConfig index_config(const Flags& f, FieldReader& r) {
  IndexConfig cfg;
  cfg.structure = r.choice("structure", f.structure, parse_structure);
  cfg.B = r.integer("B", f.B, 1);
  cfg.M = r.integer("M", f.M, 0);
  cfg.ell = r.integer("ell", f.ell, 2);
  if (cfg.ell > cfg.B) r.add({"ell", "must satisfy 2 <= ell <= B"});
  return cfg;
}

int index_run(const Flags& f, std::ostream& out) {
  FieldReader r;
  const auto cfg = index_config(f, r);
  const Count N = r.integer("N", f.N, 1);
  const auto seed = static_cast<std::uint64_t>(r.integer("seed", f.seed, 0));
  const Count queries = r.integer("queries", f.queries, -1);
  const Count rounds = r.integer("rounds", f.rounds, 0);
  r.check();
  WorkloadOptions options;
  options.seed = seed;
  options.query_every = queries;
  options.trace_every = rounds;
  const auto keys = shuffled_keys(N, seed);
  const auto run = run_workload(cfg, keys, {}, options);
  const std::string csv = index_csv_header() + to_csv(IndexRow{cfg, N, seed, run.metrics, {}});
  const fs::path dir(f.out);
  write_file(dir / "metrics.csv", csv);
  if (rounds > 0) write_file(dir / "trace.jsonl", trace_to_jsonl(run.trace));
  out << csv;
  return kExitOk;
}

int reduce(const Flags& f, std::ostream& out) {
  FieldReader r;
  const auto cfg = index_config(f, r);
  if (cfg.B < 2) r.add({"B", "must be >= 2"});
  if (cfg.M < 1) r.add({"M", "must be >= 1"});
  const auto seed = static_cast<std::uint64_t>(r.integer("seed", f.seed, 0));
  r.check();
  const auto workload = build_grouped_workload(cfg.B, cfg.M, seed);
  const auto trace = simulate_rounds(cfg, workload);
  const Count A = std::max<Count>(1, measured_access_overhead(trace, workload));
  const auto cert = extract_certificate(trace, workload, A);
  const auto verdict = verify_certificate(cert);
  const auto json = certificate_json(cert, verdict.ok);
  const fs::path dir(f.out);
  write_file(dir / "trace.jsonl", trace_to_jsonl(trace));
  write_file(dir / "certificate.json", json);
  out << json;
  if (!verdict.ok) throw Error("certificate failed verification: " + verdict.diagnosis);
  return kExitOk;
}

int sweep(const Flags& f, std::ostream& out) {
  FieldReader r;
  ShuffleSweep ss;
  ss.n = r.range("n", f.n);
  ss.t = r.range("t", f.t);
  IndexSweep is;
  std::stringstream ss_struct(f.structure);
  for (std::string name; std::getline(ss_struct, name, ',');)
    if (!name.empty()) is.structures.push_back(r.choice("structure", name, parse_structure));
  is.B = r.range("B", f.B);
  is.M = r.range("M", f.M);
  is.ell = r.range("ell", f.ell);
  is.N = r.range("N", f.N);
  is.seed = static_cast<std::uint64_t>(r.integer("seed", f.seed, 0));
  is.query_every = r.integer("queries", f.queries, -1);
  const auto jobs = static_cast<unsigned>(r.integer("jobs", f.jobs, 1));
  r.check();
  ss.jobs = is.jobs = jobs;
  std::string shuffle_csv = shuffle_csv_header();
  for (const auto& row : run_shuffle_sweep(ss)) shuffle_csv += to_csv(row);
  std::string index_csv = index_csv_header();
  const auto index_rows = run_index_sweep(is);
  for (const auto& row : index_rows) index_csv += to_csv(row);
  const fs::path dir(f.out);
  write_file(dir / "shuffle_grid.csv", shuffle_csv);
  write_file(dir / "index_grid.csv", index_csv);
  out << "shuffle_rows," << ss.n.size() * ss.t.size() << "\nindex_rows," << index_rows.size() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"shufflab: ball-shuffling oracles, index simulation and the trace reduction", "shufflab"};
  app.require_subcommand(1);
  Flags f;
  std::map<std::string, std::function<int(const Flags&, std::ostream&)>> handlers;

  auto add = [&](const std::string& name, const std::string& help, const std::vector<std::string>& flags,
                 std::function<int(const Flags&, std::ostream&)> handler) {
    auto* sub = app.add_subcommand(name, help);
    const std::map<std::string, std::pair<std::string*, std::string>> known = {
        {"n", {&f.n, "number of balls (sweep: range a:b or list)"}},
        {"t", {&f.t, "number of bins (sweep: range)"}},
        {"strategy", {&f.strategy, "naive | greedy | grouped | cascade"}},
        {"structure", {&f.structure, "baseline | lsm | stepped (sweep: comma list)"}},
        {"ell", {&f.ell, "fanout, 2 <= ell <= B"}},
        {"B", {&f.B, "block capacity"}},
        {"M", {&f.M, "memory capacity"}},
        {"N", {&f.N, "number of keys"}},
        {"rounds", {&f.rounds, "record a snapshot every this many inserts"}},
        {"queries", {&f.queries, "query every this many inserts (-1: every B, 0: none)"}},
        {"seed", {&f.seed, "random seed"}},
        {"jobs", {&f.jobs, "concurrent sweep cells"}},
        {"out", {&f.out, "output directory"}},
        {"ops", {&f.ops, "op-sequence file"}},
    };
    for (const auto& flag : flags) {
      const auto& [target, desc] = known.at(flag);
      sub->add_option("--" + flag, *target, desc);
    }
    handlers[name] = std::move(handler);
  };
  add("shuffle-run", "replay a strategy and report its cost", {"n", "t", "strategy", "out"}, shuffle_run);
  add("shuffle-oracle", "exact optimal cost with a witness", {"n", "t", "out"}, shuffle_oracle);
  add("shuffle-bounds", "analytic lower bounds and constant checks", {"n", "t", "out"}, shuffle_bounds);
  add("shuffle-replay", "replay an op-sequence file", {"t", "ops"}, shuffle_replay);
  add("index-run", "simulate an index on N random keys",
      {"structure", "B", "M", "ell", "N", "rounds", "queries", "seed", "out"}, index_run);
  add("reduce", "grouped workload to a verified shuffling certificate",
      {"structure", "B", "M", "ell", "seed", "out"}, reduce);
  add("sweep", "grid sweep to shuffle_grid.csv and index_grid.csv",
      {"n", "t", "structure", "B", "M", "ell", "N", "queries", "seed", "jobs", "out"}, sweep);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return report(err, "UsageError", e.what(), {}, kExitUsage);
  }

  // sweep takes lists, so its index-grid flags start out empty.
  auto* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  auto given = [&](const char* flag) { return chosen->count(std::string("--") + flag) > 0; };
  if (name == "reduce") {
    if (!given("B")) f.B = "2";
    if (!given("M")) f.M = "1";
  }
  if (name == "sweep") {
    if (!given("structure")) f.structure = given("N") ? "baseline,lsm,stepped" : "";
    if (!given("B")) f.B = given("N") ? "64" : "";
    if (!given("M")) f.M = given("N") ? "0" : "";
    if (!given("ell")) f.ell = given("N") ? "2" : "";
  }

  try {
    return handlers.at(name)(f, out);
  } catch (const ValidationError& e) {
    return report(err, "ValidationError", e.what(), e.fields(), kExitUsage);
  } catch (const ApplicabilityError& e) {
    return report(err, "ApplicabilityError", e.what(), {}, kExitUsage);
  } catch (const BudgetError& e) {
    return report(err, "BudgetError", e.what(), {}, kExitBudget);
  } catch (const std::exception& e) {
    return report(err, error_kind(e), e.what(), {}, kExitFailure);
  }
}

}  // namespace shufflab
