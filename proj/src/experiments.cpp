#include "shufflab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <functional>
#include <thread>

#include "shufflab/error.hpp"
#include "shufflab/strategies.hpp"

namespace shufflab {

namespace {

Count parse_count(std::string_view s) {
  Count v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw ValidationError("range", "bad integer '" + std::string(s) + "'");
  return v;
}

// Runs task(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& task) {
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) task(i);
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

template <class T>
std::string opt(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, bool>) return *v ? "1" : "0";
  else return std::to_string(*v);
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::optional<Count> strategy_cost(StrategyKind kind, Count n, Count t) {
  const StrategyConfig cfg{kind, n, t};
  if (kind == StrategyKind::grouped_geometric && !grouped_applicable(n, t)) return std::nullopt;
  return run_strategy(cfg).total_cost;
}

}  // namespace

std::vector<Count> parse_range(std::string_view text) {
  std::vector<Count> out;
  if (text.empty()) return out;
  if (const auto colon = text.find(':'); colon != std::string_view::npos) {
    const Count a = parse_count(text.substr(0, colon));
    const Count b = parse_count(text.substr(colon + 1));
    for (Count v = a; v <= b; ++v) out.push_back(v);
    return out;
  }
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_count(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, 6);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

std::vector<ShuffleRow> run_shuffle_sweep(const ShuffleSweep& sweep) {
  std::vector<ShuffleRow> rows;
  for (Count n : sweep.n)
    for (Count t : sweep.t) {
      ShuffleRow row;
      row.n = n;
      row.t = t;
      rows.push_back(row);
    }
  parallel_for(rows.size(), sweep.jobs, [&](std::size_t i) {
    ShuffleRow& row = rows[i];
    try {
      validate(StrategyConfig{StrategyKind::naive_single_bin, row.n, row.t});
      row.naive = strategy_cost(StrategyKind::naive_single_bin, row.n, row.t);
      row.greedy = strategy_cost(StrategyKind::greedy_smallest_bin, row.n, row.t);
      row.grouped = strategy_cost(StrategyKind::grouped_geometric, row.n, row.t);
      row.cascade = strategy_cost(StrategyKind::cascade_merge, row.n, row.t);
      row.cascade_bound = corrected_cost_bound({StrategyKind::cascade_merge, row.n, row.t});
      if (row.grouped)
        row.grouped_bound = static_cast<Count>(corrected_cost_bound({StrategyKind::grouped_geometric, row.n, row.t}));
      row.bounds = theorem_bounds(row.n, row.t);
      if (row.n <= kMergingMaxBalls && row.t <= kMergingMaxBins) {
        row.oracle = optimal_cost_merging(row.n, row.t, sweep.oracle).optimal_cost;
        row.capacity_holds = capacity_bound_holds(row.n, row.t, *row.oracle);
      }
    } catch (const Error& e) {
      row.error = e.what();
    }
  });
  return rows;
}

std::string shuffle_csv_header() {
  return "n,t,f,naive,greedy,grouped,cascade,grouped_bound,cascade_bound,bound_i,bound_ii,second_phase,"
         "capacity_holds,error\n";
}

std::string to_csv(const ShuffleRow& r) {
  return std::to_string(r.n) + ',' + std::to_string(r.t) + ',' + opt(r.oracle) + ',' + opt(r.naive) + ',' +
         opt(r.greedy) + ',' + opt(r.grouped) + ',' + opt(r.cascade) + ',' + opt(r.grouped_bound) + ',' +
         format_real(r.cascade_bound) + ',' + format_real(r.bounds.bound_i) + ',' +
         format_real(r.bounds.bound_ii) + ',' + (r.bounds.second_phase ? "1" : "0") + ',' +
         opt(r.capacity_holds) + ',' + quote(r.error) + '\n';
}

IndexRow run_index_cell(const IndexConfig& cfg, Count N, std::uint64_t seed, Count query_every) {
  IndexRow row{cfg, N, seed, {}, {}};
  try {
    validate(cfg);
    if (N < 1) throw ValidationError("N", "must be >= 1");
    const auto keys = shuffled_keys(N, seed);
    WorkloadOptions options;
    options.seed = seed;
    options.query_every = query_every;
    row.metrics = run_workload(cfg, keys, {}, options).metrics;
  } catch (const Error& e) {
    row.error = e.what();
  }
  return row;
}

std::vector<IndexRow> run_index_sweep(const IndexSweep& sweep) {
  std::vector<std::pair<IndexConfig, Count>> cells;
  for (auto s : sweep.structures)
    for (Count B : sweep.B)
      for (Count M : sweep.M)
        for (Count ell : sweep.ell)
          for (Count N : sweep.N) cells.push_back({IndexConfig{B, M, ell, s}, N});
  std::vector<IndexRow> rows(cells.size());
  parallel_for(cells.size(), sweep.jobs, [&](std::size_t i) {
    rows[i] = run_index_cell(cells[i].first, cells[i].second, sweep.seed, sweep.query_every);
  });
  return rows;
}

std::string index_csv_header() {
  return "structure,B,M,ell,N,r,A,u,element_u,seed,avg_blocks_per_unit,A_exact,queries,transition_total,"
         "element_total,u_log2_A,tradeoff,error\n";
}

double tradeoff_product(const IndexMetrics& m) {
  return m.update_cost_u * std::log2(std::max(m.access_overhead, 2.0));
}

std::string to_csv(const IndexRow& r) {
  const auto& m = r.metrics;
  std::string region;
  if (r.error.empty() && m.access_overhead >= 1 && m.update_cost_u >= 1)
    region = std::string(to_string(tradeoff_region(m.access_overhead, m.update_cost_u,
                                                   static_cast<double>(r.cfg.B))));
  return std::string(to_string(r.cfg.structure)) + ',' + std::to_string(r.cfg.B) + ',' +
         std::to_string(r.cfg.M) + ',' + std::to_string(r.cfg.ell) + ',' + std::to_string(r.N) + ',' +
         format_real(m.redundancy) + ',' + format_real(m.access_overhead) + ',' + format_real(m.update_cost_u) +
         ',' + format_real(m.element_u) + ',' + std::to_string(r.seed) + ',' + format_real(m.avg_blocks_per_unit) +
         ',' + (m.access_overhead_exact ? "1" : "0") + ',' + std::to_string(m.queries) + ',' +
         std::to_string(m.transition_cost_total) + ',' + std::to_string(m.element_transition_cost_total) + ',' +
         format_real(tradeoff_product(m)) + ',' + region + ',' + quote(r.error) + '\n';
}

}  // namespace shufflab
