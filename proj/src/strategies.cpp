#include "shufflab/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shufflab/error.hpp"

namespace shufflab {

namespace {

__extension__ typedef unsigned __int128 u128;
constexpr u128 kSaturated = ~u128{0} >> 1;

u128 saturating_pow(Count base, Count exp) {
  u128 result = 1;
  for (Count i = 0; i < exp; ++i) {
    if (result > kSaturated / static_cast<u128>(base)) return kSaturated;
    result *= static_cast<u128>(base);
  }
  return result;
}

// c^t >= n^i, exact unless both sides overflow 127 bits.
bool power_at_least(Count c, Count t, Count n, Count i) {
  const u128 lhs = saturating_pow(c, t);
  const u128 rhs = saturating_pow(n, i);
  if (lhs != kSaturated && rhs != kSaturated) return lhs >= rhs;
  if (lhs == kSaturated && rhs != kSaturated) return true;
  if (lhs != kSaturated && rhs == kSaturated) return false;
  return static_cast<long double>(t) * std::log(static_cast<long double>(c)) >=
         static_cast<long double>(i) * std::log(static_cast<long double>(n));
}

// Smallest g >= 1 with base^g >= n.
Count ceil_log(Count base, Count n) {
  Count g = 1;
  u128 power = static_cast<u128>(base);
  while (power < static_cast<u128>(n)) {
    power *= static_cast<u128>(base);
    ++g;
  }
  return g;
}

StrategyRun run_naive(Count n) {
  StrategyRun run;
  GameState state(1);
  for (Count i = 0; i < n; ++i) {
    auto op = direct_placement(state, BinId{0});
    run.total_cost += shuffle_cost(state, op);
    state = apply_shuffle(state, op);
    run.ops.push_back(std::move(op));
  }
  return run;
}

StrategyRun run_greedy(Count n, Count t) {
  StrategyRun run;
  GameState state(static_cast<std::size_t>(t));
  for (Count i = 0; i < n; ++i) {
    const auto bins = state.bins();
    const auto smallest = static_cast<BinId>(std::min_element(bins.begin(), bins.end()) - bins.begin());
    auto op = direct_placement(state, smallest);
    run.total_cost += shuffle_cost(state, op);
    state = apply_shuffle(state, op);
    run.ops.push_back(std::move(op));
  }
  return run;
}

// A counter in base k+1 over g groups: the arriving ball takes a free bin of
// group 0 if there is one; otherwise every full group below the first group
// with room is merged, together with the ball, into one bin of that group.
StrategyRun run_grouped(Count n, Count t) {
  const auto layout = grouped_layout(n, t);
  const Count k = layout.bins_per_group;
  StrategyRun run;
  GameState state(static_cast<std::size_t>(t));
  auto free_bin = [&](Count group) -> std::optional<BinId> {
    for (Count b = group * k; b < (group + 1) * k; ++b)
      if (state.bin(static_cast<BinId>(b)) == 0) return static_cast<BinId>(b);
    return std::nullopt;
  };
  for (Count ball = 0; ball < n; ++ball) {
    Count target_group = 0;
    std::optional<BinId> target;
    while (target_group < layout.groups && !(target = free_bin(target_group))) ++target_group;
    if (!target) throw CapacityError("grouped strategy ran out of groups");
    ShuffleOp op;
    op.collected.push_back(*target);
    Count pool = 1;
    for (Count b = 0; b < target_group * k; ++b) {
      if (state.bin(static_cast<BinId>(b)) == 0) continue;
      op.collected.push_back(static_cast<BinId>(b));
      pool += state.bin(static_cast<BinId>(b));
    }
    op.allocation = {pool};
    run.total_cost += pool;
    state = apply_shuffle(state, op);
    run.ops.push_back(std::move(op));
  }
  return run;
}

// Bin i flushes into bin i+1 once it reaches thresholds[i]. The flush is
// folded into the arrival: the ball plus b_1..b_j are merged into b_j, where
// j is how far the cascade reaches.
StrategyRun run_cascade(Count n, Count t) {
  const auto thresholds = cascade_thresholds(n, t);
  StrategyRun run;
  GameState state(static_cast<std::size_t>(t));
  for (Count ball = 0; ball < n; ++ball) {
    Count pool = state.bin(0) + 1;
    std::size_t j = 0;
    while (j + 1 < static_cast<std::size_t>(t) && pool >= thresholds[j]) {
      ++j;
      pool += state.bin(j);
    }
    ShuffleOp op;
    op.collected.push_back(j);
    for (std::size_t i = 0; i < j; ++i) op.collected.push_back(i);
    op.allocation = {pool};
    run.total_cost += pool;
    state = apply_shuffle(state, op);
    run.ops.push_back(std::move(op));
  }
  return run;
}

}  // namespace

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::naive_single_bin: return "naive_single_bin";
    case StrategyKind::greedy_smallest_bin: return "greedy_smallest_bin";
    case StrategyKind::grouped_geometric: return "grouped_geometric";
    case StrategyKind::cascade_merge: return "cascade_merge";
  }
  return "unknown";
}

StrategyKind parse_strategy(std::string_view name) {
  if (name == "naive" || name == "naive_single_bin") return StrategyKind::naive_single_bin;
  if (name == "greedy" || name == "greedy_smallest_bin") return StrategyKind::greedy_smallest_bin;
  if (name == "grouped" || name == "grouped_geometric") return StrategyKind::grouped_geometric;
  if (name == "cascade" || name == "cascade_merge") return StrategyKind::cascade_merge;
  throw ValidationError("strategy", "unknown strategy '" + std::string(name) + "'");
}

bool grouped_applicable(Count n, Count t) {
  if (n <= 1) return t >= 1;
  if (t >= 126) return true;
  return (u128{1} << t) >= static_cast<u128>(n) * static_cast<u128>(n);
}

void validate(const StrategyConfig& cfg) {
  std::vector<FieldError> fields;
  if (cfg.n < 1) fields.push_back({"n", "must be >= 1"});
  if (cfg.t < 1) fields.push_back({"t", "must be >= 1"});
  if (!fields.empty()) throw ValidationError(std::move(fields));
  if (cfg.kind == StrategyKind::grouped_geometric && !grouped_applicable(cfg.n, cfg.t))
    throw ApplicabilityError("grouped_geometric needs t >= 2 log2 n (n=" + std::to_string(cfg.n) +
                             ", t=" + std::to_string(cfg.t) + ")");
}

GroupedLayout grouped_layout(Count n, Count t) {
  GroupedLayout layout;
  if (n <= 1) {
    layout.log_base = 2;
    layout.groups = 1;
  } else {
    const Count log2n = ceil_log(2, n);
    layout.log_base = std::max<Count>(2, t / log2n);
    layout.groups = ceil_log(layout.log_base, n);
  }
  layout.bins_per_group = t / layout.groups;
  const u128 cap = saturating_pow(layout.bins_per_group + 1, layout.groups);
  layout.capacity = cap >= static_cast<u128>(std::numeric_limits<Count>::max())
                        ? std::numeric_limits<Count>::max()
                        : static_cast<Count>(cap) - 1;
  return layout;
}

std::vector<Count> cascade_thresholds(Count n, Count t) {
  std::vector<Count> out;
  out.reserve(static_cast<std::size_t>(t));
  for (Count i = 1; i <= t; ++i) {
    const long double approx =
        std::pow(static_cast<long double>(n), static_cast<long double>(i) / static_cast<long double>(t));
    Count c = std::max<Count>(1, static_cast<Count>(std::floor(approx)));
    while (c > 1 && power_at_least(c - 1, t, n, i)) --c;
    while (!power_at_least(c, t, n, i)) ++c;
    out.push_back(c);
  }
  return out;
}

StrategyRun run_strategy(const StrategyConfig& cfg) {
  validate(cfg);
  switch (cfg.kind) {
    case StrategyKind::naive_single_bin: return run_naive(cfg.n);
    case StrategyKind::greedy_smallest_bin: return run_greedy(cfg.n, cfg.t);
    case StrategyKind::grouped_geometric: return run_grouped(cfg.n, cfg.t);
    case StrategyKind::cascade_merge: return run_cascade(cfg.n, cfg.t);
  }
  throw ValidationError("strategy", "unknown strategy");
}

double strategy_cost_bound(const StrategyConfig& cfg) {
  const double n = static_cast<double>(cfg.n);
  const double t = static_cast<double>(cfg.t);
  switch (cfg.kind) {
    case StrategyKind::naive_single_bin: return n * (n + 1) / 2;
    case StrategyKind::greedy_smallest_bin: return n + n * (n - 1) / (2 * t);
    case StrategyKind::grouped_geometric: {
      const auto layout = grouped_layout(cfg.n, cfg.t);
      return n * std::log(n) / std::log(static_cast<double>(layout.log_base));
    }
    case StrategyKind::cascade_merge: return t * std::pow(n, 1 + 1 / t);
  }
  return 0;
}

double corrected_cost_bound(const StrategyConfig& cfg) {
  switch (cfg.kind) {
    case StrategyKind::grouped_geometric:
      return static_cast<double>(cfg.n) * static_cast<double>(grouped_layout(cfg.n, cfg.t).groups + 1);
    case StrategyKind::cascade_merge: return 4 * strategy_cost_bound(cfg);
    default: return strategy_cost_bound(cfg);
  }
}

}  // namespace shufflab
