#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "shufflab/shuffle_core.hpp"

namespace shufflab {

enum class StrategyKind {
  naive_single_bin,     ///< every ball into bin 0
  greedy_smallest_bin,  ///< every ball into the smallest bin, no shuffling
  grouped_geometric,    ///< geometric groups of bins, for t >= 2 log2 n
  cascade_merge,        ///< bin i flushes into bin i+1 at ceil(n^(i/t)) balls
};

std::string_view to_string(StrategyKind kind);
/// Accepts the enum spellings plus the short names naive, greedy, grouped, cascade.
StrategyKind parse_strategy(std::string_view name);

struct StrategyConfig {
  StrategyKind kind = StrategyKind::naive_single_bin;
  Count n = 1;
  Count t = 1;
};

/// Throws ValidationError for non-positive n or t and ApplicabilityError when
/// grouped_geometric is asked for t < 2 log2 n.
void validate(const StrategyConfig& cfg);

/// True when t >= 2 log2 n, evaluated exactly as 2^t >= n^2.
bool grouped_applicable(Count n, Count t);

/// Rounded layout of the grouped strategy: log base x = max(2, t / ceil(log2 n)),
/// g = ceil(log_x n) groups of floor(t / g) bins. Group i (zero-based) owns
/// bins [i*k, (i+1)*k). A bin in group i holds (k+1)^i balls, so the layout
/// accommodates (k+1)^g - 1 balls.
struct GroupedLayout {
  Count log_base = 2;
  Count groups = 1;
  Count bins_per_group = 1;
  Count capacity = 0;  // saturates at INT64_MAX
};
GroupedLayout grouped_layout(Count n, Count t);

struct StrategyRun {
  std::vector<ShuffleOp> ops;
  Count total_cost = 0;
};

StrategyRun run_strategy(const StrategyConfig& cfg);

/// Closed-form cost of the construction as stated for exact powers:
/// n(n+1)/2 for naive, n + n(n-1)/(2t) for greedy, n log_x n for grouped and
/// t n^(1+1/t) for cascade.
double strategy_cost_bound(const StrategyConfig& cfg);

/// Bound that holds for every n after rounding: n(g+1) for grouped and
/// 4 t n^(1+1/t) for cascade; the other two are unchanged.
double corrected_cost_bound(const StrategyConfig& cfg);

/// ceil(n^(i/t)) for i = 1..t, computed without floating-point drift at exact
/// powers.
std::vector<Count> cascade_thresholds(Count n, Count t);

}  // namespace shufflab
