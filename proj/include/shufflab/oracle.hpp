#pragma once

// Exact optimal costs for the ball-shuffling game and the analytic bounds
// they are checked against.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shufflab/shuffle_core.hpp"

namespace shufflab {

struct OracleResult {
  Count n = 0;
  Count t = 0;
  Count optimal_cost = 0;
  std::vector<ShuffleOp> witness;
};

struct OracleOptions {
  /// Cap on DP states kept across all layers. Defaults to SHUFFLAB_BUDGET if
  /// set, else 20 million.
  std::size_t max_states = 0;
};

std::size_t default_state_budget();

inline constexpr Count kMergingMaxBalls = 40;
inline constexpr Count kMergingMaxBins = 8;
inline constexpr Count kFullMaxBalls = 10;
inline constexpr Count kFullMaxBins = 4;

/// Minimum cost over strategies that only merge (every allocation is one
/// bin). Forward DP over layers of sorted bin-size tuples; transitions take
/// every distinct sub-multiset of the current bins. n <= 40, t <= 8.
OracleResult optimal_cost_merging(Count n, Count t, OracleOptions options = {});

/// f_t(m) for m = 0..n_max from a single DP pass (f_t(0) = 0).
std::vector<Count> optimal_cost_table(Count n_max, Count t, OracleOptions options = {});

/// Minimum cost over all shuffles, splitting ones included: the collected
/// pool may be partitioned into any number of bins that fit. n <= 10, t <= 4.
OracleResult optimal_cost_full(Count n, Count t, OracleOptions options = {});

/// Minimum over k and compositions x_1 + ... + x_k = n of
///   sum_i f_t(x_i) + sum_i (k - i + 1 - 1/t) x_i - 2n,
/// a lower bound on f_{t+1}(n). `f_prev[m]` must hold f_t(m) for m <= n.
double recurrence_lower_bound(Count n, Count t, std::span<const Count> f_prev);

/// n < (2t)^(2 * total_cost / n): the capacity inequality an algorithm with
/// average cost total_cost/n per ball must satisfy.
bool capacity_bound_holds(Count n, Count t, Count total_cost);

struct BoundParams {
  double c0 = 0.01;
  double c1 = 0.25;
  double c2 = 0.25;
  double alpha = 1.0;
};

struct ConstraintCheck {
  std::string name;
  bool satisfied = false;
};

/// c1 <= 1/4, c2 <= 2/3 and c0 < c2.
bool satisfies_core_constraints(const BoundParams& params);

/// Every inequality the constant system places on (c0, c1, c2, alpha).
std::vector<ConstraintCheck> check_constraints(const BoundParams& params);

struct TheoremBounds {
  double bound_i = 0;   ///< n log2 n / (2 log2(2t))
  double bound_ii = 0;  ///< c1 t n^(1+c2/t) - 2tn, or its second-phase form
  bool second_phase = false;
};

/// The second form applies when t > c0 ln n: with t0 = floor(c0 ln n) and
/// h = t0 + c0 (t - t0) / alpha it is c1 t0 n^(1+c2/h) - 2tn.
TheoremBounds theorem_bounds(Count n, Count t, const BoundParams& params = {});

enum class TradeoffClass { consistent, violates_branch_1, violates_branch_2, violates_both };

std::string_view to_string(TradeoffClass c);

/// Classifies a (query, update) pair against the two tradeoff branches with
/// unit constants and base-2 logs. Branch 1, q log(u/q) >= log B, is only
/// enforced when q < alpha ln B; branch 2, u log q >= log B, always is.
TradeoffClass tradeoff_region(double q, double u, double block_size, double alpha = 1.0);

}  // namespace shufflab
