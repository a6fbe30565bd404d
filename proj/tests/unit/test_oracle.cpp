#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>

#include "shufflab/error.hpp"
#include "shufflab/oracle.hpp"
#include "shufflab/strategies.hpp"

using namespace shufflab;

namespace {

// Exhaustive search over labelled bins: every subset of bins to collect and
// every way to hand the pool back out to the collected and empty bins.
Count brute_force(Count n, Count t) {
  std::map<std::pair<std::vector<Count>, Count>, Count> memo;
  std::function<Count(std::vector<Count>, Count)> best = [&](std::vector<Count> bins, Count left) -> Count {
    if (left == 0) return 0;
    auto key_bins = bins;
    std::sort(key_bins.begin(), key_bins.end());
    const auto key = std::make_pair(key_bins, left);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    Count result = std::numeric_limits<Count>::max();
    const auto T = static_cast<std::size_t>(t);
    for (unsigned mask = 0; mask < (1U << T); ++mask) {
      Count pool = 1;
      std::vector<std::size_t> free_bins;
      std::vector<Count> rest = bins;
      for (std::size_t b = 0; b < T; ++b) {
        if (mask & (1U << b)) {
          pool += bins[b];
          rest[b] = 0;
        }
        if ((mask & (1U << b)) || bins[b] == 0) free_bins.push_back(b);
      }
      std::function<void(std::size_t, Count)> assign = [&](std::size_t i, Count remaining) {
        if (i == free_bins.size()) {
          if (remaining == 0) result = std::min(result, pool + best(rest, left - 1));
          return;
        }
        for (Count c = 0; c <= remaining; ++c) {
          rest[free_bins[i]] = c;
          assign(i + 1, remaining - c);
        }
        rest[free_bins[i]] = 0;
      };
      assign(0, pool);
    }
    memo[key] = result;
    return result;
  };
  return best(std::vector<Count>(static_cast<std::size_t>(t), 0), n);
}

// Direct minimum over all compositions of n.
double recurrence_by_compositions(Count n, Count t, const std::vector<Count>& f) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<Count> parts;
  std::function<void(Count)> rec = [&](Count remaining) {
    if (remaining == 0) {
      const auto k = static_cast<double>(parts.size());
      double v = -2.0 * static_cast<double>(n);
      for (std::size_t i = 0; i < parts.size(); ++i)
        v += static_cast<double>(f[static_cast<std::size_t>(parts[i])]) +
             (k - static_cast<double>(i) - 1.0 / static_cast<double>(t)) * static_cast<double>(parts[i]);
      best = std::min(best, v);
      return;
    }
    for (Count x = 1; x <= remaining; ++x) {
      parts.push_back(x);
      rec(remaining - x);
      parts.pop_back();
    }
  };
  rec(n);
  return best;
}

}  // namespace

TEST_CASE("one bin costs n(n+1)/2") {
  for (Count n = 1; n <= 12; ++n) CHECK(optimal_cost_merging(n, 1).optimal_cost == n * (n + 1) / 2);
}

TEST_CASE("four balls in two bins cost 6") {
  CHECK(brute_force(4, 2) == 6);
  CHECK(optimal_cost_merging(4, 2).optimal_cost == 6);
}

TEST_CASE("oracle agrees with exhaustive search on labelled bins") {
  for (Count t = 1; t <= 3; ++t) {
    for (Count n = 1; n <= 6; ++n) {
      const Count expect = brute_force(n, t);
      CHECK(optimal_cost_merging(n, t).optimal_cost == expect);
      CHECK(optimal_cost_full(n, t).optimal_cost == expect);
    }
  }
}

TEST_CASE("optimal cost tables for two to four bins") {
  // Values from an independent prototype solver.
  CHECK(optimal_cost_table(11, 2) == std::vector<Count>{0, 1, 2, 4, 6, 8, 11, 14, 17, 20, 24, 28});
  CHECK(optimal_cost_table(11, 3) == std::vector<Count>{0, 1, 2, 3, 5, 7, 9, 11, 13, 15, 18, 21});
  CHECK(optimal_cost_table(11, 4) == std::vector<Count>{0, 1, 2, 3, 4, 6, 8, 10, 12, 14, 16, 18});
}

TEST_CASE("table entries match single-cell runs") {
  const auto table = optimal_cost_table(15, 3);
  for (Count n = 1; n <= 15; ++n) CHECK(table[static_cast<std::size_t>(n)] == optimal_cost_merging(n, 3).optimal_cost);
}

TEST_CASE("witnesses replay to the optimal cost") {
  for (Count t = 1; t <= 4; ++t) {
    for (Count n = 1; n <= 14; ++n) {
      const auto r = optimal_cost_merging(n, t);
      const auto rep = replay(static_cast<std::size_t>(t), r.witness);
      CHECK(rep.ledger.total() == r.optimal_cost);
      CHECK(rep.state.balls_placed() == n);
      for (const auto& op : r.witness) CHECK(op.is_merging());
    }
  }
  const auto full = optimal_cost_full(7, 3);
  CHECK(replay(3, full.witness).ledger.total() == full.optimal_cost);
}

TEST_CASE("splitting never beats merging at desk scale") {
  for (Count t = 1; t <= 3; ++t)
    for (Count n = 1; n <= 7; ++n)
      CHECK(optimal_cost_full(n, t).optimal_cost == optimal_cost_merging(n, t).optimal_cost);
}

TEST_CASE("optimal cost is monotone in n and in t") {
  for (Count t = 1; t <= 5; ++t) {
    const auto f = optimal_cost_table(24, t);
    const auto g = optimal_cost_table(24, t + 1);
    for (std::size_t n = 1; n < f.size(); ++n) {
      CHECK(f[n] > f[n - 1]);
      CHECK(g[n] <= f[n]);
      CHECK(f[n] >= static_cast<Count>(n));
    }
  }
}

TEST_CASE("oracle beats or ties every strategy") {
  for (Count t = 1; t <= 5; ++t) {
    const auto f = optimal_cost_table(30, t);
    for (Count n = 1; n <= 30; ++n) {
      for (auto kind : {StrategyKind::naive_single_bin, StrategyKind::greedy_smallest_bin,
                        StrategyKind::grouped_geometric, StrategyKind::cascade_merge}) {
        if (kind == StrategyKind::grouped_geometric && !grouped_applicable(n, t)) continue;
        CHECK(f[static_cast<std::size_t>(n)] <= run_strategy({kind, n, t}).total_cost);
      }
    }
  }
}

TEST_CASE("guards and budget") {
  CHECK_THROWS_AS(optimal_cost_merging(41, 2), BudgetError);
  CHECK_THROWS_AS(optimal_cost_merging(5, 9), BudgetError);
  CHECK_THROWS_AS(optimal_cost_full(11, 2), BudgetError);
  CHECK_THROWS_AS(optimal_cost_merging(0, 0), ValidationError);
  CHECK_THROWS_AS(optimal_cost_merging(30, 5, OracleOptions{100}), BudgetError);
}

TEST_CASE("state budget comes from the environment") {
  ::setenv("SHUFFLAB_BUDGET", "50", 1);
  CHECK(default_state_budget() == 50);
  CHECK_THROWS_AS(optimal_cost_merging(20, 4), BudgetError);
  ::setenv("SHUFFLAB_BUDGET", "junk", 1);
  CHECK(default_state_budget() == 20'000'000);
  ::unsetenv("SHUFFLAB_BUDGET");
}

TEST_CASE("recurrence DP equals the direct minimum over compositions") {
  for (Count t = 1; t <= 3; ++t) {
    const auto f = optimal_cost_table(10, t);
    for (Count n = 1; n <= 10; ++n)
      CHECK(recurrence_lower_bound(n, t, f) == doctest::Approx(recurrence_by_compositions(n, t, f)));
  }
}

TEST_CASE("recurrence lower-bounds the next bin count") {
  for (Count t = 1; t <= 3; ++t) {
    const auto f = optimal_cost_table(20, t);
    const auto next = optimal_cost_table(20, t + 1);
    for (Count n = 1; n <= 20; ++n)
      CHECK(recurrence_lower_bound(n, t, f) <= static_cast<double>(next[static_cast<std::size_t>(n)]) + 1e-9);
  }
}

TEST_CASE("capacity inequality") {
  for (Count t = 1; t <= 5; ++t) {
    const auto f = optimal_cost_table(30, t);
    for (Count n = 1; n <= 30; ++n) CHECK(capacity_bound_holds(n, t, f[static_cast<std::size_t>(n)]));
  }
  // One ball per arrival would need 100 < 2^2.
  CHECK_FALSE(capacity_bound_holds(100, 1, 100));
  CHECK_THROWS_AS(capacity_bound_holds(10, 2, 5), ValidationError);
}

TEST_CASE("theorem bounds") {
  const auto b = theorem_bounds(16, 2);
  CHECK(b.bound_i == doctest::Approx(16.0 * 4.0 / (2.0 * 2.0)));
  CHECK(b.second_phase);
  BoundParams wide;
  wide.c0 = 0.5;
  const auto first = theorem_bounds(1 << 20, 2, wide);
  CHECK_FALSE(first.second_phase);
  const double n = 1 << 20;
  CHECK(first.bound_ii == doctest::Approx(0.25 * 2 * std::pow(n, 1 + 0.25 / 2) - 4 * n));
  const auto second = theorem_bounds(1 << 20, 10, wide);
  CHECK(second.second_phase);
  const double t0 = std::floor(0.5 * std::log(n));
  const double h = t0 + 0.5 * (10 - t0);
  CHECK(second.bound_ii == doctest::Approx(0.25 * t0 * std::pow(n, 1 + 0.25 / h) - 20 * n));
}

TEST_CASE("default constants satisfy all but one constraint") {
  const auto checks = check_constraints(BoundParams{});
  REQUIRE(checks.size() == 7);
  CHECK(satisfies_core_constraints(BoundParams{}));
  for (std::size_t i = 0; i < checks.size(); ++i) CHECK(checks[i].satisfied == (i != 5));
}

TEST_CASE("tradeoff classification") {
  CHECK(tradeoff_region(1, 1, 1024) == TradeoffClass::violates_both);
  CHECK(tradeoff_region(10, 10, 1024) == TradeoffClass::consistent);
  CHECK(tradeoff_region(1024, 1, 1024) == TradeoffClass::consistent);
  CHECK(tradeoff_region(2, 2, 1024) == TradeoffClass::violates_both);
  CHECK(tradeoff_region(2, 20, 1024) == TradeoffClass::violates_branch_1);
  CHECK(tradeoff_region(8, 3, 1024) == TradeoffClass::violates_branch_2);
  CHECK(tradeoff_region(4, 4, 1024) == TradeoffClass::violates_both);
  CHECK(to_string(TradeoffClass::violates_both) == "violates_both");
}
