#include <doctest.h>

#include <cmath>

#include "shufflab/error.hpp"
#include "shufflab/strategies.hpp"

using namespace shufflab;

namespace {

// Grouped play is a base-(k+1) counter: ball m costs (k+1)^v where v is the
// number of trailing digits of m equal to k.
Count counter_cost(Count n, Count k) {
  Count total = 0;
  for (Count m = 0; m < n; ++m) {
    Count x = m, cost = 1;
    while (x % (k + 1) == k) {
      cost *= k + 1;
      x /= k + 1;
    }
    total += cost;
  }
  return total;
}

// Balls go round robin, so ball i lands on floor(i/t) others.
Count round_robin_cost(Count n, Count t) {
  Count total = 0;
  for (Count i = 0; i < n; ++i) total += i / t + 1;
  return total;
}

}  // namespace

TEST_CASE("naive cost is the triangular number") {
  CHECK(run_strategy({StrategyKind::naive_single_bin, 4, 1}).total_cost == 10);
  for (Count n = 1; n <= 30; ++n)
    CHECK(run_strategy({StrategyKind::naive_single_bin, n, 3}).total_cost == n * (n + 1) / 2);
}

TEST_CASE("greedy spreads balls evenly") {
  for (Count t = 1; t <= 6; ++t) {
    for (Count n = 1; n <= 40; ++n) {
      const StrategyConfig cfg{StrategyKind::greedy_smallest_bin, n, t};
      const auto cost = run_strategy(cfg).total_cost;
      CHECK(cost == round_robin_cost(n, t));
      CHECK(static_cast<double>(cost) <= strategy_cost_bound(cfg) + 1e-9);
    }
  }
}

TEST_CASE("greedy per-ball cost never exceeds ceil(n/t)") {
  const Count n = 37, t = 5;
  const auto run = run_strategy({StrategyKind::greedy_smallest_bin, n, t});
  const auto r = replay(static_cast<std::size_t>(t), run.ops);
  for (Count c : r.ledger.per_move_costs) CHECK(c <= (n + t - 1) / t);
}

TEST_CASE("cascade with one bin is the naive strategy") {
  for (Count n = 1; n <= 20; ++n) {
    const auto cascade = run_strategy({StrategyKind::cascade_merge, n, 1});
    const auto naive = run_strategy({StrategyKind::naive_single_bin, n, 1});
    CHECK(cascade.ops == naive.ops);
    CHECK(cascade.total_cost == naive.total_cost);
  }
}

TEST_CASE("cascade thresholds are exact at perfect powers") {
  CHECK(cascade_thresholds(16, 2) == std::vector<Count>{4, 16});
  CHECK(cascade_thresholds(27, 3) == std::vector<Count>{3, 9, 27});
  CHECK(cascade_thresholds(10, 2) == std::vector<Count>{4, 10});
  CHECK(cascade_thresholds(1, 3) == std::vector<Count>{1, 1, 1});
  CHECK(cascade_thresholds(1000000, 3) == std::vector<Count>{100, 10000, 1000000});
}

TEST_CASE("grouped strategy needs t >= 2 log2 n") {
  CHECK(grouped_applicable(16, 8));
  CHECK_FALSE(grouped_applicable(16, 7));
  CHECK_THROWS_AS(run_strategy({StrategyKind::grouped_geometric, 16, 7}), ApplicabilityError);
}

TEST_CASE("grouped strategy at n=16, t=8") {
  const StrategyConfig cfg{StrategyKind::grouped_geometric, 16, 8};
  const auto layout = grouped_layout(16, 8);
  CHECK(layout.log_base == 2);
  CHECK(layout.groups == 4);
  CHECK(layout.bins_per_group == 2);
  const auto run = run_strategy(cfg);
  CHECK(run.total_cost == counter_cost(16, 2));
  CHECK(run.total_cost <= 64);
  CHECK(strategy_cost_bound(cfg) == doctest::Approx(64.0));
}

TEST_CASE("grouped layout holds n balls wherever it applies") {
  for (Count n = 1; n <= 256; ++n) {
    for (Count t = 1; t <= 24; ++t) {
      if (!grouped_applicable(n, t)) continue;
      const auto layout = grouped_layout(n, t);
      CHECK(layout.bins_per_group >= 1);
      CHECK(layout.groups * layout.bins_per_group <= t);
      CHECK(layout.capacity >= n);
    }
  }
}

TEST_CASE("every strategy replays legally within its corrected bound") {
  const StrategyKind kinds[] = {StrategyKind::naive_single_bin, StrategyKind::greedy_smallest_bin,
                                StrategyKind::grouped_geometric, StrategyKind::cascade_merge};
  for (Count t = 1; t <= 16; ++t) {
    for (Count n = 1; n <= 256; n += (n < 32 ? 1 : 7)) {
      for (auto kind : kinds) {
        const StrategyConfig cfg{kind, n, t};
        if (kind == StrategyKind::grouped_geometric && !grouped_applicable(n, t)) continue;
        const auto run = run_strategy(cfg);
        const auto r = replay(kind == StrategyKind::naive_single_bin ? 1 : static_cast<std::size_t>(t), run.ops);
        CHECK(r.state.balls_placed() == n);
        CHECK(r.ledger.total() == run.total_cost);
        CHECK(static_cast<double>(run.total_cost) <= corrected_cost_bound(cfg) + 1e-9);
      }
      if (grouped_applicable(n, t)) {
        const auto g = grouped_layout(n, t);
        CHECK(run_strategy({StrategyKind::grouped_geometric, n, t}).total_cost == counter_cost(n, g.bins_per_group));
      }
    }
  }
}

TEST_CASE("strategy names parse in both spellings") {
  CHECK(parse_strategy("cascade") == StrategyKind::cascade_merge);
  CHECK(parse_strategy("grouped_geometric") == StrategyKind::grouped_geometric);
  CHECK(to_string(StrategyKind::greedy_smallest_bin) == "greedy_smallest_bin");
  CHECK_THROWS_AS(parse_strategy("fastest"), ValidationError);
}

TEST_CASE("validation lists every bad field") {
  try {
    validate({StrategyKind::naive_single_bin, 0, -1});
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.fields().size() == 2);
  }
}
