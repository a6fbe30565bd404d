#include "shufflab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>
#include <unordered_map>

#include "shufflab/error.hpp"

namespace shufflab {

namespace {

// A canonical state is at most 8 bin sizes below 256, largest first, packed
// one per byte.
using Packed = std::uint64_t;

Packed pack(const std::vector<Count>& sizes_desc) {
  Packed p = 0;
  for (std::size_t i = 0; i < sizes_desc.size(); ++i)
    p |= static_cast<Packed>(sizes_desc[i]) << (8 * i);
  return p;
}

std::vector<Count> unpack(Packed p) {
  std::vector<Count> out;
  while (p != 0) {
    out.push_back(static_cast<Count>(p & 0xff));
    p >>= 8;
  }
  return out;
}

struct Node {
  Count cost = 0;
  Packed pred = 0;
  Packed collected = 0;   // sizes taken from the predecessor
  Packed allocation = 0;  // parts handed back out
};

using Layer = std::unordered_map<Packed, Node>;

// Calls visit(collected_sizes, rest) for every distinct sub-multiset of a
// descending size list.
void for_each_submultiset(const std::vector<Count>& sizes,
                          const std::function<void(const std::vector<Count>&,
                                                   const std::vector<Count>&)>& visit) {
  std::vector<Count> values;
  std::vector<int> counts;
  for (Count s : sizes) {
    if (!values.empty() && values.back() == s) {
      ++counts.back();
    } else {
      values.push_back(s);
      counts.push_back(1);
    }
  }
  std::vector<int> take(values.size(), 0);
  std::vector<Count> collected;
  std::vector<Count> rest;
  while (true) {
    collected.clear();
    rest.clear();
    for (std::size_t i = 0; i < values.size(); ++i) {
      collected.insert(collected.end(), static_cast<std::size_t>(take[i]), values[i]);
      rest.insert(rest.end(), static_cast<std::size_t>(counts[i] - take[i]), values[i]);
    }
    visit(collected, rest);
    std::size_t i = 0;
    while (i < values.size() && take[i] == counts[i]) take[i++] = 0;
    if (i == values.size()) break;
    ++take[i];
  }
}

// Partitions of `total` into at most `max_parts` parts, parts descending.
void for_each_partition(Count total, std::size_t max_parts,
                        const std::function<void(const std::vector<Count>&)>& visit) {
  std::vector<Count> parts;
  std::function<void(Count, Count)> rec = [&](Count remaining, Count cap) {
    if (remaining == 0) {
      visit(parts);
      return;
    }
    if (parts.size() == max_parts) return;
    for (Count p = std::min(cap, remaining); p >= 1; --p) {
      parts.push_back(p);
      rec(remaining - p, p);
      parts.pop_back();
    }
  };
  rec(total, total);
}

std::vector<Count> merge_desc(std::vector<Count> a, const std::vector<Count>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end(), std::greater<>());
  return a;
}

std::vector<Packed> sorted_keys(const Layer& layer) {
  std::vector<Packed> keys;
  keys.reserve(layer.size());
  for (const auto& [k, _] : layer) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  return keys;
}

struct Search {
  std::vector<Layer> layers;
  std::vector<Count> best;  // best[m] = min cost over layer m
};

Search layered_search(Count n, Count t, bool allow_splits, std::size_t budget) {
  Search s;
  s.layers.resize(static_cast<std::size_t>(n) + 1);
  s.layers[0][0] = Node{};
  s.best.push_back(0);
  std::size_t states = 1;
  for (Count m = 0; m < n; ++m) {
    const Layer& cur = s.layers[static_cast<std::size_t>(m)];
    Layer& next = s.layers[static_cast<std::size_t>(m) + 1];
    for (Packed key : sorted_keys(cur)) {
      const Count base = cur.at(key).cost;
      const auto sizes = unpack(key);
      for_each_submultiset(sizes, [&](const std::vector<Count>& taken, const std::vector<Count>& rest) {
        Count pool = 1;
        for (Count v : taken) pool += v;
        const std::size_t free_bins = static_cast<std::size_t>(t) - rest.size();
        if (free_bins == 0) return;
        auto relax = [&](const std::vector<Count>& parts) {
          const Packed nk = pack(merge_desc(rest, parts));
          const Count cost = base + pool;
          auto [it, inserted] = next.try_emplace(nk);
          if (inserted || cost < it->second.cost) {
            it->second = Node{cost, key, pack(taken), pack(parts)};
            if (inserted && ++states > budget)
              throw BudgetError("oracle state table exceeded budget of " + std::to_string(budget));
          }
        };
        if (allow_splits) {
          for_each_partition(pool, free_bins, relax);
        } else {
          relax({pool});
        }
      });
    }
    Count layer_best = std::numeric_limits<Count>::max();
    for (const auto& [_, node] : next) layer_best = std::min(layer_best, node.cost);
    s.best.push_back(layer_best);
  }
  return s;
}

OracleResult extract(const Search& s, Count n, Count t) {
  const Layer& last = s.layers[static_cast<std::size_t>(n)];
  Packed end = 0;
  Count best = std::numeric_limits<Count>::max();
  for (Packed key : sorted_keys(last)) {
    if (last.at(key).cost < best) {
      best = last.at(key).cost;
      end = key;
    }
  }
  std::vector<const Node*> path;
  Packed key = end;
  for (Count m = n; m > 0; --m) {
    const Node& node = s.layers[static_cast<std::size_t>(m)].at(key);
    path.push_back(&node);
    key = node.pred;
  }
  std::reverse(path.begin(), path.end());

  OracleResult result{n, t, best, {}};
  GameState state(static_cast<std::size_t>(t));
  for (const Node* node : path) {
    auto op = resolve_by_sizes(state, unpack(node->collected), unpack(node->allocation));
    state = apply_shuffle(state, op);
    result.witness.push_back(std::move(op));
  }
  return result;
}

void guard(Count n, Count t, Count max_n, Count max_t, std::string_view what) {
  std::vector<FieldError> fields;
  if (n < 1) fields.push_back({"n", "must be >= 1"});
  if (t < 1) fields.push_back({"t", "must be >= 1"});
  if (!fields.empty()) throw ValidationError(std::move(fields));
  if (n > max_n || t > max_t)
    throw BudgetError(std::string(what) + " is limited to n <= " + std::to_string(max_n) +
                      ", t <= " + std::to_string(max_t));
}

std::size_t budget_of(const OracleOptions& options) {
  return options.max_states ? options.max_states : default_state_budget();
}

double log2l_(double x) { return std::log2(x); }

}  // namespace

std::size_t default_state_budget() {
  if (const char* env = std::getenv("SHUFFLAB_BUDGET")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 20'000'000;
}

OracleResult optimal_cost_merging(Count n, Count t, OracleOptions options) {
  guard(n, t, kMergingMaxBalls, kMergingMaxBins, "optimal_cost_merging");
  return extract(layered_search(n, t, false, budget_of(options)), n, t);
}

std::vector<Count> optimal_cost_table(Count n_max, Count t, OracleOptions options) {
  guard(std::max<Count>(n_max, 1), t, kMergingMaxBalls, kMergingMaxBins, "optimal_cost_table");
  return layered_search(n_max, t, false, budget_of(options)).best;
}

OracleResult optimal_cost_full(Count n, Count t, OracleOptions options) {
  guard(n, t, kFullMaxBalls, kFullMaxBins, "optimal_cost_full");
  return extract(layered_search(n, t, true, budget_of(options)), n, t);
}

double recurrence_lower_bound(Count n, Count t, std::span<const Count> f_prev) {
  if (n < 1 || t < 1) throw ValidationError("n,t", "must be >= 1");
  if (f_prev.size() < static_cast<std::size_t>(n) + 1)
    throw ValidationError("f_prev", "needs f_t(m) for every m <= n");
  const double inv_t = 1.0 / static_cast<double>(t);
  const auto N = static_cast<std::size_t>(n);
  constexpr double inf = std::numeric_limits<double>::infinity();
  // prev[r]: best sum over the last j parts, which occupy reverse positions 1..j
  // and total r balls.
  std::vector<double> prev(N + 1, inf), cur(N + 1, inf);
  for (std::size_t r = 1; r <= N; ++r)
    prev[r] = static_cast<double>(f_prev[r]) + (1.0 - inv_t) * static_cast<double>(r);
  double best = prev[N];
  for (std::size_t j = 2; j <= N; ++j) {
    std::fill(cur.begin(), cur.end(), inf);
    for (std::size_t r = j; r <= N; ++r) {
      for (std::size_t x = 1; x + (j - 1) <= r; ++x) {
        const double below = prev[r - x];
        if (below == inf) continue;
        const double v = below + static_cast<double>(f_prev[x]) +
                         (static_cast<double>(j) - inv_t) * static_cast<double>(x);
        cur[r] = std::min(cur[r], v);
      }
    }
    best = std::min(best, cur[N]);
    std::swap(prev, cur);
  }
  return best - 2.0 * static_cast<double>(n);
}

bool capacity_bound_holds(Count n, Count t, Count total_cost) {
  if (n < 1 || t < 1) throw ValidationError("n,t", "must be >= 1");
  if (total_cost < n) throw ValidationError("total_cost", "must be >= n");
  const long double lhs = std::log(static_cast<long double>(n));
  const long double rhs = 2.0L * static_cast<long double>(total_cost) / static_cast<long double>(n) *
                          std::log(2.0L * static_cast<long double>(t));
  return lhs < rhs;
}

bool satisfies_core_constraints(const BoundParams& p) {
  return p.c1 <= 0.25 && p.c2 <= 2.0 / 3.0 && p.c0 < p.c2;
}

std::vector<ConstraintCheck> check_constraints(const BoundParams& p) {
  const double e = std::exp(1.0);
  std::vector<ConstraintCheck> out;
  out.push_back({"c1 <= 1/2, c2 <= 1", p.c1 <= 0.5 && p.c2 <= 1.0});
  out.push_back({"c1 <= 1/4, c2 <= 2/3", p.c1 <= 0.25 && p.c2 <= 2.0 / 3.0});
  out.push_back({"c0 < c2", p.c0 < p.c2});
  out.push_back({"(4 c1 c2 e)^(1/(1-c2)) <= e^(1/c0 - 1/c2)",
                 p.c2 < 1 && std::pow(4 * p.c1 * p.c2 * e, 1 / (1 - p.c2)) <=
                                 std::exp(1 / p.c0 - 1 / p.c2)});
  out.push_back({"2 < c1 e^(c2/c0)", 2 < p.c1 * std::exp(p.c2 / p.c0)});
  const double ratio = p.c2 * p.alpha / p.c0 - 1;
  out.push_back({"e^(1/alpha) <= (1/(2 c1 c2))^(1/(c2 alpha/c0 - 1))",
                 ratio > 0 && std::exp(1 / p.alpha) <= std::pow(1 / (2 * p.c1 * p.c2), 1 / ratio)});
  const double denom = 2 * p.c0 - p.c0 * p.c0 / p.alpha;
  out.push_back({"2 < (c1 c0/alpha) e^(c2/(2 c0 - c0^2/alpha))",
                 denom > 0 && 2 < p.c1 * p.c0 / p.alpha * std::exp(p.c2 / denom)});
  return out;
}

TheoremBounds theorem_bounds(Count n, Count t, const BoundParams& p) {
  if (n < 1 || t < 1) throw ValidationError("n,t", "must be >= 1");
  const double nd = static_cast<double>(n);
  const double td = static_cast<double>(t);
  TheoremBounds b;
  b.bound_i = nd * log2l_(nd) / (2.0 * log2l_(2.0 * td));
  const double ln_n = std::log(nd);
  if (td <= p.c0 * ln_n) {
    b.bound_ii = p.c1 * td * std::pow(nd, 1 + p.c2 / td) - 2 * td * nd;
  } else {
    b.second_phase = true;
    const double t0 = std::floor(p.c0 * ln_n);
    const double h = t0 + p.c0 * (td - t0) / p.alpha;
    b.bound_ii = p.c1 * t0 * std::pow(nd, 1 + p.c2 / h) - 2 * td * nd;
  }
  return b;
}

std::string_view to_string(TradeoffClass c) {
  switch (c) {
    case TradeoffClass::consistent: return "consistent";
    case TradeoffClass::violates_branch_1: return "violates_branch_1";
    case TradeoffClass::violates_branch_2: return "violates_branch_2";
    case TradeoffClass::violates_both: return "violates_both";
  }
  return "unknown";
}

TradeoffClass tradeoff_region(double q, double u, double block_size, double alpha) {
  if (q < 1 || u < 1 || block_size < 1)
    throw ValidationError("q,u,B", "must be >= 1");
  const double log_b = std::log2(block_size);
  const bool branch1_applies = q < alpha * std::log(block_size);
  const bool v1 = branch1_applies && q * std::log2(u / q) < log_b;
  const bool v2 = u * std::log2(q) < log_b;
  if (v1 && v2) return TradeoffClass::violates_both;
  if (v1) return TradeoffClass::violates_branch_1;
  if (v2) return TradeoffClass::violates_branch_2;
  return TradeoffClass::consistent;
}

}  // namespace shufflab
