#include "shufflab/index_sim.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <set>
#include <string>

#include "shufflab/error.hpp"
#include "shufflab/rng.hpp"
#include "shufflab/set_cover.hpp"

namespace shufflab {

std::string_view to_string(Structure s) {
  switch (s) {
    case Structure::sorted_run_baseline: return "sorted_run_baseline";
    case Structure::lsm_logarithmic: return "lsm_logarithmic";
    case Structure::stepped_merge: return "stepped_merge";
  }
  return "unknown";
}

Structure parse_structure(std::string_view name) {
  if (name == "baseline" || name == "sorted" || name == "sorted_run_baseline")
    return Structure::sorted_run_baseline;
  if (name == "lsm" || name == "lsm_logarithmic") return Structure::lsm_logarithmic;
  if (name == "stepped" || name == "stepped_merge") return Structure::stepped_merge;
  throw ValidationError("structure", "unknown structure '" + std::string(name) + "'");
}

void validate(const IndexConfig& cfg) {
  std::vector<FieldError> fields;
  if (cfg.B < 1) fields.push_back({"B", "must be >= 1"});
  if (cfg.M < 0) fields.push_back({"M", "must be >= 0"});
  if (cfg.ell < 2 || cfg.ell > cfg.B) fields.push_back({"ell", "must satisfy 2 <= ell <= B"});
  if (!fields.empty()) throw ValidationError(std::move(fields));
}

namespace {

// Removes blocks that appear on both sides (with multiplicity) and prices
// what is left.
TransitionDelta price(std::vector<Block>& removed, std::vector<Block>& added) {
  std::sort(removed.begin(), removed.end());
  std::sort(added.begin(), added.end());
  std::size_t i = 0, j = 0, changed = 0;
  std::vector<Key> keys;
  auto take = [&](const Block& b) {
    keys.insert(keys.end(), b.begin(), b.end());
    ++changed;
  };
  while (i < removed.size() || j < added.size()) {
    if (j == added.size() || (i < removed.size() && removed[i] < added[j])) {
      take(removed[i++]);
    } else if (i == removed.size() || added[j] < removed[i]) {
      take(added[j++]);
    } else {
      ++i;
      ++j;
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return {static_cast<Count>(changed), static_cast<Count>(keys.size())};
}

}  // namespace

TransitionDelta transition_cost(const Snapshot& before, const Snapshot& after) {
  auto removed = before.blocks;
  auto added = after.blocks;
  return price(removed, added);
}

IndexSimulator::IndexSimulator(IndexConfig cfg) : cfg_(cfg) {
  validate(cfg_);
  if (cfg_.structure == Structure::sorted_run_baseline) levels_.resize(1);
}

std::size_t IndexSimulator::block_count() const noexcept {
  std::size_t n = 0;
  for (const auto& level : levels_)
    for (const auto& run : level) n += run.blocks.size();
  return n;
}

std::vector<std::size_t> IndexSimulator::runs_per_level() const {
  std::vector<std::size_t> out;
  for (const auto& level : levels_) out.push_back(level.size());
  return out;
}

Snapshot IndexSimulator::snapshot() const {
  Snapshot s;
  for (const auto& level : levels_)
    for (const auto& run : level) s.blocks.insert(s.blocks.end(), run.blocks.begin(), run.blocks.end());
  std::sort(s.blocks.begin(), s.blocks.end());
  s.memory = memory_;
  return s;
}

IndexSimulator::Run IndexSimulator::build_run(std::vector<Key> keys) const {
  Run run;
  run.keys = keys.size();
  const auto B = static_cast<std::size_t>(cfg_.B);
  for (std::size_t i = 0; i < keys.size(); i += B)
    run.blocks.emplace_back(keys.begin() + static_cast<std::ptrdiff_t>(i),
                            keys.begin() + static_cast<std::ptrdiff_t>(std::min(keys.size(), i + B)));
  return run;
}

std::vector<Key> IndexSimulator::drain_memory(Key key) {
  std::vector<Key> keys = std::move(memory_);
  memory_.clear();
  keys.insert(std::upper_bound(keys.begin(), keys.end(), key), key);
  return keys;
}

std::vector<Key> IndexSimulator::absorb(std::vector<Key> keys, Run& run, std::vector<Block>& removed) {
  std::vector<Key> flat;
  flat.reserve(run.keys);
  for (auto& b : run.blocks) {
    flat.insert(flat.end(), b.begin(), b.end());
    removed.push_back(std::move(b));
  }
  std::vector<Key> merged;
  merged.reserve(keys.size() + flat.size());
  std::merge(keys.begin(), keys.end(), flat.begin(), flat.end(), std::back_inserter(merged));
  return merged;
}

TransitionDelta IndexSimulator::settle(std::vector<Block> removed, std::vector<Block> added) {
  const auto delta = price(removed, added);
  transition_total_ += delta.blocks;
  element_total_ += delta.elements;
  return delta;
}

TransitionDelta IndexSimulator::insert(Key key) {
  if (!present_.insert(key).second)
    throw ValidationError("key", "key " + std::to_string(key) + " is already stored");
  switch (cfg_.structure) {
    case Structure::sorted_run_baseline: return insert_baseline(key);
    case Structure::lsm_logarithmic: return insert_lsm(key);
    case Structure::stepped_merge: return insert_stepped(key);
  }
  return {};
}

// One run of blocks; the block whose range takes the key is rewritten and
// split in two when it overflows. Memory is not used.
TransitionDelta IndexSimulator::insert_baseline(Key key) {
  auto& level = levels_.front();
  if (level.empty()) level.emplace_back();
  auto& run = level.front();
  ++run.keys;
  if (run.blocks.empty()) {
    run.blocks.push_back({key});
    return settle({}, {{key}});
  }
  auto it = std::upper_bound(run.blocks.begin(), run.blocks.end(), key,
                             [](Key k, const Block& b) { return k < b.front(); });
  if (it != run.blocks.begin()) --it;
  Block old = *it;
  Block grown = old;
  grown.insert(std::upper_bound(grown.begin(), grown.end(), key), key);
  if (grown.size() <= static_cast<std::size_t>(cfg_.B)) {
    *it = grown;
    return settle({std::move(old)}, {std::move(grown)});
  }
  const auto half = static_cast<std::ptrdiff_t>((grown.size() + 1) / 2);
  Block left(grown.begin(), grown.begin() + half);
  Block right(grown.begin() + half, grown.end());
  *it = left;
  run.blocks.insert(std::next(it), right);
  return settle({std::move(old)}, {std::move(left), std::move(right)});
}

// Level i holds at most one run of up to ell^i (M+1) keys. A full memory plus
// the arriving key is merged with levels 1..i into level i, for the smallest
// i whose capacity takes all of it.
TransitionDelta IndexSimulator::insert_lsm(Key key) {
  if (static_cast<Count>(memory_.size()) < cfg_.M) {
    memory_.insert(std::upper_bound(memory_.begin(), memory_.end(), key), key);
    return {};
  }
  std::vector<Key> keys = drain_memory(key);
  const double unit = static_cast<double>(cfg_.M + 1);
  double capacity = unit;
  std::size_t total = keys.size();
  std::size_t target = 0;
  while (true) {
    capacity *= static_cast<double>(cfg_.ell);
    if (target == levels_.size()) levels_.emplace_back();
    for (const auto& run : levels_[target]) total += run.keys;
    if (static_cast<double>(total) <= capacity) break;
    ++target;
  }
  std::vector<Block> removed;
  for (std::size_t i = 0; i <= target; ++i) {
    for (auto& run : levels_[i]) keys = absorb(std::move(keys), run, removed);
    levels_[i].clear();
  }
  Run fresh = build_run(std::move(keys));
  auto added = fresh.blocks;
  levels_[target].push_back(std::move(fresh));
  return settle(std::move(removed), std::move(added));
}

// Memory plus the arriving key becomes a new level-1 run; a level that
// reaches ell runs is merged into one run of the next level, cascading.
TransitionDelta IndexSimulator::insert_stepped(Key key) {
  if (static_cast<Count>(memory_.size()) < cfg_.M) {
    memory_.insert(std::upper_bound(memory_.begin(), memory_.end(), key), key);
    return {};
  }
  if (levels_.empty()) levels_.emplace_back();
  std::vector<Block> removed, added;
  Run flushed = build_run(drain_memory(key));
  added.insert(added.end(), flushed.blocks.begin(), flushed.blocks.end());
  levels_[0].push_back(std::move(flushed));
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (static_cast<Count>(levels_[i].size()) < cfg_.ell) break;
    std::vector<Key> keys;
    for (auto& run : levels_[i]) keys = absorb(std::move(keys), run, removed);
    levels_[i].clear();
    if (i + 1 == levels_.size()) levels_.emplace_back();
    Run fresh = build_run(std::move(keys));
    added.insert(added.end(), fresh.blocks.begin(), fresh.blocks.end());
    levels_[i + 1].push_back(std::move(fresh));
  }
  return settle(std::move(removed), std::move(added));
}

QueryResult IndexSimulator::range_query(Key lo, Key hi) const {
  if (lo > hi) throw ValidationError("range", "lo must be <= hi");
  QueryResult out;
  std::vector<std::vector<Key>> hits;
  for (const auto& level : levels_) {
    for (const auto& run : level) {
      auto it = std::partition_point(run.blocks.begin(), run.blocks.end(),
                                     [lo](const Block& b) { return b.back() < lo; });
      for (; it != run.blocks.end() && it->front() <= hi; ++it) {
        auto first = std::lower_bound(it->begin(), it->end(), lo);
        auto last = std::upper_bound(first, it->end(), hi);
        if (first != last) hits.emplace_back(first, last);
      }
    }
  }
  std::vector<Key> disk;
  for (const auto& h : hits) disk.insert(disk.end(), h.begin(), h.end());
  std::sort(disk.begin(), disk.end());
  const std::size_t hit_total = disk.size();
  disk.erase(std::unique(disk.begin(), disk.end()), disk.end());
  out.disk_keys = static_cast<Count>(disk.size());
  if (hit_total == disk.size()) {
    // Candidate blocks are disjoint on the answer, so each is needed.
    out.blocks_used = static_cast<Count>(hits.size());
  } else {
    std::vector<std::vector<std::size_t>> sets;
    for (const auto& h : hits) {
      std::vector<std::size_t> s;
      for (Key k : h)
        s.push_back(static_cast<std::size_t>(std::lower_bound(disk.begin(), disk.end(), k) - disk.begin()));
      sets.push_back(std::move(s));
    }
    const auto cover = min_set_cover(disk.size(), sets);
    out.blocks_used = static_cast<Count>(cover.size);
    out.exact = cover.exact;
  }
  auto mfirst = std::lower_bound(memory_.begin(), memory_.end(), lo);
  auto mlast = std::upper_bound(mfirst, memory_.end(), hi);
  std::merge(disk.begin(), disk.end(), mfirst, mlast, std::back_inserter(out.keys));
  return out;
}

WorkloadRun run_workload(const IndexConfig& cfg, std::span<const Key> keys,
                         std::span<const std::pair<Key, Key>> queries, const WorkloadOptions& options) {
  IndexSimulator sim(cfg);
  Rng rng(options.seed);
  WorkloadRun out;
  const Count every = options.query_every < 0 ? cfg.B : options.query_every;
  std::set<Key> stored;
  std::vector<Key> inserted;
  inserted.reserve(keys.size());
  std::size_t next_query = 0;
  Count blocks_sum = 0, units_sum = 0;
  IndexMetrics& m = out.metrics;

  auto execute = [&](Key lo, Key hi) {
    const auto r = sim.range_query(lo, hi);
    if (options.check_queries) {
      std::vector<Key> expect(stored.lower_bound(lo), stored.upper_bound(hi));
      if (expect != r.keys) throw Error("range query [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                        "] disagrees with a full scan");
    }
    if (r.disk_keys == 0) return;
    const Count units = (r.disk_keys + cfg.B - 1) / cfg.B;
    ++m.queries;
    blocks_sum += r.blocks_used;
    units_sum += units;
    m.access_overhead = std::max(m.access_overhead, static_cast<double>(r.blocks_used) / static_cast<double>(units));
    m.access_overhead_exact = m.access_overhead_exact && r.exact;
  };
  auto sample = [&] {
    const Key lo = inserted[rng.below(inserted.size())];
    const auto k = rng.between(1, 2 * cfg.B);
    auto it = stored.find(lo);
    for (Count step = 1; step < k && std::next(it) != stored.end(); ++step) ++it;
    execute(lo, *it);
  };

  for (std::size_t i = 0; i < keys.size(); ++i) {
    sim.insert(keys[i]);
    stored.insert(keys[i]);
    inserted.push_back(keys[i]);
    const auto done = static_cast<Count>(i + 1);
    if (options.trace_every > 0 && done % options.trace_every == 0) out.trace.push_back(sim.snapshot());
    if (every > 0 && done % every == 0) {
      if (next_query < queries.size()) {
        execute(queries[next_query].first, queries[next_query].second);
        ++next_query;
      } else if (options.sample_queries) {
        sample();
      }
    }
  }
  for (; next_query < queries.size(); ++next_query) execute(queries[next_query].first, queries[next_query].second);

  m.N = static_cast<Count>(keys.size());
  m.blocks = static_cast<Count>(sim.block_count());
  m.transition_cost_total = sim.transition_total();
  m.element_transition_cost_total = sim.element_total();
  if (m.N > 0) {
    const double n = static_cast<double>(m.N);
    m.redundancy = static_cast<double>(cfg.B) * static_cast<double>(m.blocks) / n;
    m.update_cost_u = static_cast<double>(m.transition_cost_total) * static_cast<double>(cfg.B) / n;
    m.element_u = static_cast<double>(m.element_transition_cost_total) / n;
  }
  if (units_sum > 0) m.avg_blocks_per_unit = static_cast<double>(blocks_sum) / static_cast<double>(units_sum);
  return out;
}

std::vector<Key> shuffled_keys(Count n, std::uint64_t seed) {
  std::vector<Key> keys(static_cast<std::size_t>(std::max<Count>(n, 0)));
  for (std::size_t i = 0; i < keys.size(); ++i) keys[i] = static_cast<Key>(i + 1);
  Rng rng(seed);
  rng.shuffle(keys);
  return keys;
}

}  // namespace shufflab
