#pragma once

// Block-model simulator for dynamic one-dimensional range indexes.
//
// An index is a set of disk blocks of at most B keys plus a memory buffer of
// at most M keys. Inserts move the index from one snapshot to the next; the
// transition cost is the number of blocks that differ between the two, and
// a range query costs the fewest blocks that cover its disk-resident answer.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "shufflab/shuffle_core.hpp"

namespace shufflab {

using Key = std::int64_t;
using Block = std::vector<Key>;  // ascending

/// Blocks in lexicographic order, memory ascending.
struct Snapshot {
  std::vector<Block> blocks;
  std::vector<Key> memory;
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

enum class Structure { sorted_run_baseline, lsm_logarithmic, stepped_merge };

std::string_view to_string(Structure s);
/// Also accepts baseline, lsm and stepped.
Structure parse_structure(std::string_view name);

struct IndexConfig {
  Count B = 64;
  Count M = 0;
  Count ell = 2;
  Structure structure = Structure::lsm_logarithmic;
};

/// Throws ValidationError unless B >= 1, M >= 0 and 2 <= ell <= B.
void validate(const IndexConfig& cfg);

struct TransitionDelta {
  Count blocks = 0;    ///< blocks present on exactly one side
  Count elements = 0;  ///< distinct keys held by those blocks
};

/// Blocks are compared by content, so a block rewritten with the same keys
/// costs nothing.
TransitionDelta transition_cost(const Snapshot& before, const Snapshot& after);

struct QueryResult {
  std::vector<Key> keys;  ///< every stored key in [lo, hi], ascending
  Count disk_keys = 0;    ///< how many of them are not in memory
  Count blocks_used = 0;  ///< fewest blocks covering the disk-resident keys
  bool exact = true;      ///< false when the cover came from the greedy fallback
};

class IndexSimulator {
 public:
  explicit IndexSimulator(IndexConfig cfg);

  /// Throws ValidationError for a key that is already stored.
  TransitionDelta insert(Key key);
  QueryResult range_query(Key lo, Key hi) const;

  Snapshot snapshot() const;
  const IndexConfig& config() const noexcept { return cfg_; }
  std::size_t size() const noexcept { return present_.size(); }
  std::size_t block_count() const noexcept;
  std::size_t memory_size() const noexcept { return memory_.size(); }
  /// Live runs on each level, level 1 first. The baseline has one level.
  std::vector<std::size_t> runs_per_level() const;
  Count transition_total() const noexcept { return transition_total_; }
  Count element_total() const noexcept { return element_total_; }

 private:
  struct Run {
    std::vector<Block> blocks;
    std::size_t keys = 0;
  };

  TransitionDelta insert_baseline(Key key);
  TransitionDelta insert_lsm(Key key);
  TransitionDelta insert_stepped(Key key);
  Run build_run(std::vector<Key> keys) const;
  std::vector<Key> drain_memory(Key key);
  /// Merges a run's keys into `keys` and moves its blocks into `removed`.
  static std::vector<Key> absorb(std::vector<Key> keys, Run& run, std::vector<Block>& removed);
  TransitionDelta settle(std::vector<Block> removed, std::vector<Block> added);

  IndexConfig cfg_;
  std::vector<std::vector<Run>> levels_;
  std::vector<Key> memory_;
  std::unordered_set<Key> present_;
  Count transition_total_ = 0;
  Count element_total_ = 0;
};

struct IndexMetrics {
  Count N = 0;
  Count blocks = 0;
  double redundancy = 0;       ///< B |blocks| / N
  double access_overhead = 0;  ///< max blocks_used / ceil(disk keys / B)
  bool access_overhead_exact = true;
  double avg_blocks_per_unit = 0;  ///< sum blocks_used / sum ceil(disk keys / B)
  Count queries = 0;               ///< queries with at least one disk-resident key
  Count transition_cost_total = 0;
  Count element_transition_cost_total = 0;
  double update_cost_u = 0;  ///< transition_cost_total B / N
  double element_u = 0;      ///< element_transition_cost_total / N
};

struct WorkloadOptions {
  /// Run a query after every this many inserts; -1 means every B inserts and
  /// 0 disables the schedule.
  Count query_every = -1;
  /// With no explicit queries left, sample one: lo is a random stored key and
  /// the range extends to K keys, K uniform in [1, 2B].
  bool sample_queries = true;
  std::uint64_t seed = 0;
  /// Record a snapshot after every this many inserts; 0 records nothing.
  Count trace_every = 0;
  /// Compare each executed query against a scan of all stored keys.
  bool check_queries = false;
};

struct WorkloadRun {
  IndexMetrics metrics;
  std::vector<Snapshot> trace;
};

/// Inserts `keys` in order. Explicit queries are used at the scheduled
/// points first; any left over run after the last insert.
WorkloadRun run_workload(const IndexConfig& cfg, std::span<const Key> keys,
                         std::span<const std::pair<Key, Key>> queries = {},
                         const WorkloadOptions& options = {});

/// 1..N in a seeded random order.
std::vector<Key> shuffled_keys(Count n, std::uint64_t seed);

}  // namespace shufflab
