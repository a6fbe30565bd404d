#pragma once

// From an indexing trace to a ball-shuffling solution.
//
// The grouped workload splits 2MB² keys into 2MB groups of B keys, each group
// confined to its own unit interval, and inserts one key per group per round.
// A group that never shows up in memory at a round boundary is clean; its
// per-round covers, read as bins, give a shuffle sequence for B balls whose
// cost is at most the group's element transition cost.

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "shufflab/index_sim.hpp"
#include "shufflab/shuffle_core.hpp"

namespace shufflab {

struct GroupedWorkload {
  Count B = 0;
  Count M = 0;
  std::uint64_t seed = 0;
  /// rounds[i] holds the keys inserted in round i+1, one per group, in group
  /// order.
  std::vector<std::vector<Key>> rounds;

  Count groups() const noexcept { return 2 * M * B; }
  Count total_keys() const noexcept { return groups() * B; }
  /// Insertion order: round by round.
  std::vector<Key> keys() const;
  Count group_of(Key key) const noexcept { return key / (B + 1); }
  /// The rational coordinate j + r/(B+1) the integer key stands for.
  double coordinate(Key key) const noexcept;
};

/// Group j's rank-r key (1 <= r <= B) is encoded as j(B+1) + r, which orders
/// keys exactly like j + r/(B+1).
Key encode_key(Count B, Count group, Count rank) noexcept;

/// A seeded permutation per group decides which rank arrives in which round.
/// Requires B >= 2 and M >= 1.
GroupedWorkload build_grouped_workload(Count B, Count M, std::uint64_t seed);

/// Snapshot after each round of a simulator run on the workload.
std::vector<Snapshot> simulate_rounds(const IndexConfig& cfg, const GroupedWorkload& workload);

/// Groups with a key in some round's memory. Throws TraceError when the trace
/// is longer than the workload or a snapshot is missing inserted keys.
std::set<Count> contaminated_groups(std::span<const Snapshot> trace, const GroupedWorkload& workload);

/// Per round, the sets b = block ∩ G_i of a minimum block cover of the
/// group's current keys, ties going to the lexicographically smallest list
/// of blocks.
std::vector<std::vector<std::vector<Key>>> group_covers(std::span<const Snapshot> trace,
                                                        const GroupedWorkload& workload, Count group);

/// Largest per-round minimum cover over all clean groups.
Count measured_access_overhead(std::span<const Snapshot> trace, const GroupedWorkload& workload);

/// Keys of G_{i+1} lying in sets that differ between the covers of rounds i
/// and i+1, summed over consecutive rounds. Throws CoverError when the group
/// is contaminated or a round needs more than A sets.
Count group_element_cost(std::span<const Snapshot> trace, const GroupedWorkload& workload, Count group,
                         std::optional<Count> A = std::nullopt);

struct ReductionCertificate {
  Count group = 0;
  Count A = 0;
  Count balls = 0;
  std::vector<ShuffleOp> ops;
  Count shuffle_cost = 0;
  /// The group's element cost plus the first round's placement.
  Count element_transition_cost = 0;
};

/// Uses the clean group of least element cost (lowest id on ties). Throws
/// NoCleanGroupError when every group is contaminated and CoverError when
/// no clean group fits in A sets per round.
ReductionCertificate extract_certificate(std::span<const Snapshot> trace, const GroupedWorkload& workload,
                                         Count A);

struct Verification {
  bool ok = false;
  std::string diagnosis;  ///< empty when ok
};

Verification verify_certificate(const ReductionCertificate& cert);

/// {"A","balls","element_cost","group","ops","shuffle_cost","verified"}, keys
/// sorted, ops in the op-sequence text format.
std::string certificate_json(const ReductionCertificate& cert, bool verified);

/// Block transition cost summed over consecutive snapshots, starting from an
/// empty index.
Count trace_transition_total(std::span<const Snapshot> trace);

}  // namespace shufflab
