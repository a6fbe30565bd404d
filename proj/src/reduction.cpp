#include "shufflab/reduction.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

#include <json.hpp>

#include "shufflab/error.hpp"
#include "shufflab/rng.hpp"
#include "shufflab/set_cover.hpp"

namespace shufflab {

namespace {

using KeySet = std::vector<Key>;  // ascending
using Cover = std::vector<KeySet>;

// Sets present on exactly one side, matched by equality with multiplicity.
std::vector<const KeySet*> changed_sets(const Cover& before, const Cover& after) {
  std::vector<bool> used(before.size(), false);
  std::vector<const KeySet*> out;
  for (const auto& s : after) {
    bool matched = false;
    for (std::size_t i = 0; i < before.size() && !matched; ++i) {
      if (!used[i] && before[i] == s) used[i] = matched = true;
    }
    if (!matched) out.push_back(&s);
  }
  for (std::size_t i = 0; i < before.size(); ++i)
    if (!used[i]) out.push_back(&before[i]);
  return out;
}

Count distinct_keys(const std::vector<const KeySet*>& sets) {
  std::vector<Key> keys;
  for (const auto* s : sets) keys.insert(keys.end(), s->begin(), s->end());
  std::sort(keys.begin(), keys.end());
  return static_cast<Count>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

void check_shape(std::span<const Snapshot> trace, const GroupedWorkload& wl) {
  if (trace.size() > wl.rounds.size())
    throw TraceError("trace has " + std::to_string(trace.size()) + " rounds but the workload has " +
                     std::to_string(wl.rounds.size()));
  for (std::size_t i = 0; i < trace.size(); ++i) {
    std::unordered_set<Key> stored(trace[i].memory.begin(), trace[i].memory.end());
    for (const auto& b : trace[i].blocks) stored.insert(b.begin(), b.end());
    for (std::size_t r = 0; r <= i; ++r)
      for (Key k : wl.rounds[r])
        if (!stored.count(k))
          throw TraceError("round " + std::to_string(i + 1) + " snapshot is missing key " + std::to_string(k));
  }
}

std::vector<Cover> covers_of(std::span<const Snapshot> trace, const GroupedWorkload& wl, Count group) {
  std::vector<Cover> out;
  KeySet members;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    members.push_back(wl.rounds[i][static_cast<std::size_t>(group)]);
    std::sort(members.begin(), members.end());
    std::vector<KeySet> pieces;
    for (const auto& b : trace[i].blocks) {
      KeySet piece;
      std::set_intersection(b.begin(), b.end(), members.begin(), members.end(), std::back_inserter(piece));
      if (!piece.empty()) pieces.push_back(std::move(piece));
    }
    std::vector<std::vector<std::size_t>> sets;
    for (const auto& p : pieces) {
      std::vector<std::size_t> s;
      for (Key k : p)
        s.push_back(static_cast<std::size_t>(std::lower_bound(members.begin(), members.end(), k) - members.begin()));
      sets.push_back(std::move(s));
    }
    // Blocks arrive in lexicographic order, so the first minimum cover by
    // index is the lexicographically smallest one.
    const auto all = all_minimum_covers(members.size(), sets);
    Cover cover;
    for (auto idx : all.front()) cover.push_back(pieces[idx]);
    out.push_back(std::move(cover));
  }
  return out;
}

}  // namespace

std::vector<Key> GroupedWorkload::keys() const {
  std::vector<Key> out;
  for (const auto& r : rounds) out.insert(out.end(), r.begin(), r.end());
  return out;
}

double GroupedWorkload::coordinate(Key key) const noexcept {
  return static_cast<double>(group_of(key)) +
         static_cast<double>(key % (B + 1)) / static_cast<double>(B + 1);
}

Key encode_key(Count B, Count group, Count rank) noexcept { return group * (B + 1) + rank; }

GroupedWorkload build_grouped_workload(Count B, Count M, std::uint64_t seed) {
  std::vector<FieldError> fields;
  if (B < 2) fields.push_back({"B", "must be >= 2"});
  if (M < 1) fields.push_back({"M", "must be >= 1"});
  if (!fields.empty()) throw ValidationError(std::move(fields));
  GroupedWorkload wl{B, M, seed, {}};
  wl.rounds.assign(static_cast<std::size_t>(B), {});
  Rng rng(seed);
  std::vector<Count> ranks(static_cast<std::size_t>(B));
  for (Count g = 0; g < wl.groups(); ++g) {
    for (Count r = 0; r < B; ++r) ranks[static_cast<std::size_t>(r)] = r + 1;
    rng.shuffle(ranks);
    for (Count r = 0; r < B; ++r)
      wl.rounds[static_cast<std::size_t>(r)].push_back(encode_key(B, g, ranks[static_cast<std::size_t>(r)]));
  }
  return wl;
}

std::vector<Snapshot> simulate_rounds(const IndexConfig& cfg, const GroupedWorkload& wl) {
  WorkloadOptions options;
  options.query_every = 0;
  options.trace_every = wl.groups();
  const auto keys = wl.keys();
  return run_workload(cfg, keys, {}, options).trace;
}

std::set<Count> contaminated_groups(std::span<const Snapshot> trace, const GroupedWorkload& wl) {
  check_shape(trace, wl);
  std::set<Count> out;
  for (const auto& s : trace)
    for (Key k : s.memory) out.insert(wl.group_of(k));
  return out;
}

std::vector<std::vector<std::vector<Key>>> group_covers(std::span<const Snapshot> trace,
                                                        const GroupedWorkload& wl, Count group) {
  check_shape(trace, wl);
  if (group < 0 || group >= wl.groups()) throw ValidationError("group", "out of range");
  if (contaminated_groups(trace, wl).count(group))
    throw CoverError("group " + std::to_string(group) + " is contaminated");
  return covers_of(trace, wl, group);
}

Count measured_access_overhead(std::span<const Snapshot> trace, const GroupedWorkload& wl) {
  const auto dirty = contaminated_groups(trace, wl);
  Count a = 0;
  for (Count g = 0; g < wl.groups(); ++g) {
    if (dirty.count(g)) continue;
    for (const auto& c : covers_of(trace, wl, g)) a = std::max(a, static_cast<Count>(c.size()));
  }
  return a;
}

Count group_element_cost(std::span<const Snapshot> trace, const GroupedWorkload& wl, Count group,
                         std::optional<Count> A) {
  const auto covers = group_covers(trace, wl, group);
  Count cost = 0;
  for (std::size_t i = 0; i < covers.size(); ++i) {
    if (A && static_cast<Count>(covers[i].size()) > *A)
      throw CoverError("group " + std::to_string(group) + " needs " + std::to_string(covers[i].size()) +
                       " sets at round " + std::to_string(i + 1));
    if (i > 0) cost += distinct_keys(changed_sets(covers[i - 1], covers[i]));
  }
  return cost;
}

ReductionCertificate extract_certificate(std::span<const Snapshot> trace, const GroupedWorkload& wl, Count A) {
  if (A < 1) throw ValidationError("A", "must be >= 1");
  const auto dirty = contaminated_groups(trace, wl);
  if (static_cast<Count>(dirty.size()) == wl.groups()) throw NoCleanGroupError("every group is contaminated");

  Count best_group = -1;
  Count best_cost = std::numeric_limits<Count>::max();
  for (Count g = 0; g < wl.groups(); ++g) {
    if (dirty.count(g)) continue;
    try {
      const Count c = group_element_cost(trace, wl, g, A);
      if (c < best_cost) {
        best_cost = c;
        best_group = g;
      }
    } catch (const CoverError&) {
    }
  }
  if (best_group < 0) throw CoverError("no clean group is covered by " + std::to_string(A) + " sets per round");

  const auto covers = covers_of(trace, wl, best_group);
  ReductionCertificate cert;
  cert.group = best_group;
  cert.A = A;
  cert.balls = static_cast<Count>(covers.size());
  cert.element_transition_cost = best_cost + (covers.empty() ? 0 : distinct_keys(changed_sets({}, covers.front())));

  struct Slot {
    KeySet set;
    std::optional<BinId> bin;
    Count balls = 0;
  };
  GameState state(static_cast<std::size_t>(A));
  std::vector<Slot> slots;
  for (std::size_t round = 0; round < covers.size(); ++round) {
    const Cover& next = covers[round];
    std::vector<bool> kept(slots.size(), false);
    std::vector<Slot> fresh;
    std::vector<const KeySet*> changed;
    for (const auto& s : next) {
      bool matched = false;
      for (std::size_t i = 0; i < slots.size() && !matched; ++i) {
        if (!kept[i] && slots[i].set == s) {
          kept[i] = matched = true;
          fresh.push_back(slots[i]);
        }
      }
      if (!matched) changed.push_back(&s);
    }
    ShuffleOp op;
    Count pool = 1;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (kept[i] || !slots[i].bin) continue;
      op.collected.push_back(*slots[i].bin);
      pool += slots[i].balls;
    }
    std::stable_sort(changed.begin(), changed.end(),
                     [](const KeySet* a, const KeySet* b) { return a->size() > b->size(); });
    std::vector<std::size_t> receivers;
    for (const auto* s : changed) {
      const Count give = std::min(pool, static_cast<Count>(s->size()));
      pool -= give;
      fresh.push_back({*s, std::nullopt, give});
      if (give > 0) {
        op.allocation.push_back(give);
        receivers.push_back(fresh.size() - 1);
      }
    }
    if (pool > 0)
      throw CoverError("round " + std::to_string(round + 1) + ": changed sets cannot hold the collected balls");
    std::vector<BinId> dest;
    try {
      dest = destinations(state, op);
    } catch (const IllegalOpError& e) {
      throw CoverError("round " + std::to_string(round + 1) + ": " + e.what());
    }
    for (std::size_t i = 0; i < receivers.size(); ++i) fresh[receivers[i]].bin = dest[i];
    cert.shuffle_cost += shuffle_cost(state, op);
    state = apply_shuffle(state, op);
    cert.ops.push_back(std::move(op));
    slots = std::move(fresh);
  }
  return cert;
}

Verification verify_certificate(const ReductionCertificate& cert) {
  if (cert.A < 1) return {false, "A must be >= 1"};
  ReplayResult replayed{GameState(1), {}};
  try {
    replayed = replay(static_cast<std::size_t>(cert.A), cert.ops);
  } catch (const ReplayError& e) {
    return {false, std::string("illegal op: ") + e.what()};
  }
  if (replayed.state.balls_placed() != cert.balls)
    return {false, "replay placed " + std::to_string(replayed.state.balls_placed()) + " balls, expected " +
                       std::to_string(cert.balls)};
  if (replayed.ledger.total() != cert.shuffle_cost)
    return {false, "replayed cost " + std::to_string(replayed.ledger.total()) + " differs from recorded " +
                       std::to_string(cert.shuffle_cost)};
  if (cert.shuffle_cost > cert.element_transition_cost)
    return {false, "shuffle cost " + std::to_string(cert.shuffle_cost) + " exceeds element transition cost " +
                       std::to_string(cert.element_transition_cost)};
  return {true, {}};
}

std::string certificate_json(const ReductionCertificate& cert, bool verified) {
  nlohmann::json j;
  j["A"] = cert.A;
  j["balls"] = cert.balls;
  j["element_cost"] = cert.element_transition_cost;
  j["group"] = cert.group;
  j["ops"] = format_ops(static_cast<std::size_t>(cert.A), cert.ops);
  j["shuffle_cost"] = cert.shuffle_cost;
  j["verified"] = verified;
  return j.dump(2) + "\n";
}

Count trace_transition_total(std::span<const Snapshot> trace) {
  Count total = 0;
  Snapshot previous;
  for (const auto& s : trace) {
    total += transition_cost(previous, s).blocks;
    previous = s;
  }
  return total;
}

}  // namespace shufflab
