#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "shufflab/error.hpp"
#include "shufflab/oracle.hpp"
#include "shufflab/reduction.hpp"
#include "shufflab/trace_io.hpp"

using namespace shufflab;

namespace {

// One snapshot per round. `split` turns a group's current keys into the
// blocks that hold them.
template <class Split>
std::vector<Snapshot> synthetic_trace(const GroupedWorkload& wl, Split split) {
  std::vector<Snapshot> trace;
  std::vector<std::vector<Key>> members(static_cast<std::size_t>(wl.groups()));
  for (const auto& round : wl.rounds) {
    Snapshot s;
    for (std::size_t g = 0; g < round.size(); ++g) {
      members[g].push_back(round[g]);
      std::sort(members[g].begin(), members[g].end());
      for (auto& b : split(members[g])) s.blocks.push_back(std::move(b));
    }
    std::sort(s.blocks.begin(), s.blocks.end());
    trace.push_back(std::move(s));
  }
  return trace;
}

std::vector<Block> whole(const std::vector<Key>& keys) { return {keys}; }

std::vector<Block> singletons(const std::vector<Key>& keys) {
  std::vector<Block> out;
  for (Key k : keys) out.push_back({k});
  return out;
}

}  // namespace

TEST_CASE("grouped workload shape") {
  const auto small = build_grouped_workload(2, 1, 0);
  CHECK(small.groups() == 4);
  CHECK(small.rounds.size() == 2);
  CHECK(small.total_keys() == 8);
  CHECK(small.keys().size() == 8);
  std::set<Key> g3;
  for (const auto& r : small.rounds) g3.insert(r[3]);
  CHECK(g3 == std::set<Key>{encode_key(2, 3, 1), encode_key(2, 3, 2)});
  CHECK(small.coordinate(encode_key(2, 3, 1)) == doctest::Approx(3 + 1.0 / 3));
  CHECK(small.coordinate(encode_key(2, 3, 2)) == doctest::Approx(3 + 2.0 / 3));

  const auto wl = build_grouped_workload(3, 2, 5);
  CHECK(wl.groups() == 12);
  CHECK(wl.rounds.size() == 3);
  auto keys = wl.keys();
  CHECK(keys.size() == 36);
  std::sort(keys.begin(), keys.end());
  CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
  for (Key k : keys) {
    const double x = wl.coordinate(k);
    CHECK(x > static_cast<double>(wl.group_of(k)));
    CHECK(x < static_cast<double>(wl.group_of(k) + 1));
  }
  CHECK_THROWS_AS(build_grouped_workload(1, 0, 0), ValidationError);
}

TEST_CASE("contamination comes from memory only") {
  const auto wl = build_grouped_workload(2, 1, 1);
  auto trace = synthetic_trace(wl, whole);
  CHECK(contaminated_groups(trace, wl).empty());

  // Move group 2's first key out of its block and into memory at round 2.
  const Key k = wl.rounds[0][2];
  for (auto& b : trace[1].blocks) b.erase(std::remove(b.begin(), b.end(), k), b.end());
  trace[1].memory.push_back(k);
  CHECK(contaminated_groups(trace, wl) == std::set<Count>{2});
  CHECK_THROWS_AS(group_covers(trace, wl, 2), CoverError);

  trace[1].memory.clear();
  CHECK_THROWS_AS(contaminated_groups(trace, wl), TraceError);
  auto longer = synthetic_trace(wl, whole);
  longer.push_back(longer.back());
  CHECK_THROWS_AS(contaminated_groups(longer, wl), TraceError);
}

TEST_CASE("a group rewritten every round costs the sum 2..B") {
  for (Count B : {2, 3, 5}) {
    const auto wl = build_grouped_workload(B, 1, 3);
    const auto trace = synthetic_trace(wl, whole);
    CHECK(group_element_cost(trace, wl, 0) == B * (B + 1) / 2 - 1);
    CHECK(measured_access_overhead(trace, wl) == 1);
    const auto cert = extract_certificate(trace, wl, 1);
    CHECK(cert.shuffle_cost == B * (B + 1) / 2);
    CHECK(cert.element_transition_cost == B * (B + 1) / 2);
    CHECK(verify_certificate(cert).ok);
    for (const auto& op : cert.ops) CHECK(op.is_merging());
  }
}

TEST_CASE("sets that never change cost one per ball") {
  const Count B = 4;
  const auto wl = build_grouped_workload(B, 1, 6);
  const auto trace = synthetic_trace(wl, singletons);
  CHECK(group_element_cost(trace, wl, 0) == B - 1);
  const auto cert = extract_certificate(trace, wl, B);
  CHECK(cert.shuffle_cost == B);
  CHECK(cert.element_transition_cost == B);
  CHECK(verify_certificate(cert).ok);
  CHECK_THROWS_AS(extract_certificate(trace, wl, B - 1), CoverError);
  CHECK_THROWS_AS(group_element_cost(trace, wl, 0, B - 1), CoverError);
}

TEST_CASE("a single round has no transitions") {
  const auto wl = build_grouped_workload(3, 1, 2);
  const auto trace = synthetic_trace(wl, whole);
  const std::vector<Snapshot> first(trace.begin(), trace.begin() + 1);
  CHECK(group_element_cost(first, wl, 0) == 0);
  CHECK(extract_certificate(first, wl, 1).shuffle_cost == 1);
}

TEST_CASE("covers prefer the lexicographically smallest blocks") {
  const auto wl = build_grouped_workload(3, 1, 0);
  std::vector<Key> g(3);
  for (std::size_t r = 0; r < 3; ++r) g[r] = wl.rounds[r][0];
  auto trace = synthetic_trace(wl, whole);
  std::vector<Key> all = g;
  std::sort(all.begin(), all.end());
  // Replace group 0's last-round block by three pairwise overlapping pairs.
  auto& last = trace.back().blocks;
  last.erase(std::find(last.begin(), last.end(), all));
  last.push_back({all[0], all[1]});
  last.push_back({all[1], all[2]});
  last.push_back({all[0], all[2]});
  std::sort(last.begin(), last.end());
  const auto covers = group_covers(trace, wl, 0);
  const std::vector<std::vector<Key>> expect = {{all[0], all[1]}, {all[0], all[2]}};
  CHECK(covers.back() == expect);
}

TEST_CASE("every certificate from a simulator run verifies") {
  for (Count B : {2, 3, 4}) {
    for (Count M : {1, 2}) {
      for (auto s : {Structure::sorted_run_baseline, Structure::lsm_logarithmic, Structure::stepped_merge}) {
        for (Count ell : {Count{2}, B}) {
          CAPTURE(B);
          CAPTURE(M);
          CAPTURE(ell);
          const auto wl = build_grouped_workload(B, M, 17);
          const auto trace = simulate_rounds({B, M, ell, s}, wl);
          REQUIRE(trace.size() == static_cast<std::size_t>(B));
          CHECK(static_cast<Count>(contaminated_groups(trace, wl).size()) <= M * B);
          const Count A = measured_access_overhead(trace, wl);
          const auto cert = extract_certificate(trace, wl, A);
          const auto v = verify_certificate(cert);
          CHECK_MESSAGE(v.ok, v.diagnosis);
          CHECK(cert.balls == B);
          CHECK(cert.shuffle_cost <= cert.element_transition_cost);
          const Count group_cost = group_element_cost(trace, wl, cert.group);
          CHECK(cert.element_transition_cost <= group_cost + 1);
          CHECK(group_cost <= B * trace_transition_total(trace));
          CHECK(cert.shuffle_cost >= optimal_cost_merging(B, A).optimal_cost);
        }
      }
    }
  }
}

TEST_CASE("tampered certificates fail verification") {
  const auto wl = build_grouped_workload(3, 1, 4);
  const auto trace = synthetic_trace(wl, whole);
  const auto good = extract_certificate(trace, wl, 1);
  REQUIRE(verify_certificate(good).ok);

  auto bad_alloc = good;
  bad_alloc.ops.back().allocation.front() += 1;
  const auto v1 = verify_certificate(bad_alloc);
  CHECK_FALSE(v1.ok);
  CHECK(v1.diagnosis.find("illegal op") != std::string::npos);

  auto too_cheap = good;
  too_cheap.element_transition_cost = good.shuffle_cost - 1;
  CHECK_FALSE(verify_certificate(too_cheap).ok);

  auto misrecorded = good;
  misrecorded.shuffle_cost += 1;
  CHECK_FALSE(verify_certificate(misrecorded).ok);

  auto short_run = good;
  short_run.ops.pop_back();
  CHECK_FALSE(verify_certificate(short_run).ok);
}

TEST_CASE("no clean group is an error") {
  const auto wl = build_grouped_workload(2, 1, 0);
  auto trace = synthetic_trace(wl, whole);
  for (auto& s : trace) {
    for (const auto& b : s.blocks) s.memory.insert(s.memory.end(), b.begin(), b.end());
    std::sort(s.memory.begin(), s.memory.end());
    s.blocks.clear();
  }
  CHECK_THROWS_AS(extract_certificate(trace, wl, 1), NoCleanGroupError);
}

TEST_CASE("certificate JSON has sorted keys and replayable ops") {
  const auto wl = build_grouped_workload(3, 1, 4);
  const auto cert = extract_certificate(synthetic_trace(wl, whole), wl, 1);
  const auto text = certificate_json(cert, true);
  const auto j = nlohmann::json::parse(text);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"A", "balls", "element_cost", "group", "ops", "shuffle_cost", "verified"});
  CHECK(j["verified"].get<bool>());
  CHECK(replay(1, parse_ops(1, j["ops"].get<std::string>())).ledger.total() == cert.shuffle_cost);
}

TEST_CASE("trace JSON lines round trip") {
  const auto wl = build_grouped_workload(3, 2, 8);
  const auto trace = simulate_rounds({3, 2, 2, Structure::lsm_logarithmic}, wl);
  const auto text = trace_to_jsonl(trace);
  CHECK(trace_from_jsonl(text) == trace);
  std::istringstream in(text);
  CHECK(read_trace(in) == trace);
  CHECK_THROWS_AS(trace_from_jsonl("{\"blocks\":[],\"memory\":[],\"round\":2}\n"), TraceError);
  CHECK_THROWS_AS(trace_from_jsonl("not json\n"), TraceError);
}
