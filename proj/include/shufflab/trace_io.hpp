#pragma once

// Snapshot traces as JSON lines, one record per round:
//   {"blocks":[[keys]],"memory":[keys],"round":i}
// with rounds numbered from 1.

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "shufflab/index_sim.hpp"

namespace shufflab {

void write_trace(std::ostream& out, std::span<const Snapshot> trace);
std::string trace_to_jsonl(std::span<const Snapshot> trace);

/// Throws TraceError on malformed records or rounds out of sequence.
std::vector<Snapshot> read_trace(std::istream& in);
std::vector<Snapshot> trace_from_jsonl(const std::string& text);

}  // namespace shufflab
