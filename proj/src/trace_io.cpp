#include "shufflab/trace_io.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "shufflab/error.hpp"

namespace shufflab {

void write_trace(std::ostream& out, std::span<const Snapshot> trace) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    nlohmann::json rec;
    rec["round"] = i + 1;
    rec["blocks"] = trace[i].blocks;
    rec["memory"] = trace[i].memory;
    out << rec.dump() << '\n';
  }
}

std::string trace_to_jsonl(std::span<const Snapshot> trace) {
  std::ostringstream out;
  write_trace(out, trace);
  return out.str();
}

std::vector<Snapshot> read_trace(std::istream& in) {
  std::vector<Snapshot> trace;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "trace line " + std::to_string(line_no) + ": ";
    try {
      const auto rec = nlohmann::json::parse(line);
      if (rec.at("round").get<std::size_t>() != trace.size() + 1)
        throw TraceError(where + "expected round " + std::to_string(trace.size() + 1));
      Snapshot s;
      s.blocks = rec.at("blocks").get<std::vector<Block>>();
      s.memory = rec.at("memory").get<std::vector<Key>>();
      for (auto& b : s.blocks) std::sort(b.begin(), b.end());
      std::sort(s.blocks.begin(), s.blocks.end());
      std::sort(s.memory.begin(), s.memory.end());
      trace.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw TraceError(where + e.what());
    }
  }
  return trace;
}

std::vector<Snapshot> trace_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  return read_trace(in);
}

}  // namespace shufflab
