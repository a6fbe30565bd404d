#include "shufflab/shuffle_core.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <numeric>
#include <sstream>

#include "shufflab/error.hpp"

namespace shufflab {

GameState::GameState(std::size_t capacity) : bins_(capacity, 0) {
  if (capacity == 0) throw IllegalOpError("bin capacity t must be positive");
}

GameState GameState::from_sizes(std::size_t capacity, std::span<const Count> sizes,
                                std::optional<Count> total_cost) {
  GameState s(capacity);
  std::size_t slot = 0;
  for (Count size : sizes) {
    if (size < 0) throw IllegalOpError("negative bin size");
    if (size == 0) continue;
    if (slot >= capacity) throw CapacityError("more non-empty bins than capacity t");
    s.bins_[slot++] = size;
    s.balls_placed_ += size;
  }
  s.total_cost_ = total_cost.value_or(s.balls_placed_);
  if (s.total_cost_ < s.balls_placed_) throw IllegalOpError("total cost below balls placed");
  return s;
}

std::size_t GameState::occupied() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(bins_.begin(), bins_.end(), [](Count b) { return b != 0; }));
}

std::vector<Count> GameState::canonical() const {
  std::vector<Count> out;
  for (Count b : bins_)
    if (b != 0) out.push_back(b);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

bool operator==(const GameState& a, const GameState& b) {
  return a.capacity() == b.capacity() && a.balls_placed_ == b.balls_placed_ &&
         a.total_cost_ == b.total_cost_ && a.canonical() == b.canonical();
}

Count shuffle_cost(const GameState& state, const ShuffleOp& op) {
  Count cost = 1;
  for (BinId id : op.collected) cost += state.bin(id);
  return cost;
}

std::vector<BinId> destinations(const GameState& state, const ShuffleOp& op) {
  const std::size_t t = state.capacity();
  std::vector<bool> taken(t, false);
  Count pool = 1;
  for (BinId id : op.collected) {
    if (id >= t)
      throw IllegalOpError("collected bin " + std::to_string(id) + " does not exist (t=" +
                           std::to_string(t) + ")");
    if (taken[id]) throw IllegalOpError("bin " + std::to_string(id) + " collected twice");
    taken[id] = true;
    pool += state.bin(id);
  }
  if (op.allocation.empty()) throw IllegalOpError("empty allocation");
  Count allocated = 0;
  for (Count a : op.allocation) {
    if (a < 1) throw IllegalOpError("allocation entries must be positive");
    allocated += a;
  }
  if (allocated != pool)
    throw IllegalOpError("allocation sums to " + std::to_string(allocated) + " but " +
                         std::to_string(pool) + " balls are in play");

  std::vector<BinId> dest;
  dest.reserve(op.allocation.size());
  for (std::size_t i = 0; i < op.allocation.size() && i < op.collected.size(); ++i)
    dest.push_back(op.collected[i]);
  BinId next = 0;
  while (dest.size() < op.allocation.size()) {
    while (next < t && (taken[next] || state.bin(next) != 0)) ++next;
    if (next >= t)
      throw CapacityError("shuffle needs " + std::to_string(op.allocation.size()) +
                          " bins but only " + std::to_string(dest.size()) + " are available");
    dest.push_back(next++);
  }
  return dest;
}

GameState apply_shuffle(const GameState& state, const ShuffleOp& op) {
  const auto dest = destinations(state, op);
  GameState next = state;
  const Count cost = shuffle_cost(state, op);
  for (BinId id : op.collected) next.bins_[id] = 0;
  for (std::size_t i = 0; i < dest.size(); ++i) next.bins_[dest[i]] = op.allocation[i];
  next.balls_placed_ += 1;
  next.total_cost_ += cost;
  return next;
}

ShuffleOp direct_placement(const GameState& state, std::optional<BinId> bin) {
  BinId target = 0;
  if (bin) {
    if (*bin >= state.capacity())
      throw CapacityError("bin " + std::to_string(*bin) + " does not exist");
    target = *bin;
  } else {
    const auto bins = state.bins();
    const auto it = std::find(bins.begin(), bins.end(), Count{0});
    if (it == bins.end()) throw CapacityError("all bins are occupied");
    target = static_cast<BinId>(it - bins.begin());
  }
  return ShuffleOp{{target}, {state.bin(target) + 1}};
}

GameState place_ball_direct(const GameState& state, std::optional<BinId> bin) {
  return apply_shuffle(state, direct_placement(state, bin));
}

Count CostLedger::total() const noexcept {
  return std::accumulate(per_move_costs.begin(), per_move_costs.end(), Count{0});
}

ReplayResult replay(std::size_t t, std::span<const ShuffleOp> ops) {
  ReplayResult result{GameState(t), {}};
  result.ledger.per_move_costs.reserve(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    try {
      const auto dest = destinations(result.state, ops[i]);
      result.ledger.per_move_costs.push_back(shuffle_cost(result.state, ops[i]));
      for (std::size_t k = 0; k < dest.size(); ++k)
        result.ledger.per_bin_charges[dest[k]] += ops[i].allocation[k];
      result.state = apply_shuffle(result.state, ops[i]);
    } catch (const IllegalOpError& e) {
      throw ReplayError(i, e.what());
    }
  }
  return result;
}

ShuffleOp resolve_by_sizes(const GameState& state, std::span<const Count> collected_sizes,
                           std::vector<Count> allocation) {
  std::vector<bool> chosen(state.capacity(), false);
  ShuffleOp op;
  op.allocation = std::move(allocation);
  for (Count size : collected_sizes) {
    BinId pick = state.capacity();
    for (BinId id = 0; id < state.capacity(); ++id) {
      if (!chosen[id] && state.bin(id) == size) {
        pick = id;
        break;
      }
    }
    if (pick == state.capacity())
      throw IllegalOpError("no bin of size " + std::to_string(size) + " to collect");
    chosen[pick] = true;
    op.collected.push_back(pick);
  }
  return op;
}

namespace {

void append_list(std::string& out, std::span<const Count> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<Count> parse_list(std::string_view s, std::size_t line_no) {
  std::vector<Count> out;
  s = trim(s);
  if (s.empty()) return out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    Count value = 0;
    const auto* first = item.data();
    const auto* last = item.data() + item.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (item.empty() || ec != std::errc{} || ptr != last)
      throw ParseError(line_no, "bad integer '" + std::string(item) + "'");
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    s = s.substr(comma + 1);
  }
  return out;
}

}  // namespace

std::string format_op(const GameState& state, const ShuffleOp& op) {
  std::vector<Count> sizes;
  sizes.reserve(op.collected.size());
  for (BinId id : op.collected) sizes.push_back(state.bin(id));
  std::string out = "S ";
  append_list(out, sizes);
  out += sizes.empty() ? "-> " : " -> ";
  append_list(out, op.allocation);
  return out;
}

std::string format_ops(std::size_t t, std::span<const ShuffleOp> ops) {
  std::string out;
  GameState state(t);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    out += format_op(state, ops[i]);
    out += '\n';
    try {
      state = apply_shuffle(state, ops[i]);
    } catch (const IllegalOpError& e) {
      throw ReplayError(i, e.what());
    }
  }
  return out;
}

SizedMove parse_op_line(std::string_view line, std::size_t line_no) {
  line = trim(line);
  if (line.size() < 1 || line[0] != 'S' || (line.size() > 1 && line[1] != ' ' && line[1] != '-'))
    throw ParseError(line_no, "expected 'S <sizes> -> <allocation>'");
  const auto arrow = line.find("->");
  if (arrow == std::string_view::npos) throw ParseError(line_no, "missing '->'");
  SizedMove move;
  move.collected_sizes = parse_list(line.substr(1, arrow - 1), line_no);
  move.allocation = parse_list(line.substr(arrow + 2), line_no);
  if (move.allocation.empty()) throw ParseError(line_no, "empty allocation");
  return move;
}

std::vector<ShuffleOp> parse_ops(std::size_t t, std::string_view text) {
  std::vector<ShuffleOp> ops;
  GameState state(t);
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto move = parse_op_line(line, line_no);
    try {
      auto op = resolve_by_sizes(state, move.collected_sizes, std::move(move.allocation));
      state = apply_shuffle(state, op);
      ops.push_back(std::move(op));
    } catch (const IllegalOpError& e) {
      throw ReplayError(ops.size(), e.what());
    }
  }
  return ops;
}

}  // namespace shufflab
