#pragma once

// Ball-shuffling game engine.
//
// n balls arrive one at a time and must live in at most t bins. On each
// arrival the player collects any set of bins (possibly none, possibly empty
// ones), adds the new ball, and redistributes the collected balls into
// non-empty bins. The move costs the number of balls involved: the collected
// balls plus the arriving one. Placing a ball directly into a bin of size b is
// the one-bin shuffle and costs b + 1.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shufflab {

using Count = std::int64_t;
using BinId = std::size_t;

/// One move. Bins in `collected` are emptied; the arriving ball is added; the
/// pool is split into `allocation`. allocation[i] lands in collected[i] while
/// there are collected bins left, then in the lowest-numbered empty bins that
/// were not collected. List the intended destination first.
struct ShuffleOp {
  std::vector<BinId> collected;
  std::vector<Count> allocation;

  bool is_merging() const noexcept { return allocation.size() == 1; }
  friend bool operator==(const ShuffleOp&, const ShuffleOp&) = default;
};

/// Bins are numbered 0..t-1 and an empty slot is an unused bin. Equality is
/// by size multiset, since bins are interchangeable.
class GameState {
 public:
  explicit GameState(std::size_t capacity);

  /// A mid-game state holding `sizes` in bins 0, 1, ...; balls_placed is the
  /// total and total_cost defaults to its minimum, one per ball.
  static GameState from_sizes(std::size_t capacity, std::span<const Count> sizes,
                              std::optional<Count> total_cost = std::nullopt);

  std::size_t capacity() const noexcept { return bins_.size(); }
  std::span<const Count> bins() const noexcept { return bins_; }
  Count bin(BinId id) const { return bins_.at(id); }
  std::size_t occupied() const noexcept;
  Count balls_placed() const noexcept { return balls_placed_; }
  Count total_cost() const noexcept { return total_cost_; }

  /// Non-zero sizes, largest first.
  std::vector<Count> canonical() const;

  friend bool operator==(const GameState& a, const GameState& b);

 private:
  friend GameState apply_shuffle(const GameState& state, const ShuffleOp& op);

  std::vector<Count> bins_;
  Count balls_placed_ = 0;
  Count total_cost_ = 0;
};

/// Cost the move would incur: sum of collected sizes plus one.
Count shuffle_cost(const GameState& state, const ShuffleOp& op);

/// Bins that receive allocation[0], allocation[1], ... Throws IllegalOpError
/// (or CapacityError) when the op is not legal in `state`.
std::vector<BinId> destinations(const GameState& state, const ShuffleOp& op);

GameState apply_shuffle(const GameState& state, const ShuffleOp& op);

/// Direct placement. `bin == nullopt` asks for a fresh bin (the lowest empty
/// one) and throws CapacityError if all t bins are occupied.
ShuffleOp direct_placement(const GameState& state, std::optional<BinId> bin);
GameState place_ball_direct(const GameState& state, std::optional<BinId> bin);

struct CostLedger {
  std::vector<Count> per_move_costs;
  /// Each destination bin is charged the balls it receives, so the charges
  /// of a move add up to its cost.
  std::map<BinId, Count> per_bin_charges;

  Count total() const noexcept;
};

struct ReplayResult {
  GameState state;
  CostLedger ledger;
};

/// Replays `ops` from the empty state with t bins. Throws ReplayError naming
/// the first illegal op.
ReplayResult replay(std::size_t t, std::span<const ShuffleOp> ops);

/// Builds the op that collects bins of the given sizes from `state`, picking
/// for each size the lowest-numbered unchosen bin that holds it (size 0
/// selects an empty bin).
ShuffleOp resolve_by_sizes(const GameState& state, std::span<const Count> collected_sizes,
                           std::vector<Count> allocation);

// Line-oriented text form, one op per line:
//
//   S <collected sizes, comma-separated> -> <allocation, comma-separated>
//
// e.g. "S 2,3 -> 6" or "S -> 1". Blank lines and lines starting with '#' are
// skipped on input.

std::string format_op(const GameState& state, const ShuffleOp& op);
std::string format_ops(std::size_t t, std::span<const ShuffleOp> ops);

struct SizedMove {
  std::vector<Count> collected_sizes;
  std::vector<Count> allocation;
};
SizedMove parse_op_line(std::string_view line, std::size_t line_no = 1);

/// Parses and resolves a whole op file against the evolving state.
std::vector<ShuffleOp> parse_ops(std::size_t t, std::string_view text);

}  // namespace shufflab
