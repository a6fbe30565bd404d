#include "shufflab/set_cover.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>

#include "shufflab/error.hpp"

namespace shufflab {

namespace {

class Bits {
 public:
  explicit Bits(std::size_t n) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  Bits& operator|=(const Bits& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  std::size_t count_new(const Bits& covered) const {
    std::size_t c = 0;
    for (std::size_t w = 0; w < words_.size(); ++w)
      c += static_cast<std::size_t>(std::popcount(words_[w] & ~covered.words_[w]));
    return c;
  }

 private:
  std::vector<std::uint64_t> words_;
};

std::vector<Bits> to_bits(std::size_t universe, const std::vector<std::vector<std::size_t>>& sets) {
  std::vector<Bits> out;
  out.reserve(sets.size());
  Bits all(universe);
  for (const auto& s : sets) {
    Bits b(universe);
    for (auto e : s) {
      if (e >= universe) throw CoverError("set element outside the universe");
      b.set(e);
    }
    all |= b;
    out.push_back(std::move(b));
  }
  if (all.count() != universe) throw CoverError("sets do not cover the universe");
  return out;
}

CoverResult greedy(std::size_t universe, const std::vector<Bits>& bits) {
  CoverResult r;
  r.exact = false;
  Bits covered(universe);
  while (covered.count() < universe) {
    std::size_t best = 0, gain = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      const auto g = bits[i].count_new(covered);
      if (g > gain) {
        gain = g;
        best = i;
      }
    }
    covered |= bits[best];
    r.chosen.push_back(best);
  }
  std::sort(r.chosen.begin(), r.chosen.end());
  r.size = r.chosen.size();
  return r;
}

}  // namespace

CoverResult min_set_cover(std::size_t universe, const std::vector<std::vector<std::size_t>>& sets,
                          std::size_t exact_limit) {
  const auto bits = to_bits(universe, sets);
  if (universe == 0) return {};
  if (sets.size() > exact_limit) return greedy(universe, bits);

  // Seed the bound with greedy, then branch on the sets containing the first
  // uncovered element.
  CoverResult best = greedy(universe, bits);
  best.exact = true;
  std::vector<std::size_t> current;
  std::function<void(const Bits&)> search = [&](const Bits& covered) {
    if (current.size() + 1 >= best.size) return;
    std::size_t first = 0;
    while (covered.test(first)) ++first;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (!bits[i].test(first)) continue;
      Bits next = covered;
      next |= bits[i];
      current.push_back(i);
      if (next.count() == universe) {
        best.chosen = current;
        best.size = current.size();
      } else {
        search(next);
      }
      current.pop_back();
      if (current.size() + 1 >= best.size) return;
    }
  };
  search(Bits(universe));
  std::sort(best.chosen.begin(), best.chosen.end());
  return best;
}

std::vector<std::vector<std::size_t>> all_minimum_covers(
    std::size_t universe, const std::vector<std::vector<std::size_t>>& sets) {
  const auto bits = to_bits(universe, sets);
  if (universe == 0) return {{}};
  const std::size_t m = sets.size();
  std::vector<std::vector<std::size_t>> found;
  std::vector<std::size_t> combo;
  std::function<void(std::size_t, std::size_t, const Bits&)> rec = [&](std::size_t start, std::size_t k,
                                                                       const Bits& covered) {
    if (combo.size() == k) {
      if (covered.count() == universe) found.push_back(combo);
      return;
    }
    for (std::size_t i = start; i + (k - combo.size()) <= m; ++i) {
      Bits next = covered;
      next |= bits[i];
      combo.push_back(i);
      rec(i + 1, k, next);
      combo.pop_back();
    }
  };
  for (std::size_t k = 1; k <= m && found.empty(); ++k) rec(0, k, Bits(universe));
  return found;
}

}  // namespace shufflab
