#pragma once

// Parameter sweeps over the shuffling game and the index simulator, written
// as plot-ready CSV. Cells run concurrently; rows come out in grid order.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shufflab/index_sim.hpp"
#include "shufflab/oracle.hpp"

namespace shufflab {

/// "a:b" (inclusive), "a,b,c" or a single value. An empty string, or a:b
/// with b < a, is an empty list.
std::vector<Count> parse_range(std::string_view text);

/// Fixed six-decimal rendering with '.' as separator regardless of locale.
std::string format_real(double value);

struct ShuffleRow {
  Count n = 0;
  Count t = 0;
  std::optional<Count> oracle;  ///< merging-only optimum, when in range
  std::optional<Count> naive, greedy, grouped, cascade;
  double cascade_bound = 0;  ///< 4 t n^(1+1/t)
  std::optional<Count> grouped_bound;
  TheoremBounds bounds;
  std::optional<bool> capacity_holds;
  std::string error;
};

struct ShuffleSweep {
  std::vector<Count> n;
  std::vector<Count> t;
  OracleOptions oracle;
  unsigned jobs = 1;
};

std::vector<ShuffleRow> run_shuffle_sweep(const ShuffleSweep& sweep);
std::string shuffle_csv_header();
std::string to_csv(const ShuffleRow& row);

struct IndexRow {
  IndexConfig cfg;
  Count N = 0;
  std::uint64_t seed = 0;
  IndexMetrics metrics;
  std::string error;
};

struct IndexSweep {
  std::vector<Structure> structures;
  std::vector<Count> B;
  std::vector<Count> M;
  std::vector<Count> ell;
  std::vector<Count> N;
  std::uint64_t seed = 0;
  Count query_every = -1;
  unsigned jobs = 1;
};

/// One index-simulator cell: N keys in seeded random order, sampled queries.
IndexRow run_index_cell(const IndexConfig& cfg, Count N, std::uint64_t seed, Count query_every = -1);

std::vector<IndexRow> run_index_sweep(const IndexSweep& sweep);
/// structure,B,M,ell,N,r,A,u,element_u followed by the extra columns.
std::string index_csv_header();
std::string to_csv(const IndexRow& row);

/// u log2(max(A, 2)): at least 1 for any structure outside the forbidden
/// corner of the query/update tradeoff.
double tradeoff_product(const IndexMetrics& m);

}  // namespace shufflab
