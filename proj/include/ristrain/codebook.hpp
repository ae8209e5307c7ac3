// Multi-beam training codebook.
//
// N grid directions are split into L = N/M bins of M directions each. Bin l
// holds indices {l, l+L, ..., l+(M-1)L}, so the minimum index gap inside a bin
// is L. One bin is swept per training symbol by splitting the array into M
// contiguous sub-arrays, each steered at one of the bin's directions.
//
// Direction indices are 1-based throughout, matching the usual bin tables.
#pragma once

#include <span>
#include <vector>

#include "ristrain/array_geometry.hpp"

namespace ristrain {

/// Uniform direction grid values[j-1] = -1 + (2j-1)/N, j = 1..N.
class DirectionGrid {
 public:
  explicit DirectionGrid(int n);

  int size() const { return static_cast<int>(values_.size()); }
  /// Spatial frequency of 1-based direction index.
  double value(int index) const;
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

DirectionGrid build_grid(int n);

class Codebook {
 public:
  /// Throws std::invalid_argument unless m >= 2, m is a power of 2 and m divides n.
  Codebook(int n, int m);

  const DirectionGrid& grid() const { return grid_; }
  int size() const { return grid_.size(); }
  int beams_per_sweep() const { return m_; }
  int bin_count() const { return l_; }
  /// log2(M): number of multi-beam rounds including the first.
  int coarse_rounds() const { return log2_m_; }
  /// 1-based bin l; slot m of the result holds index l + (m-1)L.
  const std::vector<int>& bin(int l) const;
  const std::vector<std::vector<int>>& bins() const { return bins_; }
  /// Number of directions swept together in round r (1-based); 1 once r > log2(M).
  int directions_in_round(int round) const;

 private:
  DirectionGrid grid_;
  int m_;
  int l_;
  int log2_m_;
  std::vector<std::vector<int>> bins_;
};

Codebook build_codebook(int n, int m);

/// Minimum |i - j| over distinct pairs. Throws std::invalid_argument for fewer than 2 indices.
int intra_set_distance(std::span<const int> indices);

/// Unit-modulus multi-beam vector for a round-r sweep of the given directions.
///
/// The array is split into |directions| contiguous sub-arrays of size s; sub-array m
/// is the matching slice of the full-array beam steered at directions[m], so element
/// k = m*s + n equals exp(j*pi*k*alpha_m). With one direction this is sqrt(N) u_h(N, alpha).
/// Throws std::invalid_argument if |directions| does not match the round.
ComplexVec multibeam_vector(const Codebook& cb, int round, std::span<const int> directions);

/// sqrt(N) u_h(N, grid value of index): the single full-array beam.
ComplexVec single_beam(const Codebook& cb, int index);

}  // namespace ristrain
