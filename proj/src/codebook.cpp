#include "ristrain/codebook.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ristrain {

DirectionGrid::DirectionGrid(int n) {
  if (n < 1) throw std::invalid_argument("direction grid size must be >= 1");
  values_.reserve(n);
  for (int j = 1; j <= n; ++j) {
    values_.push_back(-1.0 + static_cast<double>(2 * j - 1) / n);
  }
}

double DirectionGrid::value(int index) const {
  if (index < 1 || index > size()) {
    throw std::out_of_range("direction index " + std::to_string(index) + " outside 1.." +
                            std::to_string(size()));
  }
  return values_[index - 1];
}

DirectionGrid build_grid(int n) { return DirectionGrid(n); }

namespace {

int checked_bin_count(int n, int m) {
  if (m < 2 || !std::has_single_bit(static_cast<unsigned>(m))) {
    throw std::invalid_argument("codebook: M = " + std::to_string(m) +
                                " must be a power of 2 and >= 2");
  }
  if (n < 1 || n % m != 0) {
    throw std::invalid_argument("codebook: M = " + std::to_string(m) + " must divide N = " +
                                std::to_string(n));
  }
  return n / m;
}

}  // namespace

Codebook::Codebook(int n, int m)
    : grid_(n),
      m_(m),
      l_(checked_bin_count(n, m)),
      log2_m_(std::countr_zero(static_cast<unsigned>(m))) {
  bins_.resize(l_);
  for (int l = 1; l <= l_; ++l) {
    auto& b = bins_[l - 1];
    b.reserve(m_);
    for (int slot = 1; slot <= m_; ++slot) b.push_back(l + (slot - 1) * l_);
  }
}

const std::vector<int>& Codebook::bin(int l) const {
  if (l < 1 || l > l_) {
    throw std::out_of_range("bin " + std::to_string(l) + " outside 1.." + std::to_string(l_));
  }
  return bins_[l - 1];
}

int Codebook::directions_in_round(int round) const {
  if (round < 1) throw std::invalid_argument("round must be >= 1");
  if (round > log2_m_) return 1;
  return m_ >> (round - 1);
}

Codebook build_codebook(int n, int m) { return Codebook(n, m); }

int intra_set_distance(std::span<const int> indices) {
  if (indices.size() < 2) {
    throw std::invalid_argument("intra-set distance needs at least two directions");
  }
  std::vector<int> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  int best = sorted[1] - sorted[0];
  for (std::size_t i = 2; i < sorted.size(); ++i) best = std::min(best, sorted[i] - sorted[i - 1]);
  return best;
}

ComplexVec multibeam_vector(const Codebook& cb, int round, std::span<const int> directions) {
  const int expected = cb.directions_in_round(round);
  if (static_cast<int>(directions.size()) != expected) {
    throw std::invalid_argument("multibeam_vector: round " + std::to_string(round) + " sweeps " +
                                std::to_string(expected) + " directions, got " +
                                std::to_string(directions.size()));
  }
  const int n = cb.size();
  const int sub = n / expected;
  ComplexVec v(n);
  for (int m = 0; m < expected; ++m) {
    const double alpha = cb.grid().value(directions[m]);
    for (int k = m * sub; k < (m + 1) * sub; ++k) {
      v[k] = std::polar(1.0, std::numbers::pi * k * alpha);
    }
  }
  return v;
}

ComplexVec single_beam(const Codebook& cb, int index) {
  return std::sqrt(static_cast<double>(cb.size())) * steering_h(cb.size(), cb.grid().value(index));
}

}  // namespace ristrain
