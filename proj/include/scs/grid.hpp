#pragma once

#include <map>
#include <utility>

#include "scs/types.hpp"

namespace scs {

/// Discrete frequency grid over one period F0 of the decimated-sequence
/// spectra, plus the bin map between spectral slices and the full-rate DFT.
///
/// With N = n_bins * block_period Nyquist samples, grid bin k sits at
///   f_k = (k - h) / (n_bins * L * T),
/// where h = 0 for even L (F0 = [0, 1/(LT))) and h = floor(n_bins / 2) for odd
/// L (F0 centered on zero). Slice l is shifted by K_l / (LT), with
///   K_l = -L/2 + 1 + l          (even L)
///   K_l = -(L-1)/2 + l          (odd L),
/// so slice l, bin k corresponds to full-rate DFT index
///   m = (k - h + K_l * n_bins) mod N.
/// Negative frequencies land in the upper half of the DFT through the modulo.
struct FrequencyGrid {
  Eigen::Index n_bins = 0;
  int block_period = 0;
  double base_period = 1.0;

  FrequencyGrid() = default;
  FrequencyGrid(Eigen::Index bins, int period, double t) : n_bins(bins), block_period(period), base_period(t) {
    detail::require(bins >= 1, "frequency grid needs at least one bin");
    detail::require(period >= 1, "block period must be positive");
    detail::require(t > 0.0, "base period must be positive");
  }

  bool even() const { return block_period % 2 == 0; }
  Eigen::Index bin_shift() const { return even() ? 0 : n_bins / 2; }
  Eigen::Index full_length() const { return n_bins * block_period; }
  double spacing() const { return 1.0 / (static_cast<double>(full_length()) * base_period); }
  double slice_width() const { return 1.0 / (block_period * base_period); }

  double frequency(Eigen::Index k) const { return static_cast<double>(k - bin_shift()) * spacing(); }

  /// K_l.
  int slice_shift(int l) const { return even() ? -block_period / 2 + 1 + l : -(block_period - 1) / 2 + l; }

  /// Lower edge of F0 (the frequency of the first bin of slice l relative to K_l / (LT)).
  double f0_low() const { return even() ? 0.0 : -0.5 * slice_width(); }

  Eigen::Index full_index(int l, Eigen::Index k) const {
    const Eigen::Index n = full_length();
    const Eigen::Index m = k - bin_shift() + static_cast<Eigen::Index>(slice_shift(l)) * n_bins;
    return ((m % n) + n) % n;
  }

  /// Inverse of full_index: (slice l, bin k) for a full-rate DFT index.
  std::pair<int, Eigen::Index> slice_bin(Eigen::Index m) const {
    const Eigen::Index n = full_length();
    const Eigen::Index t = (((m + bin_shift()) % n) + n) % n;
    const Eigen::Index k = t % n_bins;
    const Eigen::Index residue = t / n_bins;  // K_l mod L
    const int l = static_cast<int>(((residue - slice_shift(0)) % block_period + block_period) % block_period);
    return {l, k};
  }

  /// Slice holding the complex-conjugate partners of slice l for a real
  /// signal. Bins of one slice may mirror into two different slices (the bin
  /// at f = 0 for even L mirrors to -K_l, all others to -K_l - 1); the slice
  /// receiving the most bins is returned, lowest index on a tie.
  int mirror_slice(int l) const {
    std::map<int, Eigen::Index> votes;
    const Eigen::Index n = full_length();
    for (Eigen::Index k = 0; k < n_bins; ++k) {
      const Eigen::Index m = full_index(l, k);
      ++votes[slice_bin((n - m) % n).first];
    }
    int best = votes.begin()->first;
    for (const auto& [slice, count] : votes)
      if (count > votes[best]) best = slice;
    return best;
  }
};

}  // namespace scs
