#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "scs/fft.hpp"
#include "scs/grid.hpp"
#include "scs/sampling.hpp"
#include "scs/signal.hpp"
#include "scs/types.hpp"

namespace scs {

// Normalization convention used throughout:
//   * sequence DFTs are unnormalized;
//   * a slice entry is T times the unnormalized full-rate DFT bin, which
//     approximates the continuous Fourier transform X(f);
//   * Phi carries the 1/(LT) factor.
// With these, y(f_k) = Phi x(f_k) holds exactly for periodic signals.

namespace detail {

/// exp(j 2 pi num / den) with the numerator reduced modulo den first.
template <typename Real>
std::complex<Real> unit_phase(long long num, long long den) {
  const long long r = ((num % den) + den) % den;
  const Real angle = static_cast<Real>(2) * std::numbers::pi_v<Real> * static_cast<Real>(r) / static_cast<Real>(den);
  return std::polar(static_cast<Real>(1), angle);
}

}  // namespace detail

/// M x L measurement matrix, Phi(i, l) = exp(j 2 pi c_i K_l / L) / (L T).
template <typename Real>
struct MeasurementMatrix {
  ComplexMatrix<Real> entries;
  std::vector<int> row_offsets;
  std::vector<int> slice_shifts;
  int block_period = 1;
  double base_period = 1.0;

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }

  /// Columns indexed by `support`, in the given order.
  ComplexMatrix<Real> columns(std::span<const int> support) const {
    ComplexMatrix<Real> out(entries.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = entries.col(support[j]);
    return out;
  }
};

template <typename Real = double>
MeasurementMatrix<Real> build_phi(std::span<const int> offsets, int block_period, double base_period) {
  detail::require(!offsets.empty(), "measurement matrix needs at least one row");
  const FrequencyGrid grid(1, block_period, base_period);
  MeasurementMatrix<Real> phi;
  phi.row_offsets.assign(offsets.begin(), offsets.end());
  phi.block_period = block_period;
  phi.base_period = base_period;
  for (int l = 0; l < block_period; ++l) phi.slice_shifts.push_back(grid.slice_shift(l));

  const Real scale = static_cast<Real>(1.0 / (block_period * base_period));
  phi.entries.resize(static_cast<Eigen::Index>(offsets.size()), block_period);
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    detail::require(offsets[i] >= 0 && offsets[i] < block_period, "row offset out of range");
    for (int l = 0; l < block_period; ++l)
      phi.entries(static_cast<Eigen::Index>(i), l) =
          scale * detail::unit_phase<Real>(static_cast<long long>(offsets[i]) * phi.slice_shifts[l], block_period);
  }
  return phi;
}

/// Rows follow the measurement order: C1 first, then C2 \ {0}.
template <typename Real = double>
MeasurementMatrix<Real> build_phi(const SamplingPattern& pattern, const CoprimeConfig& cfg) {
  const auto order = pattern.measurement_order();
  return build_phi<Real>(order, cfg.l(), cfg.base_period);
}

/// Rows follow the order of the sequence set.
template <typename Real>
MeasurementMatrix<Real> build_phi(const SequenceSet<Real>& set, double base_period) {
  const auto offs = set.offsets();
  return build_phi<Real>(offs, set.block_period, base_period);
}

/// Length-N_f DFT of every sequence, sampled on the grid:
/// column k holds DFT bin (k - h) mod N_f.
template <typename Real>
ComplexMatrix<Real> sequence_dtft(const SequenceSet<Real>& set, const FrequencyGrid& grid) {
  detail::require(set.size() >= 1, "empty sequence set");
  detail::require(set.block_period == grid.block_period, "sequence block period differs from grid");
  const Eigen::Index nf = grid.n_bins;
  ComplexMatrix<Real> out(static_cast<Eigen::Index>(set.size()), nf);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& s = set.sequences[i].samples;
    detail::require(s.size() == nf, "sequence length differs from grid size");
    const ComplexVector<Real> spec = dft<Real>(Vector<Real>(s));
    for (Eigen::Index k = 0; k < nf; ++k) {
      const Eigen::Index bin = (((k - grid.bin_shift()) % nf) + nf) % nf;
      out(static_cast<Eigen::Index>(i), k) = spec[bin];
    }
  }
  return out;
}

/// y: M x N_f, column k is y(f_k); rows follow `offsets`.
template <typename Real>
struct SpectralMeasurements {
  ComplexMatrix<Real> y;
  std::vector<int> offsets;
};

/// y_i(f_k) = exp(-j 2 pi f_k c_i T) X_{c_i}(f_k).
template <typename Real>
SpectralMeasurements<Real> phase_align(const ComplexMatrix<Real>& dtft, std::span<const int> offsets,
                                       const FrequencyGrid& grid) {
  detail::require(dtft.rows() == static_cast<Eigen::Index>(offsets.size()), "row count differs from offsets");
  detail::require(dtft.cols() == grid.n_bins, "column count differs from grid");
  SpectralMeasurements<Real> out{dtft, {offsets.begin(), offsets.end()}};
  const long long period = grid.full_length();
  for (Eigen::Index i = 0; i < dtft.rows(); ++i) {
    const long long c = offsets[static_cast<std::size_t>(i)];
    for (Eigen::Index k = 0; k < grid.n_bins; ++k)
      out.y(i, k) *= detail::unit_phase<Real>(-(k - grid.bin_shift()) * c, period);
  }
  return out;
}

template <typename Real>
SpectralMeasurements<Real> phase_align(const ComplexMatrix<Real>& dtft, const SamplingPattern& pattern,
                                       const FrequencyGrid& grid) {
  const auto order = pattern.measurement_order();
  return phase_align<Real>(dtft, order, grid);
}

/// sequence_dtft followed by phase_align, rows in the set's order.
template <typename Real>
SpectralMeasurements<Real> measure(const SequenceSet<Real>& set, const FrequencyGrid& grid) {
  const auto offs = set.offsets();
  return phase_align<Real>(sequence_dtft(set, grid), offs, grid);
}

/// x: L x N_f, row l, column k holds X(f_k + K_l / (LT)).
template <typename Real>
struct SliceSpectrum {
  ComplexMatrix<Real> x;
};

/// Full-rate DFT of the signal scaled by T and reshaped into slices.
template <typename Real>
SliceSpectrum<Real> slice_spectrum_of(const NyquistSignal<Real>& signal, const FrequencyGrid& grid) {
  detail::require(signal.size() == grid.full_length(), "signal length must equal N_f * L");
  const ComplexVector<Real> full = dft<Real>(signal.samples);
  const Real t = static_cast<Real>(grid.base_period);
  SliceSpectrum<Real> out{ComplexMatrix<Real>(grid.block_period, grid.n_bins)};
  for (int l = 0; l < grid.block_period; ++l)
    for (Eigen::Index k = 0; k < grid.n_bins; ++k) out.x(l, k) = t * full[grid.full_index(l, k)];
  return out;
}

/// R_y = df * sum_k y(f_k) y(f_k)^H with df = 1 / (N_f L T), made exactly
/// Hermitian by averaging with its conjugate transpose.
template <typename Real>
ComplexMatrix<Real> covariance(const SpectralMeasurements<Real>& meas, const FrequencyGrid& grid) {
  detail::require(meas.y.cols() >= 1, "covariance needs at least one bin");
  const Real df = static_cast<Real>(grid.spacing());
  ComplexMatrix<Real> r = df * (meas.y * meas.y.adjoint());
  ComplexMatrix<Real> sym = static_cast<Real>(0.5) * (r + r.adjoint());
  return sym;
}

}  // namespace scs
