#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <set>
#include <span>
#include <vector>

#include "scs/fft.hpp"
#include "scs/grid.hpp"
#include "scs/random.hpp"
#include "scs/types.hpp"

namespace scs {

/// One pair of bands (positive carrier and its mirror) of the multiband test signal.
struct BandSpec {
  double energy = 1.0;       ///< amplitude-scale coefficient E_i (dimensionless)
  double bandwidth = 1.0;    ///< B_i in Hz
  double time_offset = 0.0;  ///< t_i in seconds
  double carrier = 0.0;      ///< f_i in Hz
};

struct MultibandSpec {
  std::vector<BandSpec> bands;
  double nyquist_rate = 1.0;  ///< f_Nyq = 1/T in Hz

  double base_period() const { return 1.0 / nyquist_rate; }

  void validate() const {
    detail::require(!bands.empty(), "multiband spec needs at least one band");
    detail::require(nyquist_rate > 0.0, "nyquist rate must be positive");
    const double half = 0.5 * nyquist_rate;
    const double slack = 1e-12 * nyquist_rate;
    for (const auto& b : bands) {
      detail::require(b.energy > 0.0, "band energy must be positive");
      detail::require(b.bandwidth > 0.0, "band bandwidth must be positive");
      // The lower edge may cross zero: a baseband band merges with its own mirror.
      detail::require(b.carrier >= 0.0 && b.carrier + 0.5 * b.bandwidth <= half + slack,
                      "band exceeds f_Nyq/2 or has a negative carrier");
    }
  }
};

/// Real samples on the Nyquist grid t_n = t_0 + n T.
template <typename Real>
struct NyquistSignal {
  Vector<Real> samples;
  double base_period = 1.0;

  Eigen::Index size() const { return samples.size(); }
};

/// Sentinel returned by snr_db when the reconstruction error is exactly zero.
inline constexpr double kSnrCapDb = 300.0;

namespace detail {

inline double sinc(double u) {
  if (u == 0.0) return 1.0;
  const double x = std::numbers::pi * u;
  return std::sin(x) / x;
}

}  // namespace detail

/// Samples x(t_0 + nT) of
///   x(t) = sum_i sqrt(E_i B_i) sinc(B_i (t - t_i)) cos(2 pi f_i (t - t_i)),
/// with sinc(u) = sin(pi u) / (pi u). The default origin t_0 = 0 puts the
/// first sample at t = 0.
template <typename Real = double>
NyquistSignal<Real> synthesize_multiband(const MultibandSpec& spec, Eigen::Index num_samples,
                                         double time_origin = 0.0) {
  spec.validate();
  detail::require(num_samples >= 1, "num_samples must be at least 1");
  const double t_step = spec.base_period();
  NyquistSignal<Real> out{Vector<Real>::Zero(num_samples), t_step};
  for (Eigen::Index n = 0; n < num_samples; ++n) {
    const double t = time_origin + static_cast<double>(n) * t_step;
    double acc = 0.0;
    for (const auto& b : spec.bands) {
      const double dt = t - b.time_offset;
      acc += std::sqrt(b.energy * b.bandwidth) * detail::sinc(b.bandwidth * dt) *
             std::cos(2.0 * std::numbers::pi * b.carrier * dt);
    }
    out.samples[n] = static_cast<Real>(acc);
  }
  return out;
}

/// Random K-band spec: t_i ~ U[1, 10] ns, B_i ~ U[20, 50] MHz, E_i ~ U[1, 10],
/// f_i ~ U[B_i/2, (f_Nyq - B_i)/2]. Parameters are drawn band by band in that
/// order from Rng(seed).
inline MultibandSpec randomize_spec(std::uint64_t seed, int k_bands, double f_nyq) {
  detail::require(k_bands >= 1, "K must be at least 1");
  detail::require(f_nyq > 100e6, "nyquist rate too low for 20-50 MHz bands");
  Rng rng(seed);
  MultibandSpec spec;
  spec.nyquist_rate = f_nyq;
  spec.bands.reserve(static_cast<std::size_t>(k_bands));
  for (int i = 0; i < k_bands; ++i) {
    BandSpec b;
    b.time_offset = rng.uniform(1e-9, 10e-9);
    b.bandwidth = rng.uniform(20e6, 50e6);
    b.energy = rng.uniform(1.0, 10.0);
    b.carrier = rng.uniform(0.5 * b.bandwidth, 0.5 * (f_nyq - b.bandwidth));
    spec.bands.push_back(b);
  }
  return spec;
}

/// Mean of squared samples.
template <typename Real>
double signal_power(const NyquistSignal<Real>& s) {
  if (s.size() == 0) return 0.0;
  return static_cast<double>(s.samples.squaredNorm()) / static_cast<double>(s.size());
}

/// Adds white Gaussian noise whose empirical power is exactly
/// P_signal / 10^(snr/10). A target of +inf returns the input unchanged.
template <typename Real>
NyquistSignal<Real> add_awgn(const NyquistSignal<Real>& signal, double target_snr_db, std::uint64_t seed) {
  if (std::isinf(target_snr_db) && target_snr_db > 0) return signal;
  detail::require(!std::isnan(target_snr_db), "target SNR is NaN");
  const double p_signal = signal_power(signal);
  detail::require(p_signal > 0.0, "cannot scale noise against an all-zero signal");

  Rng rng(seed);
  Vector<Real> noise(signal.size());
  for (Eigen::Index n = 0; n < noise.size(); ++n) noise[n] = static_cast<Real>(rng.normal());
  const double p_drawn = static_cast<double>(noise.squaredNorm()) / static_cast<double>(noise.size());
  const double p_target = p_signal / std::pow(10.0, target_snr_db / 10.0);
  noise *= static_cast<Real>(std::sqrt(p_target / p_drawn));

  NyquistSignal<Real> out = signal;
  out.samples += noise;
  return out;
}

/// 20 log10(||x|| / ||x - x_hat||), capped at kSnrCapDb.
template <typename Real>
double snr_db(const NyquistSignal<Real>& reference, const NyquistSignal<Real>& estimate) {
  detail::require(reference.size() == estimate.size(), "snr_db: length mismatch");
  const double ref = static_cast<double>(reference.samples.norm());
  detail::require(ref > 0.0, "snr_db: reference is all zero");
  const double err = static_cast<double>((reference.samples - estimate.samples).norm());
  if (err == 0.0) return kSnrCapDb;
  return std::min(kSnrCapDb, 20.0 * std::log10(ref / err));
}

/// Conjugate-symmetric closure of a slice set: adds mirror_slice(l) for every l.
inline std::vector<int> symmetric_closure(std::span<const int> support, const FrequencyGrid& grid) {
  std::set<int> closed;
  for (int l : support) {
    detail::require(l >= 0 && l < grid.block_period, "slice index out of range");
    closed.insert(l);
    closed.insert(grid.mirror_slice(l));
  }
  return {closed.begin(), closed.end()};
}

/// Real, exactly periodic Nyquist-grid signal of length L * bins_per_slice
/// whose slice spectrum is nonzero only on the conjugate-symmetric closure of
/// `support`. Full-rate DFT bins are filled with complex normal amplitudes
/// wherever both the bin and its mirror fall inside the closure; every other
/// bin is exactly zero, so there is no leakage.
template <typename Real = double>
NyquistSignal<Real> synthesize_periodic_sparse(std::span<const int> support, std::uint64_t seed, int block_period,
                                               Eigen::Index bins_per_slice, double base_period = 1.0) {
  detail::require(!support.empty(), "support must not be empty");
  const FrequencyGrid grid(bins_per_slice, block_period, base_period);
  const auto closure = symmetric_closure(support, grid);
  std::vector<char> active(static_cast<std::size_t>(block_period), 0);
  for (int l : closure) active[static_cast<std::size_t>(l)] = 1;

  const Eigen::Index n = grid.full_length();
  ComplexVector<Real> spectrum = ComplexVector<Real>::Zero(n);
  Rng rng(seed);
  for (int l : closure) {
    for (Eigen::Index k = 0; k < bins_per_slice; ++k) {
      const Eigen::Index m = grid.full_index(l, k);
      const Eigen::Index mm = (n - m) % n;
      if (!active[static_cast<std::size_t>(grid.slice_bin(mm).first)]) continue;
      if (mm < m) continue;  // filled from the partner
      const double re = rng.normal();
      const double im = (mm == m) ? 0.0 : rng.normal();
      spectrum[m] = std::complex<Real>(static_cast<Real>(re), static_cast<Real>(im));
      spectrum[mm] = std::conj(spectrum[m]);
    }
  }
  return {idft<Real>(spectrum).real(), base_period};
}

/// Slices overlapped by the bands of an analytic spec (both the positive
/// carrier and its mirror). This is the support a perfect estimator would
/// return if leakage were ignored.
inline std::vector<int> occupied_slices(const MultibandSpec& spec, const FrequencyGrid& grid) {
  const double fs = spec.nyquist_rate;
  const double width = grid.slice_width();
  std::set<int> out;
  for (const auto& b : spec.bands) {
    const double lo = b.carrier - 0.5 * b.bandwidth;
    const double hi = b.carrier + 0.5 * b.bandwidth;
    for (const auto& [a, z] : {std::pair{lo, hi}, std::pair{-hi, -lo}}) {
      for (int l = 0; l < grid.block_period; ++l) {
        const double s_lo = grid.slice_shift(l) * width + grid.f0_low();
        for (int wrap = -1; wrap <= 1; ++wrap) {
          const double s0 = s_lo + wrap * fs;
          if (a < s0 + width && z > s0) out.insert(l);
        }
      }
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace scs
