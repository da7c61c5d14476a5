#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "scs/scs.hpp"

using namespace scs;

namespace {

MultibandSpec single_band(double energy, double bw, double t0, double fc, double fs) {
  return MultibandSpec{{BandSpec{energy, bw, t0, fc}}, fs};
}

}  // namespace

TEST_CASE("synthesize_multiband: unit sinc at the origin") {
  const auto s = synthesize_multiband(single_band(1.0, 1.0, 0.0, 0.0, 1.0), 4);
  CHECK(s.samples[0] == doctest::Approx(1.0).epsilon(1e-15));
  // sinc vanishes at the other integers
  CHECK(std::abs(s.samples[1]) < 1e-15);
  CHECK(s.base_period == 1.0);
}

TEST_CASE("synthesize_multiband: closed form at a non-integer sinc argument") {
  const MultibandSpec spec{{BandSpec{4.0, 0.25, 1.5, 0.1}}, 1.0};
  const auto s = synthesize_multiband(spec, 8, -2.0);
  const double t = -2.0 + 3.0;
  const double u = 0.25 * (t - 1.5);
  const double expected = std::sqrt(4.0 * 0.25) * std::sin(std::numbers::pi * u) / (std::numbers::pi * u) *
                          std::cos(2.0 * std::numbers::pi * 0.1 * (t - 1.5));
  CHECK(s.samples[3] == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("synthesize_multiband: band above f_Nyq/2 is rejected") {
  CHECK_THROWS_AS(synthesize_multiband(single_band(1.0, 0.2, 0.0, 0.45, 1.0), 8), InvalidArgument);
  CHECK_THROWS_AS(synthesize_multiband(single_band(0.0, 0.1, 0.0, 0.2, 1.0), 8), InvalidArgument);
  CHECK_THROWS_AS(synthesize_multiband(MultibandSpec{{}, 1.0}, 8), InvalidArgument);
}

TEST_CASE("synthesize_multiband: quarter-rate carrier concentrates at N/4 and its mirror") {
  const Eigen::Index n = 512;
  const auto s = synthesize_multiband(single_band(1.0, 0.01, 0.0, 0.25, 1.0), n, -256.0);
  const auto fast = dft<double>(s.samples);
  const auto ref = oracle::naive_dft(Eigen::VectorXd(s.samples));
  CHECK((fast - ref).norm() <= 1e-10 * ref.norm());

  Eigen::Index peak = 0;
  ref.head(n / 2).cwiseAbs().maxCoeff(&peak);
  CHECK(std::abs(peak - n / 4) <= 3);
  // energy within +-8 bins of N/4 and 3N/4
  double near = 0.0;
  for (Eigen::Index k = 0; k < n; ++k)
    if (std::abs(k - n / 4) <= 8 || std::abs(k - 3 * n / 4) <= 8) near += std::norm(ref[k]);
  CHECK(near / ref.squaredNorm() > 0.98);
}

TEST_CASE("synthesize_multiband: three random bands occupy at most 12 slices") {
  const double fs = 10e9;
  const FrequencyGrid grid(64, 102, 1.0 / fs);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto spec = randomize_spec(seed, 3, fs);
    const auto occupied = occupied_slices(spec, grid);
    CHECK(occupied.size() <= 12);
    CHECK(occupied.size() >= 2);

    const auto s = synthesize_multiband(spec, grid.full_length(), -0.5 * grid.full_length() / fs);
    CHECK(s.samples.allFinite());
    const auto sl = slice_spectrum_of(s, grid);
    double inside = 0.0;
    for (int l : occupied) inside += sl.x.row(l).squaredNorm();
    CHECK(inside / sl.x.squaredNorm() > 0.99);
  }
}

TEST_CASE("randomize_spec: determinism and ranges") {
  const double fs = 10e9;
  const auto a = randomize_spec(42, 3, fs);
  const auto b = randomize_spec(42, 3, fs);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.bands[i].carrier == b.bands[i].carrier);
    CHECK(a.bands[i].energy == b.bands[i].energy);
  }
  CHECK(randomize_spec(43, 3, fs).bands[0].carrier != a.bands[0].carrier);

  double t_lo = 1e9, t_hi = -1e9, b_lo = 1e18, b_hi = -1e18, e_lo = 1e9, e_hi = -1e9;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto spec = randomize_spec(seed, 3, fs);
    CHECK_NOTHROW(spec.validate());
    for (const auto& band : spec.bands) {
      t_lo = std::min(t_lo, band.time_offset);
      t_hi = std::max(t_hi, band.time_offset);
      b_lo = std::min(b_lo, band.bandwidth);
      b_hi = std::max(b_hi, band.bandwidth);
      e_lo = std::min(e_lo, band.energy);
      e_hi = std::max(e_hi, band.energy);
      CHECK(band.carrier >= band.bandwidth / 2);
      CHECK(band.carrier <= (fs - band.bandwidth) / 2);
    }
  }
  CHECK(t_lo >= 1e-9);
  CHECK(t_hi <= 10e-9);
  CHECK(b_lo >= 20e6);
  CHECK(b_hi <= 50e6);
  CHECK(e_lo >= 1.0);
  CHECK(e_hi <= 10.0);
  // the draws actually fill the ranges
  CHECK(t_hi - t_lo > 8.5e-9);
  CHECK(b_hi - b_lo > 28e6);
}

TEST_CASE("add_awgn: empirical SNR") {
  const auto clean = synthesize_multiband(randomize_spec(7, 3, 10e9), 100000, -5e-6);
  for (double target : {50.0, 5.0, 27.5}) {
    const auto noisy = add_awgn(clean, target, 99);
    CHECK(std::abs(snr_db(clean, noisy) - target) <= 0.5);
    const double p_noise = (noisy.samples - clean.samples).squaredNorm() / static_cast<double>(clean.size());
    CHECK(std::abs(10.0 * std::log10(signal_power(clean) / p_noise) - target) <= 0.5);
  }
  const auto same = add_awgn(clean, std::numeric_limits<double>::infinity(), 1);
  CHECK(same.samples == clean.samples);

  const auto a = add_awgn(clean, 20.0, 5);
  const auto b = add_awgn(clean, 20.0, 5);
  CHECK(a.samples == b.samples);

  NyquistSignal<double> zero{Eigen::VectorXd::Zero(16), 1.0};
  CHECK_THROWS_AS(add_awgn(zero, 10.0, 1), InvalidArgument);
}

TEST_CASE("snr_db: reference values") {
  NyquistSignal<double> x{Eigen::VectorXd::LinSpaced(100, -1.0, 2.0), 1.0};
  CHECK(snr_db(x, x) == kSnrCapDb);

  NyquistSignal<double> zero{Eigen::VectorXd::Zero(100), 1.0};
  CHECK(snr_db(x, zero) == doctest::Approx(0.0).epsilon(1e-12));

  Eigen::VectorXd e = Eigen::VectorXd::Ones(100);
  e *= x.samples.norm() / 100.0 / e.norm();
  NyquistSignal<double> est{x.samples + e, 1.0};
  CHECK(snr_db(x, est) == doctest::Approx(40.0).epsilon(1e-12));

  NyquistSignal<double> shorter{Eigen::VectorXd::Zero(99), 1.0};
  CHECK_THROWS_AS(snr_db(x, shorter), InvalidArgument);
}

TEST_CASE("snr_db: invariant under common scaling") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd a(64), b(64);
    for (Eigen::Index i = 0; i < 64; ++i) {
      a[i] = rng.normal();
      b[i] = a[i] + 0.1 * rng.normal();
    }
    const double alpha = rng.uniform(-50.0, 50.0);
    const NyquistSignal<double> ra{a, 1.0}, rb{b, 1.0}, sa{alpha * a, 1.0}, sb{alpha * b, 1.0};
    CHECK(snr_db(sa, sb) == doctest::Approx(snr_db(ra, rb)).epsilon(1e-9));
  }
}

TEST_CASE("synthesize_periodic_sparse: slice support is exact") {
  const int l_block = 12;
  const FrequencyGrid grid(16, l_block, 1.0);
  for (int l = 0; l < l_block; ++l) {
    const std::vector<int> support{l};
    const auto s = synthesize_periodic_sparse(std::span<const int>(support), 11, l_block, 16);
    const auto ref = oracle::naive_dft(Eigen::VectorXd(s.samples));
    const auto sl = slice_spectrum_of(s, grid);
    std::set<int> nonzero;
    for (int r = 0; r < l_block; ++r)
      if (sl.x.row(r).norm() > 1e-12 * sl.x.norm()) nonzero.insert(r);
    CHECK(nonzero == std::set<int>{l, grid.mirror_slice(l)});
    CHECK(nonzero.size() == 2);
    // zero DFT energy outside the declared slices, against the naive DFT
    double outside = 0.0;
    for (Eigen::Index m = 0; m < ref.size(); ++m)
      if (!nonzero.contains(grid.slice_bin(m).first)) outside += std::norm(ref[m]);
    CHECK(std::sqrt(outside) <= 1e-12 * ref.norm());
  }
}

TEST_CASE("synthesize_periodic_sparse: seeds change amplitudes, not support") {
  const std::vector<int> support{3, 40, 77};
  const auto a = synthesize_periodic_sparse(std::span<const int>(support), 1, 102, 8);
  const auto b = synthesize_periodic_sparse(std::span<const int>(support), 2, 102, 8);
  const auto c = synthesize_periodic_sparse(std::span<const int>(support), 1, 102, 8);
  CHECK(a.samples == c.samples);
  CHECK((a.samples - b.samples).norm() > 0.1 * a.samples.norm());
  const FrequencyGrid grid(8, 102, 1.0);
  const auto sa = slice_spectrum_of(a, grid);
  const auto sb = slice_spectrum_of(b, grid);
  for (int l = 0; l < 102; ++l) CHECK((sa.x.row(l).norm() > 1e-9) == (sb.x.row(l).norm() > 1e-9));

  const std::vector<int> empty;
  CHECK_THROWS_AS(synthesize_periodic_sparse(std::span<const int>(empty), 1, 12, 4), InvalidArgument);
}
