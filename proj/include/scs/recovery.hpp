#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "scs/fft.hpp"
#include "scs/grid.hpp"
#include "scs/sampling.hpp"
#include "scs/signal.hpp"
#include "scs/spectral.hpp"
#include "scs/types.hpp"

namespace scs {

/// How the signal-subspace dimension is read off the eigenvalues of R_y.
struct RankPolicy {
  enum class Kind { relative_threshold, fixed_rank, largest_gap };
  Kind kind = Kind::relative_threshold;
  double tau = 1e-8;
  int rank = 0;

  /// Count of eigenvalues above tau * lambda_max.
  static RankPolicy relative_threshold(double tau = 1e-8) { return {Kind::relative_threshold, tau, 0}; }
  static RankPolicy fixed_rank(int r) { return {Kind::fixed_rank, 0.0, r}; }
  /// Position of the largest ratio between consecutive sorted eigenvalues,
  /// restricted to r <= M - 1. A heuristic for noisy data.
  static RankPolicy largest_gap() { return {Kind::largest_gap, 0.0, 0}; }
};

template <typename Real>
struct SubspaceDecomposition {
  Vector<Real> eigenvalues;             ///< descending
  ComplexMatrix<Real> eigenvectors;     ///< columns match eigenvalues
  ComplexMatrix<Real> signal_basis;     ///< leading rank_estimate eigenvectors (U_r)
  int rank_estimate = 0;
};

namespace detail {

template <typename Real>
void require_hermitian(const ComplexMatrix<Real>& r, double tol) {
  require(r.rows() == r.cols() && r.rows() >= 1, "matrix must be square and non-empty");
  const double scale = std::max(static_cast<double>(r.cwiseAbs().maxCoeff()), std::numeric_limits<double>::min());
  const double skew = static_cast<double>((r - r.adjoint()).cwiseAbs().maxCoeff());
  require(skew <= tol * scale, "matrix is not Hermitian within tolerance");
}

template <typename Real>
std::pair<Vector<Real>, ComplexMatrix<Real>> descending_eigen(const ComplexMatrix<Real>& r) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> solver(r);
  if (solver.info() != Eigen::Success) throw Error("eigendecomposition did not converge");
  Vector<Real> values = solver.eigenvalues().reverse();
  ComplexMatrix<Real> vectors = solver.eigenvectors().rowwise().reverse();
  return {values, vectors};
}

template <typename Real>
int count_above(const Vector<Real>& descending, double tau) {
  if (descending.size() == 0 || !(descending[0] > 0)) return 0;
  const Real cut = static_cast<Real>(tau) * descending[0];
  int r = 0;
  for (Eigen::Index i = 0; i < descending.size(); ++i)
    if (descending[i] > cut) ++r;
  return r;
}

template <typename Real>
int largest_gap_rank(const Vector<Real>& descending) {
  const Eigen::Index m = descending.size();
  if (m == 0 || !(descending[0] > 0)) return 0;
  if (m == 1) return 1;
  const double floor = static_cast<double>(descending[0]) * 1e-30;
  int best = 1;
  double best_gap = -1.0;
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    const double a = std::max(static_cast<double>(descending[i]), floor);
    const double b = std::max(static_cast<double>(descending[i + 1]), floor);
    const double gap = std::log(a / b);
    if (gap > best_gap) {
      best_gap = gap;
      best = static_cast<int>(i) + 1;
    }
  }
  return best;
}

}  // namespace detail

/// Eigendecomposition of R_y and the signal subspace selected by `policy`.
template <typename Real>
SubspaceDecomposition<Real> signal_subspace(const ComplexMatrix<Real>& r_y,
                                            RankPolicy policy = RankPolicy::relative_threshold(),
                                            double hermitian_tol = 1e-10) {
  detail::require_hermitian(r_y, hermitian_tol);
  const int m = static_cast<int>(r_y.rows());
  SubspaceDecomposition<Real> out;
  std::tie(out.eigenvalues, out.eigenvectors) = detail::descending_eigen(r_y);
  switch (policy.kind) {
    case RankPolicy::Kind::relative_threshold:
      out.rank_estimate = detail::count_above(out.eigenvalues, policy.tau);
      break;
    case RankPolicy::Kind::fixed_rank:
      detail::require(policy.rank >= 0 && policy.rank <= m, "fixed rank exceeds matrix size");
      out.rank_estimate = policy.rank;
      break;
    case RankPolicy::Kind::largest_gap:
      out.rank_estimate = detail::largest_gap_rank(out.eigenvalues);
      break;
  }
  out.signal_basis = out.eigenvectors.leftCols(out.rank_estimate);
  return out;
}

/// Estimated slice support, ascending, with the projection score of every slice.
struct SupportSet {
  std::vector<int> indices;
  std::vector<double> scores;
};

/// score_l = Phi_l^H U_r U_r^H Phi_l. Keeps the highest-scoring slices; the
/// count is the subspace rank unless `cardinality` overrides it. Equal scores
/// resolve to the lower slice index.
template <typename Real>
SupportSet estimate_support(const SubspaceDecomposition<Real>& sub, const MeasurementMatrix<Real>& phi,
                            std::optional<int> cardinality = std::nullopt) {
  detail::require(sub.rank_estimate >= 1, "support estimation needs a non-empty signal subspace");
  detail::require(sub.signal_basis.rows() == phi.rows(), "subspace and measurement matrix disagree on M");
  const int s = cardinality.value_or(sub.rank_estimate);
  detail::require(s >= 1 && s <= phi.cols(), "support cardinality out of range");
  if (s >= phi.rows())
    throw SingularSystem("support of size " + std::to_string(s) + " cannot be solved from " +
                         std::to_string(phi.rows()) + " sequences");

  const ComplexMatrix<Real> proj = sub.signal_basis.adjoint() * phi.entries;
  SupportSet out;
  out.scores.resize(static_cast<std::size_t>(phi.cols()));
  for (Eigen::Index l = 0; l < phi.cols(); ++l)
    out.scores[static_cast<std::size_t>(l)] = static_cast<double>(proj.col(l).squaredNorm());

  std::vector<int> order(out.scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return out.scores[static_cast<std::size_t>(a)] > out.scores[static_cast<std::size_t>(b)];
  });
  out.indices.assign(order.begin(), order.begin() + s);
  std::sort(out.indices.begin(), out.indices.end());
  return out;
}

template <typename Real>
struct SliceSolution {
  ComplexMatrix<Real> slices;  ///< |S| x N_f, row j belongs to support[j]
  Vector<Real> residuals;      ///< ||y(f_k) - Phi_S x^S(f_k)|| per bin
  double condition = 0.0;      ///< 2-norm condition number of Phi_S
};

/// Least-squares slices x^S(f_k) = pinv(Phi_S) y(f_k) for every bin, via
/// column-pivoted QR. Throws SingularSystem when cond(Phi_S) > max_condition
/// or |S| >= M.
template <typename Real>
SliceSolution<Real> solve_slices(const SpectralMeasurements<Real>& meas, const MeasurementMatrix<Real>& phi,
                                 std::span<const int> support, double max_condition = 1e12) {
  detail::require(!support.empty(), "support must not be empty");
  detail::require(meas.y.rows() == phi.rows(), "measurement rows differ from Phi rows");
  for (int l : support) detail::require(l >= 0 && l < phi.cols(), "support index out of range");
  if (static_cast<Eigen::Index>(support.size()) >= phi.rows())
    throw SingularSystem("support size must be smaller than the number of sequences");

  const ComplexMatrix<Real> a = phi.columns(support);
  Eigen::JacobiSVD<ComplexMatrix<Real>> svd(a);
  const auto& sv = svd.singularValues();
  const double smax = static_cast<double>(sv[0]);
  const double smin = static_cast<double>(sv[sv.size() - 1]);
  const double cond = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(cond <= max_condition))
    throw SingularSystem("restricted measurement matrix is rank deficient (cond " + std::to_string(cond) + ")");

  SliceSolution<Real> out;
  out.condition = cond;
  Eigen::ColPivHouseholderQR<ComplexMatrix<Real>> qr(a);
  out.slices = qr.solve(meas.y);
  out.residuals = (meas.y - a * out.slices).colwise().norm().transpose();
  return out;
}

template <typename Real>
SliceSolution<Real> solve_slices(const SpectralMeasurements<Real>& meas, const MeasurementMatrix<Real>& phi,
                                 const SupportSet& support, double max_condition = 1e12) {
  return solve_slices(meas, phi, std::span<const int>(support.indices), max_condition);
}

/// Scatters recovered slices back into the full-rate DFT (the inverse of the
/// slice map in slice_spectrum_of, including the 1/T scaling). With symmetry
/// enforcement each bin is averaged with the conjugate of its mirror.
template <typename Real>
ComplexVector<Real> assemble_spectrum(const ComplexMatrix<Real>& slices, std::span<const int> support,
                                      const FrequencyGrid& grid, bool enforce_symmetry = true) {
  detail::require(slices.rows() == static_cast<Eigen::Index>(support.size()), "slice rows differ from support");
  detail::require(slices.cols() == grid.n_bins, "slice length differs from grid");
  const Eigen::Index n = grid.full_length();
  ComplexVector<Real> out = ComplexVector<Real>::Zero(n);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  const Real inv_t = static_cast<Real>(1.0 / grid.base_period);
  for (std::size_t j = 0; j < support.size(); ++j) {
    detail::require(support[j] >= 0 && support[j] < grid.block_period, "support index out of range");
    for (Eigen::Index k = 0; k < grid.n_bins; ++k) {
      const Eigen::Index m = grid.full_index(support[j], k);
      if (used[static_cast<std::size_t>(m)]) throw Error("overlapping slice scatter");
      used[static_cast<std::size_t>(m)] = 1;
      out[m] = inv_t * slices(static_cast<Eigen::Index>(j), k);
    }
  }
  if (enforce_symmetry) {
    ComplexVector<Real> sym(n);
    for (Eigen::Index m = 0; m < n; ++m) sym[m] = static_cast<Real>(0.5) * (out[m] + std::conj(out[(n - m) % n]));
    return sym;
  }
  return out;
}

/// Inverse DFT (1/N scaling) of a full-rate spectrum; the real part is kept.
template <typename Real>
NyquistSignal<Real> synthesize_time(const ComplexVector<Real>& spectrum, double base_period) {
  return {idft<Real>(spectrum).real(), base_period};
}

/// Number of eigenvalues of a Hermitian matrix above tol * lambda_max.
template <typename Real>
int rank_diagnostic(const ComplexMatrix<Real>& r_y, double tol = 1e-8) {
  detail::require_hermitian(r_y, 1e-10);
  return detail::count_above(detail::descending_eigen(r_y).first, tol);
}

struct ReconstructionOptions {
  RankPolicy rank = RankPolicy::relative_threshold();
  std::optional<int> support_size;  ///< overrides the rank estimate
  std::optional<int> max_support;   ///< caps the support at this size
  bool enforce_symmetry = true;
  double max_condition = 1e12;
};

struct ReconstructionDiagnostics {
  int rank_estimate = 0;
  double residual_norm = 0.0;  ///< Frobenius norm of y - Phi_S x^S over all bins
  double condition = 0.0;
  std::vector<double> eigenvalues;
};

template <typename Real>
struct ReconstructionResult {
  SupportSet support;
  ComplexMatrix<Real> slices;
  ComplexVector<Real> spectrum;
  NyquistSignal<Real> waveform;
  ReconstructionDiagnostics diagnostics;
};

/// Blind recovery from a sequence set: measurements, covariance, subspace,
/// support, least squares, spectrum assembly and resynthesis on the
/// N_f * block_period Nyquist grid.
template <typename Real>
ReconstructionResult<Real> reconstruct(const SequenceSet<Real>& set, double base_period,
                                       const ReconstructionOptions& opts = {}) {
  const FrequencyGrid grid(set.length(), set.block_period, base_period);
  const auto meas = measure(set, grid);
  const auto phi = build_phi(set, base_period);
  const auto sub = signal_subspace<Real>(covariance(meas, grid), opts.rank);

  ReconstructionResult<Real> out;
  out.diagnostics.rank_estimate = sub.rank_estimate;
  out.diagnostics.eigenvalues.assign(sub.eigenvalues.data(), sub.eigenvalues.data() + sub.eigenvalues.size());
  std::optional<int> s = opts.support_size;
  if (opts.max_support && !s && sub.rank_estimate > *opts.max_support) s = *opts.max_support;
  out.support = estimate_support(sub, phi, s);
  auto sol = solve_slices(meas, phi, out.support, opts.max_condition);
  out.diagnostics.condition = sol.condition;
  out.diagnostics.residual_norm = static_cast<double>(sol.residuals.norm());
  out.slices = std::move(sol.slices);
  out.spectrum = assemble_spectrum<Real>(out.slices, out.support.indices, grid, opts.enforce_symmetry);
  out.waveform = synthesize_time<Real>(out.spectrum, base_period);
  return out;
}

}  // namespace scs
