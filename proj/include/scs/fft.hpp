#pragma once

#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "scs/types.hpp"

namespace scs {

/// Unnormalized forward DFT: out[k] = sum_n in[n] exp(-j 2 pi k n / N).
template <typename Real>
ComplexVector<Real> dft(const ComplexVector<Real>& in) {
  const auto n = static_cast<std::size_t>(in.size());
  if (n == 0) return {};
  std::vector<std::complex<Real>> src(in.data(), in.data() + n), dst(n);
  Eigen::FFT<Real> fft;
  fft.fwd(dst, src);
  return Eigen::Map<const ComplexVector<Real>>(dst.data(), static_cast<Eigen::Index>(n));
}

template <typename Real>
ComplexVector<Real> dft(const Vector<Real>& in) {
  return dft<Real>(ComplexVector<Real>(in.template cast<std::complex<Real>>()));
}

/// Inverse DFT with 1/N scaling: out[n] = (1/N) sum_k in[k] exp(+j 2 pi k n / N).
template <typename Real>
ComplexVector<Real> idft(const ComplexVector<Real>& in) {
  const auto n = static_cast<std::size_t>(in.size());
  if (n == 0) return {};
  std::vector<std::complex<Real>> src(in.data(), in.data() + n), dst(n);
  Eigen::FFT<Real> fft;
  fft.inv(dst, src);
  return Eigen::Map<const ComplexVector<Real>>(dst.data(), static_cast<Eigen::Index>(n));
}

}  // namespace scs
