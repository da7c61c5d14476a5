#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "scs/random.hpp"
#include "scs/signal.hpp"
#include "scs/types.hpp"

namespace scs {

/// Two synchronously clocked samplers at intervals L1*T and L2*T.
struct CoprimeConfig {
  int l1 = 0;
  int l2 = 0;
  double base_period = 1.0;

  CoprimeConfig() = default;
  CoprimeConfig(int a, int b, double t = 1.0) : l1(a), l2(b), base_period(t) {
    detail::require(a > 1 && b > 1, "decimation factors must both exceed 1");
    detail::require(t > 0.0, "base period must be positive");
    if (std::gcd(a, b) != 1)
      throw NotCoprime("L1=" + std::to_string(a) + " and L2=" + std::to_string(b) + " are not co-prime");
  }

  /// Block length L = L1 * L2 (the least common multiple).
  int l() const { return l1 * l2; }
  /// Distinct samples per block, M = L1 + L2 - 1.
  int m() const { return l1 + l2 - 1; }
};

/// Per-block time stamps of both samplers.
struct SamplingPattern {
  std::vector<int> c1;  ///< {L1 i : i = 0..L2-1}
  std::vector<int> c2;  ///< {L2 i : i = 0..L1-1}
  std::vector<int> c;   ///< sorted union, size M

  /// Row order of the measurement model: all of C1, then C2 without its
  /// leading zero (the sample at offset 0 is shared by both channels).
  std::vector<int> measurement_order() const {
    std::vector<int> out = c1;
    out.insert(out.end(), c2.begin() + 1, c2.end());
    return out;
  }
};

inline SamplingPattern coprime_pattern(int l1, int l2) {
  const CoprimeConfig cfg(l1, l2);
  SamplingPattern p;
  for (int i = 0; i < l2; ++i) p.c1.push_back(l1 * i);
  for (int i = 0; i < l1; ++i) p.c2.push_back(l2 * i);
  p.c = p.c1;
  p.c.insert(p.c.end(), p.c2.begin() + 1, p.c2.end());
  std::sort(p.c.begin(), p.c.end());
  return p;
}

inline SamplingPattern coprime_pattern(const CoprimeConfig& cfg) { return coprime_pattern(cfg.l1, cfg.l2); }

/// Uniform sub-sequence x(n L T + c T) picked from each block at offset c.
template <typename Real>
struct DecimatedSequence {
  int offset = 0;
  int block_period = 1;
  Vector<Real> samples;
};

template <typename Real>
struct SequenceSet {
  std::vector<DecimatedSequence<Real>> sequences;
  int block_period = 1;

  std::size_t size() const { return sequences.size(); }
  Eigen::Index length() const { return sequences.empty() ? 0 : sequences.front().samples.size(); }

  std::vector<int> offsets() const {
    std::vector<int> out;
    out.reserve(sequences.size());
    for (const auto& s : sequences) out.push_back(s.offset);
    return out;
  }
};

/// Raw output of the two samplers over the analysed window.
template <typename Real>
struct AcquiredSamples {
  Vector<Real> x1;
  Vector<Real> x2;
  Eigen::Index used_length = 0;  ///< Nyquist samples covered (a multiple of L)
  Eigen::Index truncated = 0;    ///< Nyquist samples dropped from the tail
};

/// x1[n] = x(n L1 T), x2[n] = x(n L2 T). The window is truncated to the
/// largest whole number of blocks.
template <typename Real>
AcquiredSamples<Real> acquire(const NyquistSignal<Real>& signal, const CoprimeConfig& cfg) {
  const Eigen::Index blocks = signal.size() / cfg.l();
  detail::require(blocks >= 1, "signal shorter than one block");
  AcquiredSamples<Real> out;
  out.used_length = blocks * cfg.l();
  out.truncated = signal.size() - out.used_length;
  out.x1.resize(out.used_length / cfg.l1);
  out.x2.resize(out.used_length / cfg.l2);
  for (Eigen::Index n = 0; n < out.x1.size(); ++n) out.x1[n] = signal.samples[n * cfg.l1];
  for (Eigen::Index n = 0; n < out.x2.size(); ++n) out.x2[n] = signal.samples[n * cfg.l2];
  return out;
}

/// Splits both channels into M uniform sequences, one per pattern offset.
/// Offset 0 is taken from channel 1 only. The result is ordered by offset.
template <typename Real>
SequenceSet<Real> resequence(const Vector<Real>& x1, const Vector<Real>& x2, const CoprimeConfig& cfg) {
  detail::require(x1.size() % cfg.l2 == 0, "channel 1 does not cover whole blocks");
  const Eigen::Index blocks = x1.size() / cfg.l2;
  detail::require(x2.size() == blocks * cfg.l1, "channel windows differ in length");

  SequenceSet<Real> set;
  set.block_period = cfg.l();
  for (int i = 0; i < cfg.l2; ++i) {
    DecimatedSequence<Real> s{cfg.l1 * i, cfg.l(), Vector<Real>(blocks)};
    for (Eigen::Index n = 0; n < blocks; ++n) s.samples[n] = x1[n * cfg.l2 + i];
    set.sequences.push_back(std::move(s));
  }
  for (int i = 1; i < cfg.l1; ++i) {
    DecimatedSequence<Real> s{cfg.l2 * i, cfg.l(), Vector<Real>(blocks)};
    for (Eigen::Index n = 0; n < blocks; ++n) s.samples[n] = x2[n * cfg.l1 + i];
    set.sequences.push_back(std::move(s));
  }
  std::sort(set.sequences.begin(), set.sequences.end(),
            [](const auto& a, const auto& b) { return a.offset < b.offset; });
  return set;
}

template <typename Real>
SequenceSet<Real> resequence(const AcquiredSamples<Real>& acq, const CoprimeConfig& cfg) {
  return resequence(acq.x1, acq.x2, cfg);
}

enum class SelectionStrategy { even_spread, prefix, seeded_random };

/// Largest circular distance between consecutive offsets modulo the block period.
inline int max_circular_gap(std::span<const int> sorted_offsets, int block_period) {
  if (sorted_offsets.empty()) return block_period;
  int worst = sorted_offsets.front() + block_period - sorted_offsets.back();
  for (std::size_t i = 1; i < sorted_offsets.size(); ++i)
    worst = std::max(worst, sorted_offsets[i] - sorted_offsets[i - 1]);
  return worst;
}

namespace detail {

struct SpreadScore {
  int max_gap;
  long long sum_sq;
  auto operator<=>(const SpreadScore&) const = default;
};

inline SpreadScore spread_score(std::span<const int> sorted, int period) {
  SpreadScore s{0, 0};
  const auto add = [&](int g) {
    s.max_gap = std::max(s.max_gap, g);
    s.sum_sq += static_cast<long long>(g) * g;
  };
  add(sorted.front() + period - sorted.back());
  for (std::size_t i = 1; i < sorted.size(); ++i) add(sorted[i] - sorted[i - 1]);
  return s;
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline constexpr double kExhaustiveLimit = 4e6;

inline std::vector<int> even_spread_exhaustive(const std::vector<int>& offsets, int m, int period) {
  const int n = static_cast<int>(offsets.size());
  std::vector<int> idx(static_cast<std::size_t>(m));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<int> pick(static_cast<std::size_t>(m)), best;
  SpreadScore best_score{};
  while (true) {
    for (int i = 0; i < m; ++i) pick[static_cast<std::size_t>(i)] = offsets[static_cast<std::size_t>(idx[i])];
    const SpreadScore s = spread_score(pick, period);
    if (best.empty() || s < best_score) {
      best = pick;
      best_score = s;
    }
    int i = m - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - m + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

inline std::vector<int> even_spread_greedy(const std::vector<int>& offsets, int m, int period) {
  std::vector<int> chosen;
  const auto scored = [&](const std::vector<int>& set) {
    std::vector<int> s = set;
    std::sort(s.begin(), s.end());
    return spread_score(s, period);
  };
  while (static_cast<int>(chosen.size()) < m) {
    int best = -1;
    SpreadScore best_score{};
    for (int c : offsets) {
      if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
      auto trial = chosen;
      trial.push_back(c);
      const auto s = scored(trial);
      if (best < 0 || s < best_score) {
        best = c;
        best_score = s;
      }
    }
    chosen.push_back(best);
  }
  // Pairwise-swap refinement until no single exchange improves the score.
  bool improved = true;
  while (improved) {
    improved = false;
    SpreadScore current = scored(chosen);
    for (std::size_t i = 0; i < chosen.size() && !improved; ++i) {
      for (int c : offsets) {
        if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
        auto trial = chosen;
        trial[i] = c;
        const auto s = scored(trial);
        if (s < current) {
          chosen = trial;
          improved = true;
          break;
        }
      }
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace detail

/// Offsets chosen by the even_spread rule: minimize the maximum circular gap
/// modulo the block period, then the sum of squared gaps; ties go to the
/// lexicographically smallest offset list. Exact (exhaustive) when the number
/// of subsets is below kExhaustiveLimit, greedy with swap refinement otherwise.
inline std::vector<int> even_spread_offsets(const std::vector<int>& offsets, int m_used, int block_period) {
  detail::require(m_used >= 1 && m_used <= static_cast<int>(offsets.size()), "m_used out of range");
  const int n = static_cast<int>(offsets.size());
  if (m_used == n) return offsets;
  if (detail::binomial(n, m_used) <= detail::kExhaustiveLimit)
    return detail::even_spread_exhaustive(offsets, m_used, block_period);
  return detail::even_spread_greedy(offsets, m_used, block_period);
}

/// Sorted uniformly random p-subset of [0, n).
inline std::vector<int> random_subset(int n, int p, std::uint64_t seed) {
  detail::require(p >= 1 && p <= n, "subset size out of range");
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  Rng rng(seed);
  for (int i = 0; i < p; ++i) {
    const auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(n - i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
  }
  std::vector<int> out(pool.begin(), pool.begin() + p);
  std::sort(out.begin(), out.end());
  return out;
}

template <typename Real>
SequenceSet<Real> select_sequences(const SequenceSet<Real>& set, int m_used, SelectionStrategy strategy,
                                   std::uint64_t seed = 0) {
  const int total = static_cast<int>(set.size());
  detail::require(m_used >= 1 && m_used <= total, "m_used must lie in [1, M]");
  if (m_used == total) return set;

  std::vector<std::size_t> keep;
  switch (strategy) {
    case SelectionStrategy::prefix:
      for (int i = 0; i < m_used; ++i) keep.push_back(static_cast<std::size_t>(i));
      break;
    case SelectionStrategy::seeded_random:
      for (int i : random_subset(total, m_used, seed)) keep.push_back(static_cast<std::size_t>(i));
      break;
    case SelectionStrategy::even_spread: {
      const auto offs = set.offsets();
      for (int c : even_spread_offsets(offs, m_used, set.block_period))
        keep.push_back(static_cast<std::size_t>(std::find(offs.begin(), offs.end(), c) - offs.begin()));
      break;
    }
  }
  SequenceSet<Real> out;
  out.block_period = set.block_period;
  for (std::size_t i : keep) out.sequences.push_back(set.sequences[i]);
  return out;
}

/// Multi-coset sampling: x_d[n] = x(n P T + d T) for every d in the pattern.
/// The window is truncated to a whole number of periods.
template <typename Real>
SequenceSet<Real> mcs_resequence(const NyquistSignal<Real>& signal, int period, std::span<const int> pattern) {
  detail::require(period >= 1, "MCS period must be positive");
  detail::require(!pattern.empty(), "MCS pattern must not be empty");
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    detail::require(pattern[i] >= 0 && pattern[i] < period, "MCS offset out of range");
    detail::require(i == 0 || pattern[i] > pattern[i - 1], "MCS offsets must be strictly increasing");
  }
  const Eigen::Index blocks = signal.size() / period;
  detail::require(blocks >= 1, "signal shorter than one MCS period");
  SequenceSet<Real> set;
  set.block_period = period;
  for (int d : pattern) {
    DecimatedSequence<Real> s{d, period, Vector<Real>(blocks)};
    for (Eigen::Index n = 0; n < blocks; ++n) s.samples[n] = signal.samples[n * period + d];
    set.sequences.push_back(std::move(s));
  }
  return set;
}

/// (L1 + L2) / (L T).
inline double average_rate(const CoprimeConfig& cfg) {
  return static_cast<double>(cfg.l1 + cfg.l2) / (cfg.l() * cfg.base_period);
}

/// Rough MWC channel count round(8 K log2(Q / 4K)); requires Q > 4K.
inline int mwc_channel_count(int k_pairs, int q_slices) {
  detail::require(k_pairs >= 1, "K must be at least 1");
  if (q_slices <= 4 * k_pairs) throw DomainError("MWC channel count needs Q > 4K");
  return static_cast<int>(std::lround(8.0 * k_pairs * std::log2(static_cast<double>(q_slices) / (4.0 * k_pairs))));
}

}  // namespace scs
