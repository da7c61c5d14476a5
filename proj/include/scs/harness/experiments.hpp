#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scs/harness/scenario.hpp"
#include "scs/signal.hpp"

namespace scs::harness {

/// Everything needed to rerun one trial in isolation.
struct TrialSetup {
  CoprimeConfig config;
  double nyquist_rate = 10e9;
  int k_bands = 3;
  Eigen::Index n_blocks = 64;
  int sequences = 10;
  double input_snr_db = std::numeric_limits<double>::infinity();
  Method method = Method::scs;
  SelectionStrategy strategy = SelectionStrategy::even_spread;
  std::uint64_t seed = 0;  ///< trial seed (already mixed with the trial index)
  double rank_tau = 1e-4;
};

struct TrialRecord {
  std::string study;
  std::string method;
  int l1 = 0;
  int l2 = 0;
  int k_bands = 0;
  Eigen::Index n_blocks = 0;
  std::string strategy;
  int trial = 0;
  std::uint64_t seed = 0;
  int sequences_used = 0;
  double input_snr_db = 0.0;
  double output_snr_db = 0.0;
  bool support_exact = false;
  int true_support_size = 0;
  int support_size = 0;
  int rank_estimate = 0;
  double condition = 0.0;
  std::string status;  ///< "ok" or the failure kind
  std::string pattern; ///< offsets used, space separated
  double wall_seconds = 0.0;
};

/// Waveforms and spectra of one run, for external plotting.
struct TrialDump {
  NyquistSignal<double> original;
  NyquistSignal<double> reconstructed;
  double time_origin = 0.0;
};

/// Time window of a trial: N_f * L Nyquist samples centered on t = 0.
double window_origin(const TrialSetup& setup);

/// Runs the full pipeline once. Recovery failures are recorded (status,
/// zero waveform, output SNR 0 dB), never thrown.
TrialRecord run_trial(const TrialSetup& setup, TrialDump* dump = nullptr);

struct StudyResult {
  std::vector<TrialRecord> records;  ///< sweep-point major, then method, then trial
  std::optional<TrialDump> dump;
};

/// Runs every trial of a fig6/fig7/fig8 scenario. Records come back in a
/// fixed order regardless of the worker count.
StudyResult run_study(const Scenario& s);

StudyResult run_fig6(const Scenario& s);
StudyResult run_fig7(const Scenario& s);
StudyResult run_fig8(const Scenario& s);

struct RankCase {
  int l1 = 0;
  int l2 = 0;
  int support_size = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string construction;  ///< "random", "run" or "rejected"
  std::vector<int> support;
  int rank = 0;
  bool pass = false;
};

struct PhiRankCase {
  int l1 = 0;
  int l2 = 0;
  int m = 0;
  int rank = 0;
  bool pass = false;
};

struct RankSuiteResult {
  std::vector<RankCase> cases;
  std::vector<PhiRankCase> phi;
  /// Per config and |S|: fraction of uniformly random supports whose Phi_S
  /// is column-rank deficient (outside the rank hypothesis).
  struct Deficiency {
    int l1 = 0;
    int l2 = 0;
    int support_size = 0;
    int draws = 0;
    int deficient = 0;
  };
  std::vector<Deficiency> deficiency;
  bool all_pass() const;
};

/// Rank sweep over |S| = 1..M-1 on (3,4) and (6,17) with complex random
/// slice contents, the |S| = M rejection check, and the rank(Phi) = M sweep
/// over every co-prime pair with L <= max_l.
RankSuiteResult run_rank_suite(std::uint64_t seed = 1, int trials = 20, Eigen::Index n_bins = 64, int max_l = 400,
                               int workers = 0);

/// Support of size s with full column rank Phi_S: the first of up to
/// `attempts` uniform draws that qualifies, else a circular run of slices
/// from a random start. Returns the support and "random" or "run".
std::pair<std::vector<int>, std::string> full_rank_support(const ComplexMatrix<double>& phi, int s,
                                                           std::uint64_t seed, int attempts = 200);

/// Runs f(i) for i in [0, n) on `workers` threads (0: hardware concurrency).
void parallel_for(int n, int workers, const std::function<void(int)>& f);

}  // namespace scs::harness
