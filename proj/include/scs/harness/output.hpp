#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "scs/harness/experiments.hpp"

namespace scs::harness {

/// Shortest decimal text that round-trips the double; "inf"/"-inf"/"nan".
std::string format_number(double v);

void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records);
void write_timing_csv(std::ostream& os, const std::vector<TrialRecord>& records);

struct SummaryRow {
  std::string method;
  int sequences_used = 0;
  double input_snr_db = 0.0;
  int trials = 0;
  double mean_snr_db = 0.0;
  double min_snr_db = 0.0;
  double max_snr_db = 0.0;
  double exact_support_rate = 0.0;
  int failures = 0;
};

/// One row per (sweep point, method), in record order.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

/// Two-column text: time in ns and sample value.
void write_waveform(std::ostream& os, const NyquistSignal<double>& s, double time_origin);
/// Two-column text: frequency in GHz over [-f_Nyq/2, f_Nyq/2) and |X| in dB
/// relative to the peak of `reference`.
void write_spectrum(std::ostream& os, const NyquistSignal<double>& s, const NyquistSignal<double>& reference);

void write_rank_csv(std::ostream& os, const RankSuiteResult& r);
void write_phi_rank_csv(std::ostream& os, const RankSuiteResult& r);
void write_deficiency_csv(std::ostream& os, const RankSuiteResult& r);

/// Writes <study>_trials.csv, <study>_summary.csv, <study>_timing.csv and,
/// for fig6, the waveform and spectrum dumps. Returns the files written.
std::vector<std::filesystem::path> write_study(const std::filesystem::path& dir, const Scenario& s,
                                               const StudyResult& r);
std::vector<std::filesystem::path> write_rank_suite(const std::filesystem::path& dir, const RankSuiteResult& r);

}  // namespace scs::harness
