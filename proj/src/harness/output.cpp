#include "scs/harness/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <tuple>

#include "scs/fft.hpp"

namespace scs::harness {

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw Error("cannot write '" + p.string() + "'");
  return os;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("number formatting failed");
  return {buf, ptr};
}

void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << "study,method,l1,l2,k,blocks,strategy,trial,seed,sequences_used,input_snr_db,output_snr_db,"
        "support_exact,true_support_size,support_size,rank_estimate,condition,status,pattern\n";
  for (const auto& r : records) {
    os << r.study << ',' << r.method << ',' << r.l1 << ',' << r.l2 << ',' << r.k_bands << ',' << r.n_blocks << ','
       << r.strategy << ',' << r.trial << ',' << r.seed << ',' << r.sequences_used << ','
       << format_number(r.input_snr_db) << ',' << format_number(r.output_snr_db) << ',' << (r.support_exact ? 1 : 0)
       << ',' << r.true_support_size << ',' << r.support_size << ',' << r.rank_estimate << ','
       << format_number(r.condition) << ',' << r.status << ',' << r.pattern << '\n';
  }
}

void write_timing_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << "method,sequences_used,input_snr_db,trial,seed,wall_seconds\n";
  for (const auto& r : records)
    os << r.method << ',' << r.sequences_used << ',' << format_number(r.input_snr_db) << ',' << r.trial << ','
       << r.seed << ',' << format_number(r.wall_seconds) << '\n';
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  std::vector<SummaryRow> rows;
  std::map<std::tuple<std::string, int, double>, std::size_t> index;
  for (const auto& r : records) {
    const auto key = std::make_tuple(r.method, r.sequences_used, r.input_snr_db);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, rows.size()).first;
      SummaryRow row;
      row.method = r.method;
      row.sequences_used = r.sequences_used;
      row.input_snr_db = r.input_snr_db;
      row.min_snr_db = std::numeric_limits<double>::infinity();
      row.max_snr_db = -std::numeric_limits<double>::infinity();
      rows.push_back(row);
    }
    SummaryRow& row = rows[it->second];
    ++row.trials;
    row.mean_snr_db += r.output_snr_db;
    row.min_snr_db = std::min(row.min_snr_db, r.output_snr_db);
    row.max_snr_db = std::max(row.max_snr_db, r.output_snr_db);
    row.exact_support_rate += r.support_exact ? 1.0 : 0.0;
    row.failures += r.status == "ok" ? 0 : 1;
  }
  for (auto& row : rows) {
    row.mean_snr_db /= row.trials;
    row.exact_support_rate /= row.trials;
  }
  return rows;
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "method,sequences_used,input_snr_db,trials,mean_snr_db,min_snr_db,max_snr_db,exact_support_rate,failures\n";
  for (const auto& r : rows)
    os << r.method << ',' << r.sequences_used << ',' << format_number(r.input_snr_db) << ',' << r.trials << ','
       << format_number(r.mean_snr_db) << ',' << format_number(r.min_snr_db) << ',' << format_number(r.max_snr_db)
       << ',' << format_number(r.exact_support_rate) << ',' << r.failures << '\n';
}

void write_waveform(std::ostream& os, const NyquistSignal<double>& s, double time_origin) {
  os << "# time_ns value\n";
  for (Eigen::Index n = 0; n < s.size(); ++n)
    os << format_number((time_origin + static_cast<double>(n) * s.base_period) * 1e9) << ' '
       << format_number(s.samples[n]) << '\n';
}

void write_spectrum(std::ostream& os, const NyquistSignal<double>& s, const NyquistSignal<double>& reference) {
  const auto spec = dft<double>(s.samples);
  const double peak = dft<double>(reference.samples).cwiseAbs().maxCoeff();
  const Eigen::Index n = s.size();
  const double df = 1.0 / (static_cast<double>(n) * s.base_period);
  os << "# frequency_ghz magnitude_db\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index m = (i + (n + 1) / 2) % n;  // lowest frequency first
    const Eigen::Index signed_m = m > (n - 1) / 2 ? m - n : m;
    const double mag = std::abs(spec[m]);
    const double db = mag > 0.0 && peak > 0.0 ? 20.0 * std::log10(mag / peak) : -400.0;
    os << format_number(static_cast<double>(signed_m) * df / 1e9) << ' ' << format_number(std::max(db, -400.0))
       << '\n';
  }
}

void write_rank_csv(std::ostream& os, const RankSuiteResult& r) {
  os << "l1,l2,support_size,trial,seed,construction,support,rank,pass\n";
  for (const auto& c : r.cases) {
    std::string support;
    for (std::size_t i = 0; i < c.support.size(); ++i) support += (i ? " " : "") + std::to_string(c.support[i]);
    os << c.l1 << ',' << c.l2 << ',' << c.support_size << ',' << c.trial << ',' << c.seed << ',' << c.construction
       << ',' << support << ',' << c.rank << ',' << (c.pass ? 1 : 0) << '\n';
  }
}

void write_phi_rank_csv(std::ostream& os, const RankSuiteResult& r) {
  os << "l1,l2,m,rank,pass\n";
  for (const auto& p : r.phi) os << p.l1 << ',' << p.l2 << ',' << p.m << ',' << p.rank << ',' << (p.pass ? 1 : 0) << '\n';
}

void write_deficiency_csv(std::ostream& os, const RankSuiteResult& r) {
  os << "l1,l2,support_size,draws,rank_deficient\n";
  for (const auto& d : r.deficiency)
    os << d.l1 << ',' << d.l2 << ',' << d.support_size << ',' << d.draws << ',' << d.deficient << '\n';
}

std::vector<std::filesystem::path> write_study(const std::filesystem::path& dir, const Scenario& s,
                                               const StudyResult& r) {
  std::filesystem::create_directories(dir);
  const std::string stem = to_string(s.study);
  std::vector<std::filesystem::path> files{dir / (stem + "_trials.csv"), dir / (stem + "_summary.csv"),
                                           dir / (stem + "_timing.csv")};
  {
    auto os = open_out(files[0]);
    write_trials_csv(os, r.records);
  }
  {
    auto os = open_out(files[1]);
    write_summary_csv(os, summarize(r.records));
  }
  {
    auto os = open_out(files[2]);
    write_timing_csv(os, r.records);
  }
  if (r.dump) {
    const auto& d = *r.dump;
    const std::vector<std::pair<std::string, const NyquistSignal<double>*>> dumps{{"original", &d.original},
                                                                               {"reconstructed", &d.reconstructed}};
    for (const auto& [name, sig] : dumps) {
      files.push_back(dir / (stem + "_" + name + "_waveform.txt"));
      auto w = open_out(files.back());
      write_waveform(w, *sig, d.time_origin);
      files.push_back(dir / (stem + "_" + name + "_spectrum.txt"));
      auto f = open_out(files.back());
      write_spectrum(f, *sig, d.original);
    }
  }
  return files;
}

std::vector<std::filesystem::path> write_rank_suite(const std::filesystem::path& dir, const RankSuiteResult& r) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> files{dir / "ranks.csv", dir / "ranks_phi.csv", dir / "ranks_deficiency.csv"};
  auto a = open_out(files[0]);
  write_rank_csv(a, r);
  auto b = open_out(files[1]);
  write_phi_rank_csv(b, r);
  auto c = open_out(files[2]);
  write_deficiency_csv(c, r);
  return files;
}

}  // namespace scs::harness
