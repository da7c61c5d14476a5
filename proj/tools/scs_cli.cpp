// Command-line front end for the co-prime sampling experiments.

#include <CLI11.hpp>

#include <chrono>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "scs/harness/experiments.hpp"
#include "scs/harness/output.hpp"
#include "scs/harness/scenario.hpp"

using namespace scs::harness;

namespace {

struct Flags {
  std::optional<int> l1, l2, k, trials, workers;
  std::optional<long long> blocks;
  std::optional<std::string> sequences, snr_in, baseline, strategy, out, seed, nyquist_ghz, rank_tau;
};

void add_flags(CLI::App* app, Flags& f) {
  app->add_option("--l1", f.l1, "first decimation factor");
  app->add_option("--l2", f.l2, "second decimation factor (co-prime with L1)");
  app->add_option("--k", f.k, "number of band pairs K");
  app->add_option("--blocks", f.blocks, "blocks per acquisition (N_f)");
  app->add_option("--sequences", f.sequences, "sequences used: value, list or range such as 10:19");
  app->add_option("--trials", f.trials, "seeded trials per sweep point");
  app->add_option("--seed", f.seed, "base seed");
  app->add_option("--snr-in", f.snr_in, "input SNR in dB: value, list, range such as 5:50:5, or inf");
  app->add_option("--baseline", f.baseline, "scs, mcs or both");
  app->add_option("--strategy", f.strategy, "sequence selection: even_spread, prefix or random");
  app->add_option("--nyquist-ghz", f.nyquist_ghz, "Nyquist rate in GHz");
  app->add_option("--rank-tau", f.rank_tau, "relative eigenvalue threshold for noise-free rank estimation");
  app->add_option("--workers", f.workers, "worker threads (0 = all cores)");
  app->add_option("--out", f.out, "output directory");
}

void apply(Scenario& s, const Flags& f) {
  const auto set = [&](const char* key, const auto& opt) {
    if (!opt) return;
    if constexpr (std::is_same_v<std::decay_t<decltype(*opt)>, std::string>) apply_setting(s, key, *opt);
    else apply_setting(s, key, std::to_string(*opt));
  };
  set("l1", f.l1);
  set("l2", f.l2);
  set("k", f.k);
  set("blocks", f.blocks);
  set("sequences", f.sequences);
  set("trials", f.trials);
  set("seed", f.seed);
  set("snr-in", f.snr_in);
  set("baseline", f.baseline);
  set("strategy", f.strategy);
  set("nyquist-ghz", f.nyquist_ghz);
  set("rank-tau", f.rank_tau);
  set("workers", f.workers);
  set("out", f.out);
}

int execute(Scenario s) {
  s.validate();
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::filesystem::path> files;
  if (s.study == Study::ranks) {
    const auto r = run_rank_suite(s.seed, s.trials, s.n_blocks, 400, s.workers);
    files = write_rank_suite(s.out_dir, r);
    int failed = 0;
    for (const auto& c : r.cases) {
      if (c.pass) continue;
      ++failed;
      std::cout << "FAIL rank case (" << c.l1 << "," << c.l2 << ") |S|=" << c.support_size << " trial " << c.trial
                << " seed " << c.seed << ": rank " << c.rank << '\n';
    }
    for (const auto& p : r.phi) {
      if (p.pass) continue;
      ++failed;
      std::cout << "FAIL rank(Phi) (" << p.l1 << "," << p.l2 << "): " << p.rank << " != " << p.m << '\n';
    }
    std::cout << r.cases.size() << " rank cases, " << r.phi.size() << " Phi checks, " << failed << " failed\n";
    for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
    return failed == 0 ? 0 : 1;
  }

  const auto r = s.study == Study::fig6 ? run_fig6(s) : s.study == Study::fig7 ? run_fig7(s) : run_fig8(s);
  files = write_study(s.out_dir, s, r);
  std::cout << std::left << std::setw(8) << "method" << std::setw(11) << "sequences" << std::setw(10) << "snr_in"
            << std::setw(12) << "mean_snr" << std::setw(12) << "min_snr" << std::setw(10) << "exact" << "failures\n";
  std::cout << std::fixed << std::setprecision(2);
  for (const auto& row : summarize(r.records)) {
    std::cout << std::setw(8) << row.method << std::setw(11) << row.sequences_used << std::setw(10)
              << format_number(row.input_snr_db) << std::setw(12) << row.mean_snr_db << std::setw(12)
              << row.min_snr_db << std::setw(10) << row.exact_support_rate << row.failures << '\n';
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "elapsed " << secs << " s\n";
  for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-prime sampling reconstruction experiments"};
  app.require_subcommand(1);

  Flags f6, f7, f8, fr, frun;
  auto* fig6 = app.add_subcommand("fig6", "single noise-free reconstruction with waveform and spectrum dumps");
  auto* fig7 = app.add_subcommand("fig7", "output SNR against the number of sequences, SCS and MCS");
  auto* fig8 = app.add_subcommand("fig8", "output SNR against input SNR");
  auto* ranks = app.add_subcommand("ranks", "covariance rank sweep and measurement matrix rank checks");
  auto* run = app.add_subcommand("run", "run a scenario file; flags override its values");
  add_flags(fig6, f6);
  add_flags(fig7, f7);
  add_flags(fig8, f8);
  add_flags(ranks, fr);
  add_flags(run, frun);
  std::string scenario_file;
  run->add_option("scenario", scenario_file, "key = value scenario file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    Scenario s;
    if (*fig6) {
      s = default_scenario(Study::fig6);
      apply(s, f6);
    } else if (*fig7) {
      s = default_scenario(Study::fig7);
      apply(s, f7);
    } else if (*fig8) {
      s = default_scenario(Study::fig8);
      apply(s, f8);
    } else if (*ranks) {
      s = default_scenario(Study::ranks);
      apply(s, fr);
    } else {
      s = load_scenario(scenario_file);
      apply(s, frun);
    }
    return execute(std::move(s));
  } catch (const scs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
