#include "scs/harness/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "scs/recovery.hpp"
#include "scs/spectral.hpp"

namespace scs::harness {

namespace {

std::string join(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + std::to_string(v[i]);
  return out;
}

TrialSetup setup_for(const Scenario& s, int sequences, double snr, Method method, int trial) {
  TrialSetup t;
  t.config = s.config();
  t.nyquist_rate = s.nyquist_rate;
  t.k_bands = s.k_bands;
  t.n_blocks = s.n_blocks;
  t.sequences = sequences;
  t.input_snr_db = snr;
  t.method = method;
  t.strategy = s.strategy;
  t.seed = mix_seed(s.seed, static_cast<std::uint64_t>(trial));
  t.rank_tau = s.rank_tau;
  return t;
}

}  // namespace

void parallel_for(int n, int workers, const std::function<void(int)>& f) {
  if (n <= 0) return;
  int w = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  w = std::min(w, n);
  if (w == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < w; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

double window_origin(const TrialSetup& setup) {
  const double n = static_cast<double>(setup.n_blocks) * setup.config.l();
  return -0.5 * n / setup.nyquist_rate;
}

TrialRecord run_trial(const TrialSetup& st, TrialDump* dump) {
  const auto start = std::chrono::steady_clock::now();
  const CoprimeConfig& cfg = st.config;
  const double t_step = 1.0 / st.nyquist_rate;
  const FrequencyGrid grid(st.n_blocks, cfg.l(), t_step);

  TrialRecord rec;
  rec.method = to_string(st.method);
  rec.l1 = cfg.l1;
  rec.l2 = cfg.l2;
  rec.k_bands = st.k_bands;
  rec.n_blocks = st.n_blocks;
  rec.strategy = st.method == Method::scs ? to_string(st.strategy) : "random";
  rec.seed = st.seed;
  rec.sequences_used = st.sequences;
  rec.input_snr_db = st.input_snr_db;

  const auto spec = randomize_spec(st.seed, st.k_bands, st.nyquist_rate);
  const double t0 = window_origin(st);
  const auto clean = synthesize_multiband(spec, grid.full_length(), t0);
  const auto observed = add_awgn(clean, st.input_snr_db, mix_seed(st.seed, 1));
  const auto truth = occupied_slices(spec, grid);
  rec.true_support_size = static_cast<int>(truth.size());

  SequenceSet<double> used;
  if (st.method == Method::scs) {
    const auto all = resequence(acquire(observed, cfg), cfg);
    used = select_sequences(all, st.sequences, st.strategy, mix_seed(st.seed, 2));
  } else {
    const auto pattern = random_subset(cfg.l(), st.sequences, mix_seed(st.seed, 3));
    used = mcs_resequence(observed, cfg.l(), std::span<const int>(pattern));
  }
  rec.pattern = join(used.offsets());

  ReconstructionOptions opts;
  opts.rank = std::isinf(st.input_snr_db) ? RankPolicy::relative_threshold(st.rank_tau) : RankPolicy::largest_gap();
  opts.max_support = st.sequences - 1;

  NyquistSignal<double> estimate{Vector<double>::Zero(clean.size()), t_step};
  try {
    auto result = reconstruct(used, t_step, opts);
    rec.status = "ok";
    rec.rank_estimate = result.diagnostics.rank_estimate;
    rec.support_size = static_cast<int>(result.support.indices.size());
    rec.condition = result.diagnostics.condition;
    rec.support_exact = result.support.indices == truth;
    estimate = std::move(result.waveform);
  } catch (const SingularSystem&) {
    rec.status = "singular";
  } catch (const Error&) {
    rec.status = "error";
  }
  rec.output_snr_db = snr_db(clean, estimate);

  if (dump) *dump = TrialDump{clean, estimate, t0};
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

StudyResult run_study(const Scenario& s) {
  s.validate();
  detail::require(s.study != Study::ranks, "run_study handles fig6, fig7 and fig8 only");
  struct Task {
    int sequences;
    double snr;
    Method method;
    int trial;
  };
  std::vector<Task> tasks;
  for (int q : s.sequences)
    for (double snr : s.input_snr_db)
      for (Method m : s.methods)
        for (int t = 0; t < s.trials; ++t) tasks.push_back({q, snr, m, t});

  StudyResult out;
  out.records.resize(tasks.size());
  TrialDump dump;
  const bool want_dump = s.study == Study::fig6;
  parallel_for(static_cast<int>(tasks.size()), s.workers, [&](int i) {
    const Task& task = tasks[static_cast<std::size_t>(i)];
    auto rec = run_trial(setup_for(s, task.sequences, task.snr, task.method, task.trial),
                         want_dump && i == 0 ? &dump : nullptr);
    rec.study = to_string(s.study);
    rec.trial = task.trial;
    out.records[static_cast<std::size_t>(i)] = std::move(rec);
  });
  if (want_dump) out.dump = std::move(dump);
  return out;
}

StudyResult run_fig6(const Scenario& s) {
  detail::require(s.study == Study::fig6, "scenario is not a fig6 study");
  for (double snr : s.input_snr_db) detail::require(std::isinf(snr), "fig6 is noise free");
  return run_study(s);
}

StudyResult run_fig7(const Scenario& s) {
  detail::require(s.study == Study::fig7, "scenario is not a fig7 study");
  for (double snr : s.input_snr_db) detail::require(std::isinf(snr), "fig7 is noise free");
  return run_study(s);
}

StudyResult run_fig8(const Scenario& s) {
  detail::require(s.study == Study::fig8, "scenario is not a fig8 study");
  return run_study(s);
}

bool RankSuiteResult::all_pass() const {
  return std::all_of(cases.begin(), cases.end(), [](const RankCase& c) { return c.pass; }) &&
         std::all_of(phi.begin(), phi.end(), [](const PhiRankCase& c) { return c.pass; });
}

std::pair<std::vector<int>, std::string> full_rank_support(const ComplexMatrix<double>& phi, int s,
                                                           std::uint64_t seed, int attempts) {
  const int l = static_cast<int>(phi.cols());
  detail::require(s >= 1 && s <= l, "support size out of range");
  const auto full_rank = [&](const std::vector<int>& support) {
    ComplexMatrix<double> a(phi.rows(), s);
    for (int j = 0; j < s; ++j) a.col(j) = phi.col(support[static_cast<std::size_t>(j)]);
    Eigen::JacobiSVD<ComplexMatrix<double>> svd(a);
    const auto& sv = svd.singularValues();
    return sv[sv.size() - 1] > 1e-8 * sv[0];
  };
  for (int a = 0; a < attempts; ++a) {
    auto support = random_subset(l, s, mix_seed(seed, static_cast<std::uint64_t>(a)));
    if (full_rank(support)) return {support, "random"};
  }
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(attempts)));
  const int start = static_cast<int>(rng.below(static_cast<std::uint64_t>(l)));
  std::vector<int> run;
  for (int j = 0; j < s; ++j) run.push_back((start + j) % l);
  std::sort(run.begin(), run.end());
  return {run, "run"};
}

RankSuiteResult run_rank_suite(std::uint64_t seed, int trials, Eigen::Index n_bins, int max_l, int workers) {
  detail::require(trials >= 1, "trials must be at least 1");
  RankSuiteResult out;

  struct Job {
    int l1, l2, s, trial;
  };
  std::vector<Job> jobs;
  for (auto [a, b] : {std::pair{3, 4}, std::pair{6, 17}}) {
    const int m = a + b - 1;
    detail::require(n_bins >= m, "rank suite needs at least M bins per slice");
    for (int s = 1; s <= m; ++s)
      for (int t = 0; t < trials; ++t) jobs.push_back({a, b, s, t});
  }
  out.cases.resize(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), workers, [&](int i) {
    const Job& job = jobs[static_cast<std::size_t>(i)];
    const CoprimeConfig cfg(job.l1, job.l2);
    const FrequencyGrid grid(n_bins, cfg.l(), 1.0);
    const auto phi = build_phi(coprime_pattern(cfg), cfg);
    const int m = cfg.m();

    RankCase c;
    c.l1 = job.l1;
    c.l2 = job.l2;
    c.support_size = job.s;
    c.trial = job.trial;
    c.seed = mix_seed(mix_seed(seed, static_cast<std::uint64_t>(cfg.l())),
                      static_cast<std::uint64_t>(job.s) * 100003u + static_cast<std::uint64_t>(job.trial));
    if (job.s == m) {
      // out of contract: a support this large must be refused
      c.construction = "rejected";
      c.support = random_subset(cfg.l(), job.s, c.seed);
      SpectralMeasurements<double> meas{ComplexMatrix<double>::Zero(m, n_bins), phi.row_offsets};
      try {
        (void)solve_slices(meas, phi, std::span<const int>(c.support));
      } catch (const SingularSystem&) {
        c.pass = true;
      }
      out.cases[static_cast<std::size_t>(i)] = std::move(c);
      return;
    }
    std::tie(c.support, c.construction) = full_rank_support(phi.entries, job.s, c.seed);
    Rng rng(mix_seed(c.seed, 0xC0FFEE));
    ComplexMatrix<double> x(job.s, n_bins);
    for (Eigen::Index r = 0; r < x.rows(); ++r)
      for (Eigen::Index k = 0; k < n_bins; ++k) x(r, k) = {rng.normal(), rng.normal()};
    SpectralMeasurements<double> meas{phi.columns(c.support) * x, phi.row_offsets};
    c.rank = rank_diagnostic(covariance(meas, grid), 1e-8);
    c.pass = c.rank == job.s;
    out.cases[static_cast<std::size_t>(i)] = std::move(c);
  });

  for (auto [a, b] : {std::pair{3, 4}, std::pair{6, 17}}) {
    const CoprimeConfig cfg(a, b);
    const auto phi = build_phi(coprime_pattern(cfg), cfg);
    for (int s = 1; s < cfg.m(); ++s) {
      RankSuiteResult::Deficiency d{a, b, s, 200, 0};
      for (int t = 0; t < d.draws; ++t) {
        const auto support = random_subset(cfg.l(), s, mix_seed(seed ^ 0xDEF1C1E7ULL, static_cast<std::uint64_t>(s * 1000 + t)));
        Eigen::JacobiSVD<ComplexMatrix<double>> svd(phi.columns(support));
        const auto& sv = svd.singularValues();
        if (!(sv[sv.size() - 1] > 1e-8 * sv[0])) ++d.deficient;
      }
      out.deficiency.push_back(d);
    }
  }

  for (int a = 2; a <= max_l / 2; ++a) {
    for (int b = 2; a * b <= max_l; ++b) {
      if (std::gcd(a, b) != 1) continue;
      const CoprimeConfig cfg(a, b);
      const auto phi = build_phi(coprime_pattern(cfg), cfg);
      // Phi Phi^H is M x M, so the rank test stays cheap for wide matrices.
      const ComplexMatrix<double> gram = phi.entries * phi.entries.adjoint();
      PhiRankCase p{a, b, cfg.m(), rank_diagnostic<double>(0.5 * (gram + gram.adjoint()), 1e-10), false};
      p.pass = p.rank == p.m;
      out.phi.push_back(p);
    }
  }
  return out;
}

}  // namespace scs::harness
