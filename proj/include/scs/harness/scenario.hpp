#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "scs/sampling.hpp"

namespace scs::harness {

enum class Study { fig6, fig7, fig8, ranks };
enum class Method { scs, mcs };

/// One Monte Carlo campaign. Every trial of every sweep point draws its own
/// random spec from mix_seed(seed, trial); the same trial index therefore
/// sees the same signal at every sweep point.
struct Scenario {
  Study study = Study::fig6;
  int l1 = 6;
  int l2 = 17;
  double nyquist_rate = 10e9;  ///< Hz
  int k_bands = 3;
  Eigen::Index n_blocks = 64;  ///< N_f
  std::vector<int> sequences{10};
  std::vector<double> input_snr_db{std::numeric_limits<double>::infinity()};
  int trials = 1;
  std::uint64_t seed = 1;
  std::vector<Method> methods{Method::scs};
  SelectionStrategy strategy = SelectionStrategy::even_spread;
  double rank_tau = 1e-4;  ///< relative eigenvalue threshold for noise-free data
  int workers = 0;         ///< 0: hardware concurrency
  std::string out_dir = "results";

  CoprimeConfig config() const { return {l1, l2, 1.0 / nyquist_rate}; }
  void validate() const;
};

/// Study defaults: fig6 one noise-free run with 10 sequences, fig7 m = 10..19
/// against MCS, fig8 14 sequences over 5..50 dB plus a noise-free control.
Scenario default_scenario(Study study);

Study parse_study(const std::string& text);
std::string to_string(Study s);
Method parse_method(const std::string& text);
std::string to_string(Method m);
/// "scs", "mcs" or "both".
std::vector<Method> parse_baseline(const std::string& text);
SelectionStrategy parse_strategy(const std::string& text);
std::string to_string(SelectionStrategy s);

/// "12", "10:19", "5:50:5" or a comma list of those.
std::vector<int> parse_int_sweep(const std::string& text);
/// As parse_int_sweep but real valued; "inf" or "none" means noise-free.
std::vector<double> parse_snr_sweep(const std::string& text);

/// Applies one key=value pair; throws InvalidArgument for unknown keys.
void apply_setting(Scenario& s, const std::string& key, const std::string& value);

/// Flat "key = value" text, '#' starts a comment. The `study` key picks the
/// defaults the remaining keys override, wherever it appears.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Serialization accepted by parse_scenario.
std::string to_text(const Scenario& s);

}  // namespace scs::harness
