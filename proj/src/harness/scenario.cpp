#include "scs/harness/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "scs/harness/output.hpp"

namespace scs::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

long long to_integer(const std::string& text, const std::string& what) {
  long long v = 0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  detail::require(ec == std::errc() && ptr == t.data() + t.size() && !t.empty(), "bad integer for " + what + ": '" + text + "'");
  return v;
}

std::uint64_t to_unsigned(const std::string& text, const std::string& what) {
  std::uint64_t v = 0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  detail::require(ec == std::errc() && ptr == t.data() + t.size() && !t.empty(), "bad unsigned integer for " + what + ": '" + text + "'");
  return v;
}

double to_real(const std::string& text, const std::string& what) {
  const auto t = lower(trim(text));
  if (t == "inf" || t == "none" || t == "+inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  detail::require(used == t.size() && !t.empty() && std::isfinite(v), "bad number for " + what + ": '" + text + "'");
  return v;
}

}  // namespace

void Scenario::validate() const {
  (void)config();
  detail::require(nyquist_rate > 100e6, "nyquist rate must exceed 100 MHz");
  detail::require(k_bands >= 1, "k must be at least 1");
  detail::require(n_blocks >= 2, "blocks must be at least 2");
  detail::require(trials >= 1, "trials must be at least 1");
  detail::require(!methods.empty(), "at least one method is required");
  detail::require(workers >= 0, "workers must be non-negative");
  detail::require(rank_tau > 0.0 && rank_tau < 1.0, "rank-tau must lie in (0, 1)");
  if (study == Study::ranks) return;
  detail::require(!sequences.empty(), "sequence sweep is empty");
  detail::require(!input_snr_db.empty(), "input SNR sweep is empty");
  const int m = l1 + l2 - 1;
  for (int q : sequences) detail::require(q >= 2 && q <= m, "sequences must lie in [2, M]");
  for (double s : input_snr_db) detail::require(!std::isnan(s), "input SNR is NaN");
}

Scenario default_scenario(Study study) {
  Scenario s;
  s.study = study;
  switch (study) {
    case Study::fig6:
      break;
    case Study::fig7:
      s.sequences = parse_int_sweep("10:19");
      s.trials = 200;
      s.methods = {Method::scs, Method::mcs};
      break;
    case Study::fig8:
      s.sequences = {14};
      s.input_snr_db = parse_snr_sweep("5:50:5,inf");
      s.trials = 200;
      break;
    case Study::ranks:
      s.trials = 20;
      break;
  }
  return s;
}

Study parse_study(const std::string& text) {
  const auto t = lower(trim(text));
  if (t == "fig6") return Study::fig6;
  if (t == "fig7") return Study::fig7;
  if (t == "fig8") return Study::fig8;
  if (t == "ranks") return Study::ranks;
  throw InvalidArgument("unknown study '" + text + "'");
}

std::string to_string(Study s) {
  switch (s) {
    case Study::fig6: return "fig6";
    case Study::fig7: return "fig7";
    case Study::fig8: return "fig8";
    case Study::ranks: return "ranks";
  }
  return "?";
}

Method parse_method(const std::string& text) {
  const auto t = lower(trim(text));
  if (t == "scs") return Method::scs;
  if (t == "mcs") return Method::mcs;
  throw InvalidArgument("unknown method '" + text + "'");
}

std::string to_string(Method m) { return m == Method::scs ? "scs" : "mcs"; }

std::vector<Method> parse_baseline(const std::string& text) {
  const auto t = lower(trim(text));
  if (t == "both") return {Method::scs, Method::mcs};
  std::vector<Method> out;
  for (const auto& item : split(t, ',')) {
    const Method m = parse_method(item);
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  detail::require(!out.empty(), "baseline list is empty");
  return out;
}

SelectionStrategy parse_strategy(const std::string& text) {
  const auto t = lower(trim(text));
  if (t == "even_spread") return SelectionStrategy::even_spread;
  if (t == "prefix") return SelectionStrategy::prefix;
  if (t == "random" || t == "seeded_random") return SelectionStrategy::seeded_random;
  throw InvalidArgument("unknown strategy '" + text + "'");
}

std::string to_string(SelectionStrategy s) {
  switch (s) {
    case SelectionStrategy::even_spread: return "even_spread";
    case SelectionStrategy::prefix: return "prefix";
    case SelectionStrategy::seeded_random: return "random";
  }
  return "?";
}

std::vector<int> parse_int_sweep(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    detail::require(!item.empty(), "empty sweep item in '" + text + "'");
    const auto parts = split(item, ':');
    detail::require(parts.size() <= 3, "bad range '" + item + "'");
    if (parts.size() == 1) {
      out.push_back(static_cast<int>(to_integer(parts[0], "sweep")));
      continue;
    }
    const long long lo = to_integer(parts[0], "sweep");
    const long long hi = to_integer(parts[1], "sweep");
    const long long step = parts.size() == 3 ? to_integer(parts[2], "sweep step") : 1;
    detail::require(step > 0 && lo <= hi, "bad range '" + item + "'");
    for (long long v = lo; v <= hi; v += step) out.push_back(static_cast<int>(v));
  }
  detail::require(!out.empty(), "sweep is empty");
  return out;
}

std::vector<double> parse_snr_sweep(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    detail::require(!item.empty(), "empty sweep item in '" + text + "'");
    const auto parts = split(item, ':');
    detail::require(parts.size() <= 3, "bad range '" + item + "'");
    if (parts.size() == 1) {
      out.push_back(to_real(parts[0], "snr"));
      continue;
    }
    const double lo = to_real(parts[0], "snr");
    const double hi = to_real(parts[1], "snr");
    const double step = parts.size() == 3 ? to_real(parts[2], "snr step") : 1.0;
    detail::require(step > 0 && lo <= hi && std::isfinite(hi), "bad range '" + item + "'");
    const long long n = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
    for (long long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  }
  detail::require(!out.empty(), "sweep is empty");
  return out;
}

void apply_setting(Scenario& s, const std::string& raw_key, const std::string& value) {
  const auto key = lower(trim(raw_key));
  if (key == "study") s.study = parse_study(value);
  else if (key == "l1") s.l1 = static_cast<int>(to_integer(value, key));
  else if (key == "l2") s.l2 = static_cast<int>(to_integer(value, key));
  else if (key == "k") s.k_bands = static_cast<int>(to_integer(value, key));
  else if (key == "blocks") s.n_blocks = to_integer(value, key);
  else if (key == "sequences") s.sequences = parse_int_sweep(value);
  else if (key == "trials") s.trials = static_cast<int>(to_integer(value, key));
  else if (key == "seed") s.seed = to_unsigned(value, key);
  else if (key == "snr-in" || key == "snr_in") s.input_snr_db = parse_snr_sweep(value);
  else if (key == "baseline") s.methods = parse_baseline(value);
  else if (key == "strategy") s.strategy = parse_strategy(value);
  else if (key == "nyquist-ghz" || key == "nyquist_ghz") s.nyquist_rate = to_real(value, key) * 1e9;
  else if (key == "rank-tau" || key == "rank_tau") s.rank_tau = to_real(value, key);
  else if (key == "workers") s.workers = static_cast<int>(to_integer(value, key));
  else if (key == "out") s.out_dir = trim(value);
  else throw InvalidArgument("unknown scenario key '" + raw_key + "'");
}

Scenario parse_scenario(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  std::string study = "fig6";
  while (std::getline(is, line)) {
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    detail::require(eq != std::string::npos, "line " + std::to_string(line_no) + ": expected key = value");
    auto key = lower(trim(line.substr(0, eq)));
    auto value = trim(line.substr(eq + 1));
    detail::require(!key.empty(), "line " + std::to_string(line_no) + ": empty key");
    if (key == "study") study = value;
    else pairs.emplace_back(std::move(key), std::move(value));
  }
  Scenario s = default_scenario(parse_study(study));
  for (const auto& [k, v] : pairs) apply_setting(s, k, v);
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string to_text(const Scenario& s) {
  std::ostringstream os;
  const auto join_ints = [](const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out;
  };
  std::string snr;
  for (std::size_t i = 0; i < s.input_snr_db.size(); ++i) snr += (i ? "," : "") + format_number(s.input_snr_db[i]);
  std::string methods;
  for (std::size_t i = 0; i < s.methods.size(); ++i) methods += (i ? "," : "") + to_string(s.methods[i]);
  os << "study = " << to_string(s.study) << '\n'
     << "l1 = " << s.l1 << '\n'
     << "l2 = " << s.l2 << '\n'
     << "k = " << s.k_bands << '\n'
     << "blocks = " << s.n_blocks << '\n'
     << "sequences = " << join_ints(s.sequences) << '\n'
     << "trials = " << s.trials << '\n'
     << "seed = " << s.seed << '\n'
     << "snr-in = " << snr << '\n'
     << "baseline = " << methods << '\n'
     << "strategy = " << to_string(s.strategy) << '\n'
     << "nyquist-ghz = " << format_number(s.nyquist_rate / 1e9) << '\n'
     << "rank-tau = " << format_number(s.rank_tau) << '\n'
     << "workers = " << s.workers << '\n'
     << "out = " << s.out_dir << '\n';
  return os.str();
}

}  // namespace scs::harness
