#include "rrdlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rrdlab/csv.hpp"
#include "rrdlab/error.hpp"

namespace rrdlab {

namespace {

constexpr std::pair<Experiment, const char*> kExperimentNames[] = {
    {Experiment::Esd, "esd"},         {Experiment::SvDist, "svdist"},
    {Experiment::LogPot, "logpot"},   {Experiment::SsvTail, "ssv_tail"},
    {Experiment::Wegner, "wegner"},   {Experiment::Broad, "broad"},
    {Experiment::Discrepancy, "discrepancy"}, {Experiment::DistSubspace, "dist_subspace"},
    {Experiment::LinStat, "linstat"}, {Experiment::I2m, "i2m"},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string s = trim(unquote(trim(text)));
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError("config key '" + key + "': cannot parse '" + text + "' as a number");
  }
  return v;
}

template <class T>
std::vector<T> parse_array(const std::string& key, const std::string& text) {
  std::string s = trim(text);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    throw ConfigError("config key '" + key + "': expected an array like [1, 2, 3]");
  }
  s = s.substr(1, s.size() - 2);
  std::vector<T> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_number<T>(key, item));
  }
  return out;
}

WeightLaw law_from_name(const std::string& name, double dof) {
  if (name == "real_gaussian" || name == "gaussian") return RealGaussian{};
  if (name == "complex_gaussian") return ComplexGaussian{};
  if (name == "rademacher") return Rademacher{};
  if (name == "student_t") return StandardizedStudentT{dof};
  throw ConfigError("unknown weight_law '" + name + "'");
}

std::string law_key(const std::optional<WeightLaw>& law) {
  if (!law) return "none";
  if (std::holds_alternative<StandardizedStudentT>(*law)) return "student_t";
  return law_name(*law);
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string out = "[";
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k) out += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt_double(xs[k]);
    } else {
      out += std::to_string(xs[k]);
    }
  }
  return out + "]";
}

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [k, name] : kExperimentNames) {
    if (k == e) return name;
  }
  return "?";
}

Experiment parse_experiment(const std::string& name) {
  for (const auto& [k, n] : kExperimentNames) {
    if (name == n) return k;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

int ExperimentConfig::degree_at(int size) const {
  if (d) return *d;
  if (p) return static_cast<int>(std::floor(*p * size));
  throw ConfigError("config needs p or d");
}

int ExperimentConfig::degree() const { return degree_at(n); }

double ExperimentConfig::density_at(int size) const {
  if (p) return *p;
  if (d) return static_cast<double>(*d) / size;
  throw ConfigError("config needs p or d");
}

double ExperimentConfig::density() const { return density_at(n); }

void validate(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (cfg.n < 2) fail("n must be >= 2");
  if (cfg.trials < 1) fail("trials must be >= 1");
  if (!cfg.p && !cfg.d) fail("config needs p or d");
  if (cfg.p && !(*cfg.p > 0.0 && *cfg.p < 1.0)) fail("p must lie in (0,1)");
  if (cfg.p && cfg.d && *cfg.d != static_cast<int>(std::floor(*cfg.p * cfg.n))) fail("d must equal floor(p n) when both are given");
  std::vector<int> sizes = cfg.n_list.empty() ? std::vector<int>{cfg.n} : cfg.n_list;
  for (int size : sizes) {
    if (size < 2) fail("every n must be >= 2");
    const int deg = cfg.degree_at(size);
    if (deg < 1 || deg > size - 1) fail("degree must lie in [1, n-1], got " + std::to_string(deg));
  }
  if (cfg.weight_law) {
    try {
      validate(*cfg.weight_law);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  if (const auto* sw = std::get_if<SwitchChain>(&cfg.sampler); sw == nullptr) {
    if (std::get<PermutationSum>(cfg.sampler).max_rejections < 1) fail("max_rejections must be >= 1");
  }
  switch (cfg.experiment) {
    case Experiment::Wegner: {
      if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) fail("alpha must lie in (0,1)");
      const auto lo = static_cast<int>(std::ceil(std::pow(cfg.n, cfg.alpha)));
      const auto hi = static_cast<int>(std::floor(cfg.a1 * cfg.n));
      if (lo > hi || hi > cfg.n - 1) fail("Wegner window [ceil(n^alpha), floor(a1 n)] is empty or too wide");
      break;
    }
    case Experiment::DistSubspace:
      if (cfg.k < 0 || cfg.k > cfg.n) fail("k must lie in [0, n]");
      break;
    case Experiment::Discrepancy:
      if (!(cfg.eps0 * cfg.n >= 1.0) || cfg.eps0 > 1.0) fail("need eps0 n >= 1 and eps0 <= 1");
      if (cfg.search_trials < 1) fail("search_trials must be >= 1");
      break;
    case Experiment::Broad:
      if (!(cfg.h_cut > 0.0 && cfg.h_cut <= 1.0)) fail("h_cut must lie in (0,1]");
      if (cfg.search_trials < 1) fail("search_trials must be >= 1");
      if (cfg.delta && !(*cfg.delta > 0.0 && *cfg.delta < 1.0)) fail("delta must lie in (0,1)");
      if (cfg.nu && !(*cfg.nu > 0.0 && *cfg.nu < 1.0)) fail("nu must lie in (0,1)");
      break;
    case Experiment::Esd:
    case Experiment::SvDist:
      if (cfg.bins < 1) fail("bins must be >= 1");
      break;
    case Experiment::LinStat:
      if (cfg.f_knots.size() != cfg.f_values.size()) fail("f_knots and f_values must have equal length");
      break;
    case Experiment::SsvTail:
      for (double t : cfg.t_grid) {
        if (!(t >= 0.0)) fail("t_grid entries must be >= 0");
      }
      break;
    default:
      break;
  }
}

RawConfig parse_config_text(std::istream& in) {
  RawConfig raw;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Strip comments outside quotes.
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
      if (line[k] == '"') quoted = !quoted;
      if (line[k] == '#' && !quoted) {
        line.resize(k);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') continue;  // table headers are ignored
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    raw[key] = value;
  }
  return raw;
}

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& text) {
  const std::string value = unquote(trim(text));
  if (key == "experiment") {
    cfg.experiment = parse_experiment(value);
  } else if (key == "n") {
    cfg.n = parse_number<int>(key, value);
  } else if (key == "p") {
    cfg.p = parse_number<double>(key, value);
  } else if (key == "d") {
    cfg.d = parse_number<int>(key, value);
  } else if (key == "z_re") {
    cfg.z.real(parse_number<double>(key, value));
  } else if (key == "z_im") {
    cfg.z.imag(parse_number<double>(key, value));
  } else if (key == "weight_law") {
    if (value == "none") {
      cfg.weight_law.reset();
    } else {
      double dof = 5.0;
      if (cfg.weight_law) {
        if (const auto* t = std::get_if<StandardizedStudentT>(&*cfg.weight_law)) dof = t->dof;
      }
      cfg.weight_law = law_from_name(value, dof);
    }
  } else if (key == "student_dof") {
    cfg.weight_law = StandardizedStudentT{parse_number<double>(key, value)};
  } else if (key == "trials") {
    cfg.trials = parse_number<int>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "sampler") {
    if (value == "switch") {
      if (!std::holds_alternative<SwitchChain>(cfg.sampler)) cfg.sampler = SwitchChain{};
    } else if (value == "permutation") {
      if (!std::holds_alternative<PermutationSum>(cfg.sampler)) cfg.sampler = PermutationSum{};
    } else {
      throw ConfigError("unknown sampler '" + value + "'");
    }
  } else if (key == "burn_in") {
    cfg.sampler = SwitchChain{parse_number<std::uint64_t>(key, value)};
  } else if (key == "max_rejections") {
    cfg.sampler = PermutationSum{parse_number<std::uint64_t>(key, value)};
  } else if (key == "profile") {
    if (value == "rrd") {
      cfg.profile = Profile::Rrd;
    } else if (value == "bernoulli") {
      cfg.profile = Profile::Bernoulli;
    } else {
      throw ConfigError("unknown profile '" + value + "'");
    }
  } else if (key == "output_dir" || key == "out") {
    cfg.output_dir = value;
  } else if (key == "workers") {
    cfg.workers = parse_number<int>(key, value);
  } else if (key == "alpha") {
    cfg.alpha = parse_number<double>(key, value);
  } else if (key == "a1") {
    cfg.a1 = parse_number<double>(key, value);
  } else if (key == "k") {
    cfg.k = parse_number<int>(key, value);
  } else if (key == "eps0") {
    cfg.eps0 = parse_number<double>(key, value);
  } else if (key == "search_trials") {
    cfg.search_trials = parse_number<int>(key, value);
  } else if (key == "h_cut") {
    cfg.h_cut = parse_number<double>(key, value);
  } else if (key == "delta") {
    cfg.delta = parse_number<double>(key, value);
  } else if (key == "nu") {
    cfg.nu = parse_number<double>(key, value);
  } else if (key == "bins") {
    cfg.bins = parse_number<int>(key, value);
  } else if (key == "trunc_delta") {
    cfg.trunc_delta = parse_number<double>(key, value);
  } else if (key == "t_grid") {
    cfg.t_grid = parse_array<double>(key, text);
  } else if (key == "n_list") {
    cfg.n_list = parse_array<int>(key, text);
  } else if (key == "f_knots") {
    cfg.f_knots = parse_array<double>(key, text);
  } else if (key == "f_values") {
    cfg.f_values = parse_array<double>(key, text);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

ExperimentConfig config_from_raw(const RawConfig& raw) {
  ExperimentConfig cfg;
  // The law must be known before student_dof, and the sampler kind before its knob.
  for (const char* first : {"weight_law", "sampler"}) {
    if (auto it = raw.find(first); it != raw.end()) apply_override(cfg, it->first, it->second);
  }
  for (const auto& [key, value] : raw) {
    if (key == "weight_law" || key == "sampler") continue;
    apply_override(cfg, key, value);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return config_from_raw(parse_config_text(in));
}

std::string canonical_text(const ExperimentConfig& cfg) {
  std::ostringstream o;
  o << "experiment = \"" << to_string(cfg.experiment) << "\"\n";
  o << "n = " << cfg.n << '\n';
  if (cfg.p) o << "p = " << fmt_double(*cfg.p) << '\n';
  if (cfg.d) o << "d = " << *cfg.d << '\n';
  o << "z_re = " << fmt_double(cfg.z.real()) << '\n';
  o << "z_im = " << fmt_double(cfg.z.imag()) << '\n';
  o << "weight_law = \"" << law_key(cfg.weight_law) << "\"\n";
  if (cfg.weight_law) {
    if (const auto* t = std::get_if<StandardizedStudentT>(&*cfg.weight_law)) o << "student_dof = " << fmt_double(t->dof) << '\n';
  }
  o << "trials = " << cfg.trials << '\n';
  o << "seed = " << cfg.seed << '\n';
  if (const auto* sw = std::get_if<SwitchChain>(&cfg.sampler)) {
    o << "sampler = \"switch\"\n";
    if (sw->burn_in_steps) o << "burn_in = " << *sw->burn_in_steps << '\n';
  } else {
    o << "sampler = \"permutation\"\n";
    o << "max_rejections = " << std::get<PermutationSum>(cfg.sampler).max_rejections << '\n';
  }
  o << "profile = \"" << (cfg.profile == Profile::Rrd ? "rrd" : "bernoulli") << "\"\n";
  o << "alpha = " << fmt_double(cfg.alpha) << '\n';
  o << "a1 = " << fmt_double(cfg.a1) << '\n';
  o << "k = " << cfg.k << '\n';
  o << "eps0 = " << fmt_double(cfg.eps0) << '\n';
  o << "search_trials = " << cfg.search_trials << '\n';
  o << "h_cut = " << fmt_double(cfg.h_cut) << '\n';
  if (cfg.delta) o << "delta = " << fmt_double(*cfg.delta) << '\n';
  if (cfg.nu) o << "nu = " << fmt_double(*cfg.nu) << '\n';
  o << "bins = " << cfg.bins << '\n';
  o << "trunc_delta = " << fmt_double(cfg.trunc_delta) << '\n';
  o << "t_grid = " << join(cfg.t_grid) << '\n';
  o << "n_list = " << join(cfg.n_list) << '\n';
  o << "f_knots = " << join(cfg.f_knots) << '\n';
  o << "f_values = " << join(cfg.f_values) << '\n';
  return o.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_text(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace rrdlab
