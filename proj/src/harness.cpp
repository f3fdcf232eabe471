#include "rrdlab/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <Eigen/Core>

#include "rrdlab/connectivity.hpp"
#include "rrdlab/csv.hpp"
#include "rrdlab/error.hpp"
#include "rrdlab/parallel.hpp"
#include "rrdlab/spectral.hpp"
#include "rrdlab/sv_experiments.hpp"

namespace rrdlab {

using nlohmann::ordered_json;

namespace {

struct ExperimentOutput {
  std::vector<std::pair<std::string, std::string>> files;  // name, body (without header comment)
  ordered_json summary = ordered_json::object();
  int trials = 0;
  std::vector<std::string> failures;
};

Seed trial_seed(const ExperimentConfig& cfg, int t) { return derive_seed(cfg.seed, static_cast<std::uint64_t>(t)); }

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

template <class T>
void collect_failures(const TrialResults<T>& r, ExperimentOutput& out) {
  out.failures.insert(out.failures.end(), r.errors.begin(), r.errors.end());
}

ExperimentOutput run_esd(const ExperimentConfig& cfg) {
  const int n = cfg.n;
  const bool weighted = cfg.weight_law.has_value();
  // Unweighted mode keeps the raw adjacency spectrum (reference: oriented
  // Kesten-McKay with the same d); weighted mode uses (1/sqrt(np)) A o X.
  const ReferenceLaw law = weighted ? ReferenceLaw{CircularLaw{}} : ReferenceLaw{OrientedKM{cfg.degree()}};
  ExperimentConfig unshifted = cfg;
  unshifted.z = 0.0;
  auto results = parallel_trials(cfg.trials, cfg.workers, [&](int t) {
    const auto w = sample_shifted(unshifted, n, trial_seed(cfg, t));
    if (weighted) return eigenvalues(w.entries());
    return eigenvalues(w.entries() * std::sqrt(n * cfg.density()));
  });
  ExperimentOutput out;
  out.trials = cfg.trials;
  collect_failures(results, out);

  std::vector<Complex> pooled;
  std::vector<double> ks;
  for (const auto& v : results.values) {
    if (!v) continue;
    pooled.insert(pooled.end(), v->begin(), v->end());
    ks.push_back(radial_ks(EmpiricalMeasure(*v), law));
  }
  std::ostringstream eig, hist, ref;
  write_eigenvalues_csv(eig, pooled);
  out.files.emplace_back("esd.csv", eig.str());
  if (!pooled.empty()) {
    const auto bins = radial_histogram(EmpiricalMeasure(pooled), cfg.bins, support_radius(law));
    write_histogram_csv(hist, bins);
    write_reference_curve_csv(ref, bins, law);
    out.files.emplace_back("esd_hist.csv", hist.str());
    out.files.emplace_back("esd_reference.csv", ref.str());
  }
  out.summary["reference_law"] = weighted ? "circular" : "oriented_kesten_mckay";
  out.summary["support_radius"] = support_radius(law);
  out.summary["radial_ks"] = ks;
  out.summary["radial_ks_mean"] = mean_of(ks);
  return out;
}

ExperimentOutput run_svdist(const ExperimentConfig& cfg) {
  auto results = parallel_trials(cfg.trials, cfg.workers, [&](int t) {
    return singular_values(sample_shifted(cfg, cfg.n, trial_seed(cfg, t)).entries());
  });
  ExperimentOutput out;
  out.trials = cfg.trials;
  collect_failures(results, out);
  std::vector<double> pooled;
  std::vector<double> logpot;
  for (const auto& v : results.values) {
    if (!v) continue;
    pooled.insert(pooled.end(), v->begin(), v->end());
    logpot.push_back(empirical_log_potential(*v));
  }
  std::ostringstream body;
  write_singular_values_csv(body, pooled);
  out.files.emplace_back("svdist.csv", body.str());
  out.summary["log_potential"] = logpot;
  out.summary["reference_potential"] = reference_potential(cfg.z);
  return out;
}

ExperimentOutput run_logpot(const ExperimentConfig& cfg) {
  struct Row {
    double full;
    double truncated;
  };
  auto results = parallel_trials(cfg.trials, cfg.workers, [&](int t) {
    const auto sv = singular_values(sample_shifted(cfg, cfg.n, trial_seed(cfg, t)).entries());
    const LogTruncation trunc{cfg.trunc_delta, std::max(sv.front(), 2.0 * cfg.trunc_delta)};
    return Row{empirical_log_potential(sv), truncated_log_potential(sv, trunc)};
  });
  ExperimentOutput out;
  out.trials = cfg.trials;
  collect_failures(results, out);
  const double ref = reference_potential(cfg.z);
  std::ostringstream body;
  body << "trial,log_potential,truncated_log_potential,reference,abs_error\n";
  std::vector<double> errors;
  for (std::size_t t = 0; t < results.values.size(); ++t) {
    const auto& v = results.values[t];
    if (!v) continue;
    const double err = std::abs(v->full - ref);
    errors.push_back(err);
    body << t << ',' << fmt_double(v->full) << ',' << fmt_double(v->truncated) << ',' << fmt_double(ref) << ','
         << fmt_double(err) << '\n';
  }
  out.files.emplace_back("logpot.csv", body.str());
  out.summary["reference_potential"] = ref;
  out.summary["abs_error"] = errors;
  out.summary["abs_error_max"] = errors.empty() ? 0.0 : *std::max_element(errors.begin(), errors.end());
  return out;
}

std::vector<double> default_t_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 20; ++k) g.push_back(0.05 * k);
  return g;
}

ExperimentOutput run_ssv_tail(const ExperimentConfig& cfg) {
  const auto grid = cfg.t_grid.empty() ? default_t_grid() : cfg.t_grid;
  const auto curve = ssv_tail_experiment(cfg, grid);
  ExperimentOutput out;
  out.trials = cfg.trials;
  for (int f = 0; f < curve.failures; ++f) out.failures.push_back("ssv_tail trial failed");
  std::ostringstream body;
  body << "t,prob\n";
  for (std::size_t k = 0; k < curve.grid.size(); ++k) body << fmt_double(curve.grid[k]) << ',' << fmt_double(curve.probs[k]) << '\n';
  out.files.emplace_back("ssv_tail.csv", body.str());
  out.summary["fitted_constant"] = fit_tail_constant(curve);
  return out;
}

ExperimentOutput run_wegner(const ExperimentConfig& cfg) {
  const auto prof = wegner_profile(cfg, cfg.alpha, cfg.a1);
  ExperimentOutput out;
  out.trials = cfg.trials;
  for (int f = 0; f < prof.failures; ++f) out.failures.push_back("wegner trial failed");
  std::ostringstream body;
  body << "i,ratio\n";
  for (std::size_t k = 0; k < prof.indices.size(); ++k) body << prof.indices[k] << ',' << fmt_double(prof.ratios[k]) << '\n';
  out.files.emplace_back("wegner.csv", body.str());
  out.summary["min_ratio"] = prof.ratios.empty() ? 0.0 : *std::min_element(prof.ratios.begin(), prof.ratios.end());
  return out;
}

ExperimentOutput run_broad(const ExperimentConfig& cfg) {
  const double p = cfg.density();
  const BroadConnectivityParams params{cfg.h_cut, cfg.delta.value_or(p / 2), cfg.nu.value_or(p / 8)};
  validate(params);
  auto results = parallel_trials(cfg.trials, cfg.workers, [&](int t) {
    const auto a = sample_rrd(cfg.n, cfg.degree(), cfg.sampler, derive_seed(trial_seed(cfg, t), 0));
    const GraphPrimitives g(a.adjacency());
    const BroadScanMode mode = cfg.n <= kMaxExactColumns
                                   ? BroadScanMode{ExactScan{}}
                                   : BroadScanMode{RandomizedScan{cfg.search_trials, derive_seed(trial_seed(cfg, t), 2)}};
    return broad_record(verify_broad(g, params, mode), params, mode);
  });
  ExperimentOutput out;
  out.trials = cfg.trials;
  collect_failures(results, out);
  std::ostringstream body;
  body << "trial,verdict,condition\n";
  int passing = 0;
  ordered_json records = ordered_json::array();
  for (std::size_t t = 0; t < results.values.size(); ++t) {
    const auto& v = results.values[t];
    if (!v) continue;
    const std::string verdict = (*v)["verdict"];
    passing += verdict != "ViolatedWitness";
    body << t << ',' << verdict << ',' << (*v)["condition"].get<std::string>() << '\n';
    records.push_back(*v);
  }
  out.files.emplace_back("broad.csv", body.str());
  out.summary["not_violated"] = passing;
  out.summary["fraction_not_violated"] = static_cast<double>(passing) / cfg.trials;
  out.summary["records"] = records;
  return out;
}

ExperimentOutput run_discrepancy(const ExperimentConfig& cfg) {
  const double p = cfg.density();
  auto results = parallel_trials(cfg.trials, cfg.workers, [&](int t) {
    const auto a = sample_rrd(cfg.n, cfg.degree(), cfg.sampler, derive_seed(trial_seed(cfg, t), 0));
    const Seed s = derive_seed(trial_seed(cfg, t), 2);
    return discrepancy_record(discrepancy_search(a.adjacency(), p, cfg.eps0, cfg.search_trials, s), p, cfg.eps0,
                              cfg.search_trials, s);
  });
  ExperimentOutput out;
  out.trials = cfg.trials;
  collect_failures(results, out);
  std::ostringstream body;
  body << "trial,verdict,rows,cols\n";
  int clean = 0;
  ordered_json records = ordered_json::array();
  for (std::size_t t = 0; t < results.values.size(); ++t) {
    const auto& v = results.values[t];
    if (!v) continue;
    const std::string verdict = (*v)["verdict"];
    clean += verdict == "NotFalsified";
    body << t << ',' << verdict << ',' << (*v)["witness_sets"]["rows"].size() << ',' << (*v)["witness_sets"]["cols"].size()
         << '\n';
    records.push_back(*v);
  }
  out.files.emplace_back("discrepancy.csv", body.str());
  out.summary["not_falsified"] = clean;
  out.summary["records"] = records;
  return out;
}

ExperimentOutput run_dist_subspace(const ExperimentConfig& cfg) {
  const WeightLaw law = cfg.weight_law.value_or(RealGaussian{});
  const auto st = dist_subspace_experiment(cfg.n, cfg.k, cfg.trials, cfg.seed, law, cfg.workers);
  ExperimentOutput out;
  out.trials = cfg.trials;
  std::ostringstream body;
  body << "k,mean_sq,var,std_error\n";
  body << cfg.k << ',' << fmt_double(st.mean_sq) << ',' << fmt_double(st.var) << ',' << fmt_double(st.std_error) << '\n';
  out.files.emplace_back("dist_subspace.csv", body.str());
  out.summary["mean_sq"] = st.mean_sq;
  out.summary["expected"] = cfg.k;
  return out;
}

TestFunction linstat_function(const ExperimentConfig& cfg) {
  if (cfg.f_knots.empty()) return PiecewiseLinear({0.25, 0.75, 1.25}, {0.0, 1.0, 0.0});
  try {
    return PiecewiseLinear(cfg.f_knots, cfg.f_values);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ExperimentOutput run_linstat(const ExperimentConfig& cfg) {
  const auto f = linstat_function(cfg);
  const std::vector<int> sizes = cfg.n_list.empty() ? std::vector<int>{cfg.n} : cfg.n_list;
  const auto pts = linstat_concentration(cfg, f, cfg.trials, sizes);
  ExperimentOutput out;
  std::ostringstream body;
  body << "n,mean,variance,trials\n";
  ordered_json variance = ordered_json::object();
  for (const auto& [n, pt] : pts) {
    out.trials += cfg.trials;
    for (int k = 0; k < pt.failures; ++k) out.failures.push_back("linstat n=" + std::to_string(n) + " trial failed");
    body << n << ',' << fmt_double(pt.mean) << ',' << fmt_double(pt.variance) << ',' << pt.trials << '\n';
    variance[std::to_string(n)] = pt.variance;
  }
  out.files.emplace_back("linstat.csv", body.str());
  out.summary["variance_by_n"] = variance;
  return out;
}

ExperimentOutput run_i2m(const ExperimentConfig& cfg) {
  const WeightLaw law = cfg.weight_law.value_or(RealGaussian{});
  struct Row {
    int rows, cols;
    bool full_rank;
    double lhs, rhs;
  };
  auto results = parallel_trials(cfg.trials, cfg.workers, [&](int t) {
    auto rng = make_engine(derive_seed(trial_seed(cfg, t), 0));
    const int cols = std::uniform_int_distribution<int>(2, cfg.n)(rng);
    const int rows = std::uniform_int_distribution<int>(1, cols)(rng);
    const auto m = sample_weights(rows, cols, law, derive_seed(trial_seed(cfg, t), 1));
    const auto rep = row_distances(m, rows);
    return Row{rows, cols, rep.full_rank, rep.inverse_sv_sum, rep.inverse_dist_sum};
  });
  ExperimentOutput out;
  out.trials = cfg.trials;
  collect_failures(results, out);
  std::ostringstream body;
  body << "trial,rows,cols,full_rank,inverse_sv_sum,inverse_dist_sum,rel_error\n";
  double worst = 0.0;
  for (std::size_t t = 0; t < results.values.size(); ++t) {
    const auto& v = results.values[t];
    if (!v) continue;
    const double rel = v->full_rank ? std::abs(v->lhs - v->rhs) / v->rhs : 0.0;
    worst = std::max(worst, rel);
    body << t << ',' << v->rows << ',' << v->cols << ',' << (v->full_rank ? 1 : 0) << ',' << fmt_double(v->lhs) << ','
         << fmt_double(v->rhs) << ',' << fmt_double(rel) << '\n';
  }
  out.files.emplace_back("i2m.csv", body.str());
  out.summary["max_rel_error"] = worst;
  return out;
}

ExperimentOutput dispatch(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::Esd: return run_esd(cfg);
    case Experiment::SvDist: return run_svdist(cfg);
    case Experiment::LogPot: return run_logpot(cfg);
    case Experiment::SsvTail: return run_ssv_tail(cfg);
    case Experiment::Wegner: return run_wegner(cfg);
    case Experiment::Broad: return run_broad(cfg);
    case Experiment::Discrepancy: return run_discrepancy(cfg);
    case Experiment::DistSubspace: return run_dist_subspace(cfg);
    case Experiment::LinStat: return run_linstat(cfg);
    case Experiment::I2m: return run_i2m(cfg);
  }
  throw ConfigError("unhandled experiment");
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

ordered_json config_json(const ExperimentConfig& cfg) {
  // Same keys, same order as the canonical text.
  ordered_json j = ordered_json::object();
  std::istringstream in(canonical_text(cfg));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    const auto key = line.substr(0, eq);
    const auto value = line.substr(eq + 3);
    j[key] = ordered_json::parse(value);
  }
  return j;
}

}  // namespace

std::string csv_header_comment(const ExperimentConfig& cfg) {
  return "# config_hash=" + hex64(config_hash(cfg)) + " experiment=" + to_string(cfg.experiment);
}

RunRecord run(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.experiment == Experiment::LinStat) linstat_function(cfg);

  const auto start = std::chrono::steady_clock::now();
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());

  auto result = dispatch(cfg);

  RunRecord rec;
  rec.config_text = canonical_text(cfg);
  rec.config_hash = config_hash(cfg);
  rec.trials = result.trials;
  rec.failures = static_cast<int>(result.failures.size());
  rec.failure_messages = result.failures;
  rec.summary = result.summary;
  for (int t = 0; t < cfg.trials; ++t) rec.trial_seeds.push_back(trial_seed(cfg, t));

  const std::string header = csv_header_comment(cfg) + '\n';
  for (const auto& [name, body] : result.files) {
    const auto path = cfg.output_dir / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path.string());
    f << header << body;
    rec.outputs.push_back(path);
  }
  rec.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const auto meta_path = cfg.output_dir / (to_string(cfg.experiment) + ".json");
  rec.outputs.push_back(meta_path);
  ordered_json meta;
  meta["experiment"] = to_string(cfg.experiment);
  meta["config_hash"] = hex64(rec.config_hash);
  meta["config"] = config_json(cfg);
  meta["trial_seeds"] = rec.trial_seeds;
  std::vector<std::string> names;
  for (const auto& p : rec.outputs) names.push_back(p.filename().string());
  meta["outputs"] = names;
  meta["trials"] = rec.trials;
  meta["failures"] = rec.failures;
  meta["failure_messages"] = rec.failure_messages;
  meta["exit_code"] = rec.exit_code();
  meta["wall_clock_seconds"] = rec.wall_clock_seconds;
  meta["versions"] = {{"rrdlab", kVersion},
                      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                    std::to_string(EIGEN_MINOR_VERSION)},
                      {"compiler", __VERSION__}};
  meta["summary"] = rec.summary;
  std::ofstream f(meta_path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + meta_path.string());
  f << meta.dump(2) << '\n';
  return rec;
}

}  // namespace rrdlab
