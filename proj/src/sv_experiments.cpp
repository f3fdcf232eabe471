#include "rrdlab/sv_experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rrdlab/parallel.hpp"

namespace rrdlab {

WeightedMatrix sample_shifted(const ExperimentConfig& cfg, int n, Seed trial_seed) {
  const int d = cfg.degree_at(n);
  const double p = cfg.density_at(n);
  BinaryMatrix a = cfg.profile == Profile::Rrd ? sample_rrd(n, d, cfg.sampler, derive_seed(trial_seed, 0)).adjacency()
                                               : sample_bernoulli(n, p, derive_seed(trial_seed, 0));
  CMatrix x = cfg.weight_law ? sample_weights(n, *cfg.weight_law, derive_seed(trial_seed, 1))
                             : CMatrix::Ones(n, n);
  return assemble_shifted(a, x, p, cfg.z);
}

RowDistanceReport row_distances(const CMatrix& m, int keep) {
  if (keep < 1 || keep > m.rows()) throw std::invalid_argument("row_distances: keep must lie in [1, rows]");
  const auto cols = m.cols();
  const CMatrix kept = m.topRows(keep);
  RowDistanceReport rep;
  rep.distances.resize(keep);

  // Rows as column vectors of C^cols; the span of the others is spanned by the
  // columns of `others`.
  CMatrix others(cols, keep - 1);
  for (int i = 0; i < keep; ++i) {
    const CVector r = kept.row(i).transpose();
    if (keep == 1) {
      rep.distances[i] = r.norm();
      continue;
    }
    for (int j = 0, c = 0; j < keep; ++j) {
      if (j != i) others.col(c++) = kept.row(j).transpose();
    }
    Eigen::ColPivHouseholderQR<CMatrix> qr(others);
    const auto rank = qr.rank();
    const CVector coords = qr.householderQ().adjoint() * r;
    rep.distances[i] = coords.tail(cols - rank).norm();
  }

  Eigen::ColPivHouseholderQR<CMatrix> full(kept.transpose());
  rep.full_rank = full.rank() == keep;
  if (rep.full_rank) {
    const auto sv = singular_values(kept);
    for (double s : sv) rep.inverse_sv_sum += 1.0 / (s * s);
    for (double dist : rep.distances) rep.inverse_dist_sum += 1.0 / (dist * dist);
  }
  return rep;
}

DistanceBound distance_lower_bound_check(const CMatrix& m, int k) {
  const auto n = static_cast<int>(m.rows());
  if (m.rows() != m.cols()) throw std::invalid_argument("distance_lower_bound_check: matrix must be square");
  if (k < 0 || k > n - 1) throw std::invalid_argument("distance_lower_bound_check: need 0 <= k <= n-1");
  DistanceBound out;
  out.singular_value = singular_values(m)[n - k - 1];
  if (k > 0) {
    const int rows = n - (k + 1) / 2;
    const auto rep = row_distances(m, rows);
    const double min_dist = *std::min_element(rep.distances.begin(), rep.distances.end());
    out.bound = std::sqrt(static_cast<double>(k) / (2.0 * n)) * min_dist;
  }
  out.holds = out.singular_value >= out.bound;
  return out;
}

TailCurve ssv_tail_experiment(const ExperimentConfig& cfg, std::span<const double> t_grid) {
  const int n = cfg.n;
  const double scale = std::sqrt(n * cfg.density());
  auto results = parallel_trials(cfg.trials, cfg.workers, [&](int t) {
    const auto w = sample_shifted(cfg, n, derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));
    // s_n(Y - z sqrt(np) I) = sqrt(np) s_n(W), measured in units of n^{-1/2}.
    return singular_values(w.entries()).back() * scale * std::sqrt(static_cast<double>(n));
  });
  TailCurve curve;
  curve.grid.assign(t_grid.begin(), t_grid.end());
  curve.n = n;
  curve.seed = cfg.seed;
  curve.failures = results.failures();
  curve.trials = cfg.trials - curve.failures;
  for (double t : t_grid) {
    int hits = 0;
    for (const auto& v : results.values) {
      if (v && *v <= t) ++hits;
    }
    curve.probs.push_back(curve.trials > 0 ? static_cast<double>(hits) / curve.trials : 0.0);
  }
  return curve;
}

double fit_tail_constant(const TailCurve& curve) {
  const double floor_term = 1.0 / std::sqrt(static_cast<double>(curve.n));
  double c = 0.0;
  for (std::size_t k = 0; k < curve.grid.size(); ++k) c = std::max(c, curve.probs[k] / (curve.grid[k] + floor_term));
  return c;
}

std::vector<double> wegner_ratios(std::span<const double> svals, int lo, int hi) {
  const int n = static_cast<int>(svals.size());
  if (lo < 1 || lo > hi || hi > n - 1) throw std::invalid_argument("wegner_ratios: empty or invalid window");
  std::vector<double> out;
  for (int i = lo; i <= hi; ++i) out.push_back(n * svals[n - i - 1] / i);
  return out;
}

WegnerProfile wegner_profile(const ExperimentConfig& cfg, double alpha, double a1) {
  const int n = cfg.n;
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  const auto lo = static_cast<int>(std::ceil(std::pow(n, alpha)));
  const auto hi = static_cast<int>(std::floor(a1 * n));
  if (lo > hi) throw std::invalid_argument("Wegner window is empty");
  auto results = parallel_trials(cfg.trials, cfg.workers, [&](int t) {
    const auto w = sample_shifted(cfg, n, derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));
    return wegner_ratios(singular_values(w.entries()), lo, hi);
  });
  WegnerProfile prof;
  prof.alpha = alpha;
  prof.a1 = a1;
  prof.failures = results.failures();
  prof.trials = cfg.trials - prof.failures;
  for (int i = lo; i <= hi; ++i) prof.indices.push_back(i);
  prof.ratios.assign(prof.indices.size(), std::numeric_limits<double>::infinity());
  for (const auto& v : results.values) {
    if (!v) continue;
    for (std::size_t k = 0; k < v->size(); ++k) prof.ratios[k] = std::min(prof.ratios[k], (*v)[k]);
  }
  return prof;
}

SubspaceDistanceStats dist_subspace_experiment(int n, int k, int trials, Seed seed, const WeightLaw& law,
                                               int workers) {
  if (n < 1 || k < 0 || k > n) throw std::invalid_argument("dist_subspace_experiment: need 0 <= k <= n");
  if (trials < 1) throw std::invalid_argument("dist_subspace_experiment: trials must be >= 1");
  validate(law);
  // Haar-distributed frame from the QR of a Gaussian matrix; W is spanned by
  // the first n-k columns, W-perp by the last k.
  const WeightLaw frame_law = is_real_valued(law) ? WeightLaw{RealGaussian{}} : WeightLaw{ComplexGaussian{}};
  const CMatrix g = sample_weights(n, n, frame_law, derive_seed(seed, 0));
  const CMatrix q = Eigen::HouseholderQR<CMatrix>(g).householderQ();
  const CMatrix perp = q.rightCols(k);

  auto results = parallel_trials(trials, workers, [&](int t) {
    const CMatrix r = sample_weights(n, 1, law, derive_seed(seed, static_cast<std::uint64_t>(t) + 1));
    return k == 0 ? 0.0 : (perp.adjoint() * r).squaredNorm();
  });
  SubspaceDistanceStats st;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& v : results.values) {
    sum += *v;
    sum_sq += *v * *v;
  }
  st.mean_sq = sum / trials;
  st.var = trials > 1 ? (sum_sq - trials * st.mean_sq * st.mean_sq) / (trials - 1) : 0.0;
  st.var = std::max(st.var, 0.0);
  st.std_error = std::sqrt(st.var / trials);
  return st;
}

PiecewiseLinear::PiecewiseLinear(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() < 2 || knots_.size() != values_.size()) {
    throw std::invalid_argument("piecewise-linear f: need >= 2 knots and one value per knot");
  }
  for (std::size_t k = 1; k < knots_.size(); ++k) {
    if (!(knots_[k] > knots_[k - 1])) throw std::invalid_argument("piecewise-linear f: knots must increase strictly");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("piecewise-linear f: values must be finite");
  }
  if (values_.front() != 0.0 || values_.back() != 0.0) {
    throw std::invalid_argument("piecewise-linear f: must vanish at the end knots (compact support)");
  }
}

double PiecewiseLinear::operator()(double x) const {
  if (x <= knots_.front() || x >= knots_.back()) return 0.0;
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  const auto hi = static_cast<std::size_t>(it - knots_.begin());
  const auto lo = hi - 1;
  const double w = (x - knots_[lo]) / (knots_[hi] - knots_[lo]);
  return values_[lo] + w * (values_[hi] - values_[lo]);
}

double evaluate(const TestFunction& f, double x) {
  if (const auto* pl = std::get_if<PiecewiseLinear>(&f)) return (*pl)(x);
  return truncated_log(x, std::get<LogTruncation>(f));
}

double hermitized_linear_statistic(std::span<const double> svals, const TestFunction& f) {
  if (svals.empty()) throw std::invalid_argument("hermitized_linear_statistic: no singular values");
  double acc = 0.0;
  for (double s : svals) acc += evaluate(f, s) + evaluate(f, -s);
  return acc / (2.0 * static_cast<double>(svals.size()));
}

std::map<int, LinStatPoint> linstat_concentration(const ExperimentConfig& cfg, const TestFunction& f, int trials,
                                                  std::span<const int> n_list) {
  if (trials < 2) throw std::invalid_argument("linstat_concentration: need at least 2 trials");
  std::map<int, LinStatPoint> out;
  for (int n : n_list) {
    const Seed base = derive_seed(cfg.seed, static_cast<std::uint64_t>(n));
    auto results = parallel_trials(trials, cfg.workers, [&](int t) {
      const auto w = sample_shifted(cfg, n, derive_seed(base, static_cast<std::uint64_t>(t)));
      return hermitized_linear_statistic(singular_values(w.entries()), f);
    });
    LinStatPoint pt;
    pt.failures = results.failures();
    pt.trials = trials - pt.failures;
    double sum = 0.0;
    for (const auto& v : results.values) {
      if (v) sum += *v;
    }
    pt.mean = pt.trials > 0 ? sum / pt.trials : 0.0;
    double ss = 0.0;
    for (const auto& v : results.values) {
      if (v) ss += (*v - pt.mean) * (*v - pt.mean);
    }
    pt.variance = pt.trials > 1 ? ss / (pt.trials - 1) : 0.0;
    out[n] = pt;
  }
  return out;
}

}  // namespace rrdlab
