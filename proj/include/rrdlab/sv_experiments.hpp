#pragma once

#include <map>
#include <span>
#include <variant>
#include <vector>

#include "rrdlab/config.hpp"
#include "rrdlab/matrix_builder.hpp"
#include "rrdlab/spectral.hpp"

namespace rrdlab {

/// One draw of (1/sqrt(np)) A o X - z I at size n, with A from the configured
/// profile (rrd or Bernoulli) and X from the configured law (all ones if none).
/// Sub-streams for A and X are derived from trial_seed.
WeightedMatrix sample_shifted(const ExperimentConfig& cfg, int n, Seed trial_seed);

struct RowDistanceReport {
  std::vector<double> distances;  // dist(R_i, span of the other kept rows)
  bool full_rank = false;
  // Inverse second moment identity, filled only when full_rank:
  double inverse_sv_sum = 0.0;    // sum_i s_i(M')^-2
  double inverse_dist_sum = 0.0;  // sum_i dist_i^-2
};

/// Distances from each of the first `keep` rows to the span of the others,
/// by Householder projection residuals.
RowDistanceReport row_distances(const CMatrix& m, int keep);

struct DistanceBound {
  double singular_value = 0.0;  // s_{n-k}(M)
  double bound = 0.0;           // sqrt(k / (2n)) min_{i <= n - ceil(k/2)} dist(R_i, R_{-i})
  bool holds = false;
};

/// Deterministic lower bound on s_{n-k} from row distances; 0 <= k <= n-1.
DistanceBound distance_lower_bound_check(const CMatrix& m, int k);

struct TailCurve {
  std::vector<double> grid;
  std::vector<double> probs;
  int n = 0;
  int trials = 0;  // successful trials
  int failures = 0;
  Seed seed = 0;
};

/// Fraction of trials with s_n(Y - z sqrt(np) I) <= t / sqrt(n), per t.
TailCurve ssv_tail_experiment(const ExperimentConfig& cfg, std::span<const double> t_grid);

/// Smallest C with probs[k] <= C (t_k + n^{-1/2}) for every grid point.
double fit_tail_constant(const TailCurve& curve);

struct WegnerProfile {
  std::vector<int> indices;
  std::vector<double> ratios;  // n s_{n-i} / i, minimum over trials
  double alpha = 0.0;
  double a1 = 0.0;
  int trials = 0;
  int failures = 0;
};

/// n s_{n-i} / i for i in [lo, hi], from descending singular values.
std::vector<double> wegner_ratios(std::span<const double> svals, int lo, int hi);

WegnerProfile wegner_profile(const ExperimentConfig& cfg, double alpha, double a1);

struct SubspaceDistanceStats {
  double mean_sq = 0.0;
  double var = 0.0;
  double std_error = 0.0;
};

/// Fixed uniformly random (n-k)-dimensional W, `trials` iid rows R with entries
/// from `law`; statistics of dist(R, W)^2.
SubspaceDistanceStats dist_subspace_experiment(int n, int k, int trials, Seed seed,
                                               const WeightLaw& law = RealGaussian{}, int workers = 0);

/// Compactly supported piecewise-linear function: zero outside
/// [knots.front(), knots.back()], whose values there must be zero.
class PiecewiseLinear {
 public:
  PiecewiseLinear(std::vector<double> knots, std::vector<double> values);  // throws std::invalid_argument
  double operator()(double x) const;
  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

using TestFunction = std::variant<PiecewiseLinear, LogTruncation>;

double evaluate(const TestFunction& f, double x);

/// (1/2n) sum over the 2n eigenvalues of H(z) = {+-s_i} of f.
double hermitized_linear_statistic(std::span<const double> svals, const TestFunction& f);

struct LinStatPoint {
  double mean = 0.0;
  double variance = 0.0;
  int trials = 0;
  int failures = 0;
};

/// Sample variance of the linear statistic across trials, for every n in n_list.
std::map<int, LinStatPoint> linstat_concentration(const ExperimentConfig& cfg, const TestFunction& f, int trials,
                                                  std::span<const int> n_list);

}  // namespace rrdlab
