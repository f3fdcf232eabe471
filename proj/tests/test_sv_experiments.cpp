#include <doctest.h>

#include <cmath>

#include "rrdlab/sv_experiments.hpp"

using namespace rrdlab;

namespace {

ExperimentConfig small_config(int n, double p, Seed seed) {
  ExperimentConfig cfg;
  cfg.n = n;
  cfg.p = p;
  cfg.seed = seed;
  cfg.workers = 2;
  return cfg;
}

}  // namespace

TEST_CASE("row distances") {
  const CMatrix eye = CMatrix::Identity(6, 6);
  const auto rep = row_distances(eye, 6);
  for (double d : rep.distances) CHECK(d == doctest::Approx(1.0));
  CHECK(rep.full_rank);
  CHECK(rep.inverse_sv_sum == doctest::Approx(6.0));

  // Inverse second moment identity on wide Gaussian matrices.
  for (Seed s = 0; s < 20; ++s) {
    const CMatrix g = sample_weights(5, 10, ComplexGaussian{}, s);
    const auto r = row_distances(g, 5);
    REQUIRE(r.full_rank);
    CHECK(std::abs(r.inverse_sv_sum - r.inverse_dist_sum) <= 1e-8 * r.inverse_sv_sum);
  }

  // Distance of a row to the others, against an explicit orthogonal projection.
  const CMatrix g = sample_weights(4, 7, RealGaussian{}, 3);
  const auto r = row_distances(g, 4);
  const CMatrix others = g.bottomRows(3).transpose();
  const CVector x = g.row(0).transpose();
  const CVector proj = others * (others.adjoint() * others).ldlt().solve(others.adjoint() * x);
  CHECK(r.distances[0] == doctest::Approx((x - proj).norm()).epsilon(1e-10));

  CMatrix dup = sample_weights(3, 5, RealGaussian{}, 1);
  dup.row(2) = dup.row(0);
  const auto rd = row_distances(dup, 3);
  CHECK(rd.distances[0] < 1e-12);
  CHECK(rd.distances[2] < 1e-12);
  CHECK_FALSE(rd.full_rank);

  CHECK_THROWS_AS(row_distances(eye, 0), std::invalid_argument);
  CHECK_THROWS_AS(row_distances(eye, 7), std::invalid_argument);
}

TEST_CASE("distance lower bound on intermediate singular values") {
  const CMatrix g = sample_weights(40, 40, RealGaussian{}, 11);
  const auto b0 = distance_lower_bound_check(g, 0);
  CHECK(b0.bound == 0.0);
  CHECK(b0.holds);

  const auto b = distance_lower_bound_check(g, 10);
  CHECK(b.holds);
  CHECK(b.bound > 0.0);

  // Identity: every distance is 1, s_{n-k} = 1 >= sqrt(k / 2n).
  const auto bi = distance_lower_bound_check(CMatrix::Identity(16, 16), 4);
  CHECK(bi.singular_value == doctest::Approx(1.0));
  CHECK(bi.bound == doctest::Approx(std::sqrt(4.0 / 32.0)));

  int holds = 0;
  for (Seed s = 0; s < 100; ++s) {
    const int n = 10 + static_cast<int>(s % 20);
    const CMatrix m = sample_weights(n, n, s % 2 ? WeightLaw{Rademacher{}} : WeightLaw{ComplexGaussian{}}, 100 + s);
    const int k = 1 + static_cast<int>(s % static_cast<Seed>(n - 1));
    holds += distance_lower_bound_check(m, k).holds;
  }
  CHECK(holds == 100);

  CHECK_THROWS_AS(distance_lower_bound_check(g, 40), std::invalid_argument);
  CHECK_THROWS_AS(distance_lower_bound_check(CMatrix::Zero(3, 4), 1), std::invalid_argument);
}

TEST_CASE("smallest singular value tail") {
  auto cfg = small_config(60, 0.5, 5);
  cfg.z = {0.5, 0.0};
  cfg.trials = 30;
  const std::vector<double> grid{0.0, 0.1, 0.5, 1.0, 4.0, 1e6};
  const auto curve = ssv_tail_experiment(cfg, grid);
  CHECK(curve.trials == 30);
  CHECK(curve.probs.front() == 0.0);
  CHECK(curve.probs.back() == 1.0);
  for (std::size_t k = 1; k < grid.size(); ++k) CHECK(curve.probs[k] >= curve.probs[k - 1]);
  const double c = fit_tail_constant(curve);
  for (std::size_t k = 0; k < grid.size(); ++k) CHECK(curve.probs[k] <= c * (grid[k] + 1 / std::sqrt(60.0)) + 1e-15);
}

TEST_CASE("Wegner ratios") {
  // s_{n-i} = i / n gives ratio exactly 1.
  const int n = 20;
  std::vector<double> sv(n);
  for (int k = 0; k < n; ++k) sv[k] = static_cast<double>(n - 1 - k) / n;
  for (double r : wegner_ratios(sv, 1, 15)) CHECK(r == doctest::Approx(1.0));
  std::vector<double> doubled = sv;
  for (auto& s : doubled) s *= 2;
  for (double r : wegner_ratios(doubled, 3, 9)) CHECK(r == doctest::Approx(2.0));
  CHECK(wegner_ratios(sv, 4, 7).size() == 4);
  CHECK_THROWS_AS(wegner_ratios(sv, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(wegner_ratios(sv, 5, 4), std::invalid_argument);

  auto cfg = small_config(100, 0.5, 2);
  cfg.trials = 3;
  const auto prof = wegner_profile(cfg, 0.5, 0.2);
  CHECK(prof.indices.front() == 10);
  CHECK(prof.indices.back() == 20);
  for (double r : prof.ratios) CHECK(r > 0.0);
  CHECK_THROWS_AS(wegner_profile(cfg, 0.5, 0.05), std::invalid_argument);
}

TEST_CASE("distance to a random subspace") {
  CHECK(dist_subspace_experiment(30, 0, 10, 1).mean_sq == 0.0);
  // W = {0}: dist^2 = |R|^2 with mean n.
  const auto full = dist_subspace_experiment(30, 30, 4000, 2);
  CHECK(std::abs(full.mean_sq - 30.0) <= 4 * full.std_error);
  const auto half = dist_subspace_experiment(40, 10, 4000, 3, Rademacher{});
  CHECK(std::abs(half.mean_sq - 10.0) <= 4 * half.std_error);
  const auto cplx = dist_subspace_experiment(40, 10, 4000, 4, ComplexGaussian{});
  CHECK(std::abs(cplx.mean_sq - 10.0) <= 4 * cplx.std_error);
  CHECK_THROWS_AS(dist_subspace_experiment(10, 11, 10, 1), std::invalid_argument);
}

TEST_CASE("piecewise-linear test functions") {
  const PiecewiseLinear hat({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
  CHECK(hat(0.5) == doctest::Approx(1.0));
  CHECK(hat(1.0) == doctest::Approx(2.0));
  CHECK(hat(1.75) == doctest::Approx(0.5));
  CHECK(hat(-1.0) == 0.0);
  CHECK(hat(2.5) == 0.0);
  CHECK_THROWS_AS(PiecewiseLinear({0.0, 1.0}, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(PiecewiseLinear({0.0, 0.0, 1.0}, {0.0, 1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(PiecewiseLinear({0.0, 1.0, 2.0}, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(PiecewiseLinear({0.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("hermitized linear statistics") {
  const std::vector<double> sv{2.0, 1.0, 0.5, 0.1};
  // Symmetric hat centered at 0 counts both signs.
  const TestFunction sym = PiecewiseLinear({-1.5, 0.0, 1.5}, {0.0, 1.0, 0.0});
  double expect = 0;
  for (double s : sv) expect += 2 * std::max(0.0, 1 - s / 1.5);
  CHECK(hermitized_linear_statistic(sv, sym) == doctest::Approx(expect / 8));

  const LogTruncation lt{1e-3, 3.0};
  CHECK(hermitized_linear_statistic(sv, lt) == doctest::Approx(0.5 * truncated_log_potential(sv, lt)));

  const TestFunction zero = PiecewiseLinear({0.0, 1.0, 2.0}, {0.0, 0.0, 0.0});
  auto cfg = small_config(20, 0.5, 9);
  const std::vector<int> ns{20};
  const auto flat = linstat_concentration(cfg, zero, 5, ns);
  CHECK(flat.at(20).variance == 0.0);

  // Fluctuations shrink as n grows.
  const TestFunction hat = PiecewiseLinear({0.25, 0.75, 1.25}, {0.0, 1.0, 0.0});
  const std::vector<int> sizes{16, 128};
  const auto pts = linstat_concentration(cfg, hat, 40, sizes);
  CHECK(pts.at(128).variance < pts.at(16).variance);
  CHECK_THROWS_AS(linstat_concentration(cfg, hat, 1, sizes), std::invalid_argument);
}

TEST_CASE("sample_shifted uses the configured profile") {
  auto cfg = small_config(30, 0.3, 1);
  cfg.weight_law.reset();
  cfg.z = {0.2, -0.1};
  const auto w = sample_shifted(cfg, 30, 77);
  const double scale = 1 / std::sqrt(30 * 0.3);
  for (int i = 0; i < 30; ++i) {
    int ones = 0;
    for (int j = 0; j < 30; ++j) {
      const Complex v = w.entries()(i, j) + (i == j ? cfg.z : Complex{});
      if (std::abs(v) > 1e-12) {
        CHECK(std::abs(v - scale) < 1e-12);
        ++ones;
      }
    }
    CHECK(ones == 9);
  }
  const auto again = sample_shifted(cfg, 30, 77);
  CHECK(again.entries() == w.entries());
}
