#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rrdlab/spectral.hpp"

using namespace rrdlab;

namespace {

template <class F>
double simpson(F f, double a, double b, int panels = 20000) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int k = 1; k < panels; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

bool contains_close(const std::vector<Complex>& vals, Complex target, double tol) {
  return std::any_of(vals.begin(), vals.end(), [&](Complex v) { return std::abs(v - target) < tol; });
}

}  // namespace

TEST_CASE("eigenvalues of small known matrices") {
  CMatrix diag = CMatrix::Zero(3, 3);
  diag.diagonal() << 1.0, 2.0, 3.0;
  auto ev = eigenvalues(diag);
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  CHECK(std::abs(ev[0] - 1.0) < 1e-14);
  CHECK(std::abs(ev[1] - 2.0) < 1e-14);
  CHECK(std::abs(ev[2] - 3.0) < 1e-14);

  // Cyclic shift: characteristic polynomial lambda^n - 1.
  const int n = 7;
  CMatrix cyc = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) cyc(i, (i + 1) % n) = 1.0;
  const auto roots = eigenvalues(cyc);
  REQUIRE(roots.size() == 7);
  for (int k = 0; k < n; ++k) CHECK(contains_close(roots, std::polar(1.0, 2 * std::numbers::pi * k / n), 1e-10));

  CMatrix nil = CMatrix::Zero(2, 2);
  nil(0, 1) = 1.0;
  for (const auto& v : eigenvalues(nil)) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("eigenvalue trace identities") {
  for (const WeightLaw& law : {WeightLaw{RealGaussian{}}, WeightLaw{ComplexGaussian{}}}) {
    const CMatrix m = sample_weights(60, law, 5);
    const auto ev = eigenvalues(m);
    Complex s1 = 0, s2 = 0;
    for (auto v : ev) {
      s1 += v;
      s2 += v * v;
    }
    const double norm2 = std::pow(singular_values(m).front(), 2);
    CHECK(std::abs(s1 - m.trace()) <= 1e-8 * (1 + norm2));
    CHECK(std::abs(s2 - (m * m).trace()) <= 1e-8 * (1 + norm2));
  }
  CHECK_THROWS_AS(eigenvalues(CMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("singular values") {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -4.0;
  auto sv = singular_values(d);
  CHECK(sv[0] == doctest::Approx(4.0));
  CHECK(sv[1] == doctest::Approx(3.0));

  sv = singular_values(CMatrix::Ones(2, 2));
  CHECK(sv[0] == doctest::Approx(2.0));
  CHECK(std::abs(sv[1]) < 1e-14);

  // Oracle: square roots of the Hermitian eigenvalues of M^* M.
  const CMatrix m = sample_weights(20, ComplexGaussian{}, 9);
  sv = singular_values(m);
  auto gram = hermitian_eigenvalues(m.adjoint() * m);
  std::sort(gram.begin(), gram.end(), std::greater<>());
  double frob = 0;
  for (int i = 0; i < 20; ++i) {
    CHECK(std::abs(sv[i] - std::sqrt(std::max(gram[i], 0.0))) < 1e-8);
    if (i) CHECK(sv[i] <= sv[i - 1]);
    frob += sv[i] * sv[i];
  }
  CHECK(std::abs(frob - m.squaredNorm()) <= 1e-10 * m.squaredNorm());

  // Diagonal unitary phases leave singular values unchanged.
  CVector left(20), right(20);
  for (int i = 0; i < 20; ++i) {
    left(i) = std::polar(1.0, 0.3 * i);
    right(i) = std::polar(1.0, -1.1 * i + 0.5);
  }
  const auto rotated = singular_values(left.asDiagonal() * m * right.asDiagonal());
  for (int i = 0; i < 20; ++i) CHECK(std::abs(rotated[i] - sv[i]) < 1e-8);
}

TEST_CASE("empirical log-potential") {
  const std::vector<double> twos(5, 2.0);
  CHECK(empirical_log_potential(twos) == doctest::Approx(std::log(2.0)));

  const CMatrix m = sample_weights(30, ComplexGaussian{}, 13);
  const double logdet = std::log(std::abs(m.partialPivLu().determinant())) / 30.0;
  CHECK(empirical_log_potential(singular_values(m)) == doctest::Approx(logdet).epsilon(1e-8));

  const std::vector<double> singular{3.0, 1.0, 0.0};
  CHECK(empirical_log_potential(singular) == kNegInfinity);
}

TEST_CASE("truncated log") {
  const LogTruncation t{0.01, 2.0};
  CHECK(truncated_log(0.004, t) == 0.0);
  CHECK(truncated_log(0.0075, t) == doctest::Approx(0.5 * std::log(0.01)));
  CHECK(truncated_log(0.5, t) == doctest::Approx(std::log(0.5)));
  CHECK(truncated_log(3.0, t) == doctest::Approx(0.5 * std::log(2.0)));
  CHECK(truncated_log(4.0, t) == 0.0);
  CHECK(truncated_log(-1.0, t) == 0.0);
  // Continuity at the knots.
  for (double x : {0.005, 0.01, 2.0, 4.0}) {
    CHECK(truncated_log(x * (1 - 1e-9), t) == doctest::Approx(truncated_log(x * (1 + 1e-9), t)).epsilon(1e-6));
  }
}

TEST_CASE("circular log-potential") {
  CHECK(reference_potential(0.0) == -0.5);
  CHECK(reference_potential(std::polar(1.0, 0.7)) == doctest::Approx(0.0));
  CHECK(reference_potential(std::polar(1.0 + 1e-12, 0.7)) == doctest::Approx(0.0));
  CHECK(reference_potential(std::numbers::e) == doctest::Approx(1.0));
  CHECK(reference_potential(Complex(0, 0.5)) == doctest::Approx(-0.375));

  // Oracle: (1/pi) * integral over the disk of log|w - z| in polar coordinates.
  for (double zr : {0.3, 1.7}) {
    const double val = simpson(
        [&](double r) {
          return r * simpson([&](double th) { return std::log(std::abs(std::polar(r, th) - zr)); }, 0.0,
                             2 * std::numbers::pi, 400);
        },
        0.0, 1.0, 402) / std::numbers::pi;
    CHECK(reference_potential(zr) == doctest::Approx(val).epsilon(2e-3));
  }
}

TEST_CASE("reference radial CDFs") {
  CHECK(reference_radial_cdf(CircularLaw{}, 0.5) == doctest::Approx(0.25));
  CHECK(reference_radial_cdf(CircularLaw{}, 2.0) == 1.0);
  CHECK(reference_radial_cdf(OrientedKM{3}, std::sqrt(3.0)) == doctest::Approx(1.0));
  CHECK(reference_radial_cdf(OrientedKM{3}, 0.0) == 0.0);

  for (int d : {3, 4, 10}) {
    const OrientedKM law{d};
    double prev = 0.0;
    for (double frac : {0.1, 0.35, 0.6, 0.85, 0.99, 1.0}) {
      const double r = frac * std::sqrt(static_cast<double>(d));
      const double quad = simpson([&](double s) { return 2 * std::numbers::pi * s * reference_density(law, s); }, 0.0, r);
      CHECK(std::abs(reference_radial_cdf(law, r) - quad) < 1e-8);
      CHECK(reference_radial_cdf(law, r) >= prev);
      prev = reference_radial_cdf(law, r);
    }
  }
}

TEST_CASE("radial KS distance") {
  // Atoms at the exact quantiles of the circular radial law.
  const int n = 1000;
  std::vector<Complex> q;
  for (int i = 0; i < n; ++i) q.push_back(std::polar(std::sqrt((i + 0.5) / n), 0.1 * i));
  CHECK(radial_ks(EmpiricalMeasure(q), CircularLaw{}) <= 1.0 / n + 1e-12);

  CHECK(radial_ks(EmpiricalMeasure({Complex(0, 0)}), CircularLaw{}) == 1.0);

  // DKW: P(KS > eps) <= 2 exp(-2 N eps^2) = 0.0007 for N = 10^4, eps = 0.025.
  auto rng = make_engine(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> draws;
  for (int i = 0; i < 10000; ++i) draws.push_back(std::polar(std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng)));
  CHECK(radial_ks(EmpiricalMeasure(draws), CircularLaw{}) < 0.025);

  CHECK_THROWS_AS(radial_ks(EmpiricalMeasure({}), CircularLaw{}), std::invalid_argument);
}

TEST_CASE("radial histogram") {
  auto rng = make_engine(78);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> draws;
  for (int i = 0; i < 200000; ++i) draws.push_back(std::polar(std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng)));
  const auto bins = radial_histogram(EmpiricalMeasure(draws), 10, 1.0);
  for (const auto& b : bins) {
    CAPTURE(b.r_mid);
    CHECK(b.density == doctest::Approx(1.0 / std::numbers::pi).epsilon(0.08));
  }

  const auto single = radial_histogram(EmpiricalMeasure({Complex(1.0, 0.0)}), 1);
  REQUIRE(single.size() == 1);
  CHECK(single[0].density > 0.0);
  const auto split = radial_histogram(EmpiricalMeasure({Complex(0.0, 1.0)}), 4, 1.0);
  CHECK(split[3].density > 0.0);
  CHECK(split[0].density == 0.0);

  CHECK_THROWS_AS(radial_histogram(EmpiricalMeasure(draws), 0), std::invalid_argument);
}

TEST_CASE("CSV emitters") {
  std::ostringstream e, s, h;
  const std::vector<Complex> ev{Complex(1.5, -0.25)};
  write_eigenvalues_csv(e, ev);
  CHECK(e.str() == "re,im\n1.5,-0.25\n");
  const std::vector<double> sv{2.0, 0.5};
  write_singular_values_csv(s, sv);
  CHECK(s.str() == "s\n2\n0.5\n");
  const std::vector<RadialBin> bins{{0.25, 0.3}};
  write_histogram_csv(h, bins);
  CHECK(h.str() == "r_mid,density\n0.25,0.3\n");
}
