#include "rrdlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "rrdlab/csv.hpp"
#include "rrdlab/error.hpp"

namespace rrdlab {

namespace {

bool is_real(const CMatrix& m) { return (m.imag().array() == 0.0).all(); }

}  // namespace

std::vector<Complex> eigenvalues(const CMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: matrix must be square");
  if (!m.allFinite()) throw std::invalid_argument("eigenvalues: non-finite entry");
  std::vector<Complex> out;
  if (m.rows() == 0) return out;
  if (is_real(m)) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m.real(), /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw NumericalError("real Schur iteration did not converge");
    const auto& ev = es.eigenvalues();
    out.assign(ev.data(), ev.data() + ev.size());
  } else {
    Eigen::ComplexEigenSolver<CMatrix> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw NumericalError("complex Schur iteration did not converge");
    const auto& ev = es.eigenvalues();
    out.assign(ev.data(), ev.data() + ev.size());
  }
  return out;
}

std::vector<double> singular_values(const CMatrix& m) {
  if (!m.allFinite()) throw std::invalid_argument("singular_values: non-finite entry");
  std::vector<double> out;
  if (m.size() == 0) return out;
  Eigen::VectorXd sv;
  if (is_real(m)) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m.real());
    if (svd.info() != Eigen::Success) throw NumericalError("SVD did not converge");
    sv = svd.singularValues();
  } else {
    Eigen::BDCSVD<CMatrix> svd(m);
    if (svd.info() != Eigen::Success) throw NumericalError("SVD did not converge");
    sv = svd.singularValues();
  }
  out.assign(sv.data(), sv.data() + sv.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("hermitian_eigenvalues: matrix must be square");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

EmpiricalMeasure EmpiricalMeasure::from_reals(std::span<const double> atoms) {
  std::vector<Complex> pts(atoms.begin(), atoms.end());
  return EmpiricalMeasure(std::move(pts));
}

EmpiricalMeasure EmpiricalMeasure::scaled(double factor) const {
  std::vector<Complex> pts = atoms_;
  for (auto& w : pts) w *= factor;
  return EmpiricalMeasure(std::move(pts));
}

double empirical_log_potential(std::span<const double> svals) {
  if (svals.empty()) throw std::invalid_argument("empirical_log_potential: no singular values");
  double acc = 0.0;
  for (double s : svals) {
    if (s < 0.0) throw std::invalid_argument("empirical_log_potential: negative singular value");
    if (s == 0.0) return kNegInfinity;
    acc += std::log(s);
  }
  return acc / static_cast<double>(svals.size());
}

double truncated_log(double s, const LogTruncation& t) {
  if (!(t.delta > 0.0) || !(t.c0 > t.delta)) throw std::invalid_argument("truncated_log: need 0 < delta < c0");
  if (s <= t.delta / 2 || s >= 2 * t.c0) return 0.0;
  if (s < t.delta) return std::log(t.delta) * (s - t.delta / 2) / (t.delta / 2);
  if (s <= t.c0) return std::log(s);
  return std::log(t.c0) * (2 * t.c0 - s) / t.c0;
}

double truncated_log_potential(std::span<const double> svals, const LogTruncation& t) {
  if (svals.empty()) throw std::invalid_argument("truncated_log_potential: no singular values");
  double acc = 0.0;
  for (double s : svals) acc += truncated_log(s, t);
  return acc / static_cast<double>(svals.size());
}

double reference_potential(Complex z) {
  const double r = std::abs(z);
  if (r > 1.0) return std::log(r);
  return -0.5 * (1.0 - r * r);
}

double support_radius(const ReferenceLaw& law) {
  if (const auto* km = std::get_if<OrientedKM>(&law)) return std::sqrt(static_cast<double>(km->d));
  return 1.0;
}

namespace {

void check_law(const ReferenceLaw& law) {
  if (const auto* km = std::get_if<OrientedKM>(&law); km && km->d < 2) {
    throw std::invalid_argument("oriented Kesten-McKay law needs d >= 2");
  }
}

}  // namespace

double reference_density(const ReferenceLaw& law, double r) {
  check_law(law);
  if (r < 0.0) throw std::invalid_argument("reference_density: negative radius");
  if (r > support_radius(law)) return 0.0;
  if (const auto* km = std::get_if<OrientedKM>(&law)) {
    const double d = km->d;
    const double gap = d * d - r * r;
    return d * d * (d - 1) / (std::numbers::pi * gap * gap);
  }
  return 1.0 / std::numbers::pi;
}

double reference_radial_cdf(const ReferenceLaw& law, double r) {
  check_law(law);
  if (r < 0.0) throw std::invalid_argument("reference_radial_cdf: negative radius");
  if (const auto* km = std::get_if<OrientedKM>(&law)) {
    const double d = km->d;
    if (r * r >= d) return 1.0;
    return (d - 1) * r * r / (d * d - r * r);
  }
  return std::min(r * r, 1.0);
}

double radial_ks(const EmpiricalMeasure& measure, const ReferenceLaw& law) {
  if (measure.empty()) throw std::invalid_argument("radial_ks: empty measure");
  std::vector<double> radii;
  radii.reserve(measure.size());
  for (const auto& w : measure.atoms()) radii.push_back(std::abs(w));
  std::sort(radii.begin(), radii.end());
  const double n = static_cast<double>(radii.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double f = reference_radial_cdf(law, radii[i]);
    worst = std::max({worst, (i + 1) / n - f, f - i / n});
  }
  return std::min(worst, 1.0);
}

std::vector<RadialBin> radial_histogram(const EmpiricalMeasure& measure, int bins, double r_max) {
  if (bins < 1) throw std::invalid_argument("radial_histogram: bins must be >= 1");
  if (measure.empty()) throw std::invalid_argument("radial_histogram: empty measure");
  if (r_max <= 0.0) {
    for (const auto& w : measure.atoms()) r_max = std::max(r_max, std::abs(w));
    if (r_max <= 0.0) r_max = 1.0;
  }
  const double width = r_max / bins;
  std::vector<std::size_t> counts(bins, 0);
  for (const auto& w : measure.atoms()) {
    const double r = std::abs(w);
    if (r > r_max) continue;
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(r / width), bins - 1);
    ++counts[k];
  }
  const double n = static_cast<double>(measure.size());
  std::vector<RadialBin> out(bins);
  for (int k = 0; k < bins; ++k) {
    out[k].r_mid = (k + 0.5) * width;
    out[k].density = counts[k] / (n * width * 2.0 * std::numbers::pi * out[k].r_mid);
  }
  return out;
}

void write_eigenvalues_csv(std::ostream& out, std::span<const Complex> values) {
  out << "re,im\n";
  for (const auto& v : values) out << fmt_double(v.real()) << ',' << fmt_double(v.imag()) << '\n';
}

void write_singular_values_csv(std::ostream& out, std::span<const double> values) {
  out << "s\n";
  for (double v : values) out << fmt_double(v) << '\n';
}

void write_histogram_csv(std::ostream& out, std::span<const RadialBin> bins) {
  out << "r_mid,density\n";
  for (const auto& b : bins) out << fmt_double(b.r_mid) << ',' << fmt_double(b.density) << '\n';
}

void write_reference_curve_csv(std::ostream& out, std::span<const RadialBin> bins, const ReferenceLaw& law) {
  out << "r_mid,reference_density\n";
  for (const auto& b : bins) out << fmt_double(b.r_mid) << ',' << fmt_double(reference_density(law, b.r_mid)) << '\n';
}

}  // namespace rrdlab
