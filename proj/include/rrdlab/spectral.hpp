#pragma once

#include <iosfwd>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include "rrdlab/matrix_builder.hpp"

namespace rrdlab {

/// Eigenvalues with multiplicity, in no particular order. Real input is routed
/// through the real Schur solver. Throws NumericalError on non-convergence.
std::vector<Complex> eigenvalues(const CMatrix& m);

/// Singular values s_1 >= ... >= s_n >= 0. Throws NumericalError on
/// non-convergence.
std::vector<double> singular_values(const CMatrix& m);

/// Eigenvalues of a Hermitian matrix, ascending.
std::vector<double> hermitian_eigenvalues(const CMatrix& h);

/// Uniform probability measure on a finite list of atoms in C.
class EmpiricalMeasure {
 public:
  explicit EmpiricalMeasure(std::vector<Complex> atoms) : atoms_(std::move(atoms)) {}
  static EmpiricalMeasure from_reals(std::span<const double> atoms);

  const std::vector<Complex>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  double weight() const noexcept { return atoms_.empty() ? 0.0 : 1.0 / static_cast<double>(atoms_.size()); }

  /// Push-forward under w -> factor * w.
  EmpiricalMeasure scaled(double factor) const;

 private:
  std::vector<Complex> atoms_;
};

inline constexpr double kNegInfinity = -std::numeric_limits<double>::infinity();

/// (1/n) sum log s_i, or kNegInfinity when some s_i is zero.
double empirical_log_potential(std::span<const double> svals);

// Compactly supported surrogate for log on [delta, c0]: zero on [0, delta/2]
// and [2 c0, inf), linear ramps in between.
struct LogTruncation {
  double delta = 1e-3;
  double c0 = 1.0;
};

double truncated_log(double s, const LogTruncation& t);
double truncated_log_potential(std::span<const double> svals, const LogTruncation& t);

/// Log-potential of the uniform measure on the unit disk:
/// log|z| outside, -(1 - |z|^2)/2 inside.
double reference_potential(Complex z);

struct CircularLaw {};
struct OrientedKM {
  int d = 3;
};
using ReferenceLaw = std::variant<CircularLaw, OrientedKM>;

double support_radius(const ReferenceLaw& law);

/// Planar density at modulus r (1/pi on the disk; d^2(d-1) / (pi (d^2 - r^2)^2)
/// for the oriented Kesten-McKay law).
double reference_density(const ReferenceLaw& law, double r);

/// Mass of the disk of radius r: min(r^2, 1), or (d-1) r^2 / (d^2 - r^2) up to sqrt(d).
double reference_radial_cdf(const ReferenceLaw& law, double r);

/// Kolmogorov distance between the radial distribution of `measure` and the
/// reference radial CDF. Throws std::invalid_argument for an empty measure.
double radial_ks(const EmpiricalMeasure& measure, const ReferenceLaw& law);

struct RadialBin {
  double r_mid = 0.0;
  double density = 0.0;
};

/// Moduli histogram on [0, r_max] with count / (N * width * 2 pi r_mid), an
/// estimate of the planar density. r_max <= 0 selects the largest modulus.
std::vector<RadialBin> radial_histogram(const EmpiricalMeasure& measure, int bins, double r_max = 0.0);

// CSV emitters. Every file may begin with '#' comment lines.
void write_eigenvalues_csv(std::ostream& out, std::span<const Complex> values);
void write_singular_values_csv(std::ostream& out, std::span<const double> values);
void write_histogram_csv(std::ostream& out, std::span<const RadialBin> bins);
void write_reference_curve_csv(std::ostream& out, std::span<const RadialBin> bins, const ReferenceLaw& law);

}  // namespace rrdlab
