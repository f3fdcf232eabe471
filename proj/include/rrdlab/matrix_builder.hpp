#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "rrdlab/binary_matrix.hpp"
#include "rrdlab/rng.hpp"

namespace rrdlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Entry laws. Every variant is centered with unit variance (E|xi|^2 = 1).
struct RealGaussian {};
struct ComplexGaussian {};  // (g1 + i g2) / sqrt(2)
struct Rademacher {};
struct StandardizedStudentT {
  double dof = 5.0;  // must exceed 4 so that a (4+eta)-th moment exists
};

using WeightLaw = std::variant<RealGaussian, ComplexGaussian, Rademacher, StandardizedStudentT>;

void validate(const WeightLaw& law);
std::string law_name(const WeightLaw& law);
bool is_real_valued(const WeightLaw& law) noexcept;

/// Draw one variate.
Complex draw(const WeightLaw& law, Engine& rng);

/// rows x cols matrix of iid draws.
CMatrix sample_weights(int rows, int cols, const WeightLaw& law, Seed seed);
inline CMatrix sample_weights(int n, const WeightLaw& law, Seed seed) { return sample_weights(n, n, law, seed); }

/// E|xi|^q in closed form (q < dof for the Student-t law).
double absolute_moment(const WeightLaw& law, double q);

/// The shifted, rescaled matrix A o X / sqrt(np) - z I, together with its
/// generating parameters.
class WeightedMatrix {
 public:
  const CMatrix& entries() const noexcept { return entries_; }
  int n() const noexcept { return static_cast<int>(entries_.rows()); }
  double p() const noexcept { return p_; }
  Complex z() const noexcept { return z_; }

 private:
  friend WeightedMatrix assemble_shifted(const BinaryMatrix&, const CMatrix&, double, Complex);
  CMatrix entries_;
  double p_ = 1.0;
  Complex z_{};
};

/// Entry (i,j) = a_ij x_ij / sqrt(n p) - z [i == j]. Accepts p in (0, 1];
/// throws std::invalid_argument on shape mismatch or p outside that range.
WeightedMatrix assemble_shifted(const BinaryMatrix& a, const CMatrix& x, double p, Complex z);

/// 2n x 2n block matrix [[0, M], [M^*, 0]].
class HermitizationMatrix {
 public:
  explicit HermitizationMatrix(const CMatrix& m);
  const CMatrix& entries() const noexcept { return entries_; }
  int half() const noexcept { return static_cast<int>(entries_.rows() / 2); }

 private:
  CMatrix entries_;
};

inline HermitizationMatrix hermitize(const CMatrix& m) { return HermitizationMatrix(m); }
inline HermitizationMatrix hermitize(const WeightedMatrix& m) { return HermitizationMatrix(m.entries()); }

struct SpreadReport {
  bool spread = false;
  double truncated_variance = 0.0;  // Var[xi 1(|xi - E xi| <= kappa)]
  double std_error = 0.0;           // zero when the value is exact
};

/// Tests Var[xi 1(|xi - E xi| <= kappa)] >= 1/kappa. Closed form for the
/// Gaussian and Rademacher laws, Monte Carlo for Student-t.
SpreadReport spread_check(const WeightLaw& law, double kappa, Seed mc_seed = 0x5eed, int mc_draws = 1'000'000);

/// kappa = 3 (3 mu_q^q)^{1/(q-2)} for a centered unit-variance law with
/// finite q-th absolute moment mu_q^q = E|xi|^q (q > 2).
double spread_kappa_from_moment(double q, double moment_q);

// Binary dense complex matrix: 8-byte magic "RRDCMAT1", rows and cols as
// uint64 little-endian, then row-major (re, im) float64 little-endian pairs.
void write_binary_matrix(std::ostream& out, const CMatrix& m);
CMatrix read_binary_matrix(std::istream& in);

}  // namespace rrdlab
