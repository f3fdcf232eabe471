#include "rrdlab/matrix_builder.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace rrdlab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double student_scale(double dof) { return std::sqrt(dof / (dof - 2.0)); }

}  // namespace

void validate(const WeightLaw& law) {
  if (const auto* t = std::get_if<StandardizedStudentT>(&law); t && !(t->dof > 4.0)) {
    throw std::invalid_argument("Student-t weights need dof > 4");
  }
}

std::string law_name(const WeightLaw& law) {
  return std::visit(Overloaded{
                        [](RealGaussian) -> std::string { return "real_gaussian"; },
                        [](ComplexGaussian) -> std::string { return "complex_gaussian"; },
                        [](Rademacher) -> std::string { return "rademacher"; },
                        [](StandardizedStudentT t) -> std::string { return "student_t(" + std::to_string(t.dof) + ")"; },
                    },
                    law);
}

bool is_real_valued(const WeightLaw& law) noexcept { return !std::holds_alternative<ComplexGaussian>(law); }

Complex draw(const WeightLaw& law, Engine& rng) {
  return std::visit(Overloaded{
                        [&](RealGaussian) {
                          std::normal_distribution<double> g;
                          return Complex(g(rng), 0.0);
                        },
                        [&](ComplexGaussian) {
                          std::normal_distribution<double> g;
                          const double re = g(rng);
                          const double im = g(rng);
                          return Complex(re, im) / std::numbers::sqrt2;
                        },
                        [&](Rademacher) {
                          std::bernoulli_distribution coin(0.5);
                          return Complex(coin(rng) ? 1.0 : -1.0, 0.0);
                        },
                        [&](StandardizedStudentT t) {
                          std::student_t_distribution<double> st(t.dof);
                          return Complex(st(rng) / student_scale(t.dof), 0.0);
                        },
                    },
                    law);
}

CMatrix sample_weights(int rows, int cols, const WeightLaw& law, Seed seed) {
  validate(law);
  auto rng = make_engine(seed);
  CMatrix x(rows, cols);
  // Row-major fill order so the stream layout is independent of Eigen storage.
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) x(i, j) = draw(law, rng);
  }
  return x;
}

double absolute_moment(const WeightLaw& law, double q) {
  validate(law);
  return std::visit(Overloaded{
                        [&](RealGaussian) {
                          return std::pow(2.0, q / 2) * std::tgamma((q + 1) / 2) / std::sqrt(std::numbers::pi);
                        },
                        // |xi|^2 is Exp(1).
                        [&](ComplexGaussian) { return std::tgamma(1.0 + q / 2); },
                        [&](Rademacher) { return 1.0; },
                        [&](StandardizedStudentT t) {
                          if (!(q < t.dof)) throw std::invalid_argument("moment order must be below dof");
                          const double nu = t.dof;
                          const double raw = std::pow(nu, q / 2) * std::tgamma((q + 1) / 2) * std::tgamma((nu - q) / 2) /
                                             (std::sqrt(std::numbers::pi) * std::tgamma(nu / 2));
                          return raw / std::pow(student_scale(nu), q);
                        },
                    },
                    law);
}

WeightedMatrix assemble_shifted(const BinaryMatrix& a, const CMatrix& x, double p, Complex z) {
  if (a.rows() != a.cols() || static_cast<Eigen::Index>(a.rows()) != x.rows() ||
      static_cast<Eigen::Index>(a.cols()) != x.cols()) {
    throw std::invalid_argument("assemble_shifted: A and X must both be n x n");
  }
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("assemble_shifted: p must lie in (0,1]");
  const auto n = static_cast<Eigen::Index>(a.rows());
  const double scale = 1.0 / std::sqrt(static_cast<double>(n) * p);
  WeightedMatrix out;
  out.entries_ = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (a(i, j)) out.entries_(i, j) = x(i, j) * scale;
    }
    out.entries_(i, i) -= z;
  }
  out.p_ = p;
  out.z_ = z;
  return out;
}

HermitizationMatrix::HermitizationMatrix(const CMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitize: matrix must be square");
  const auto n = m.rows();
  entries_ = CMatrix::Zero(2 * n, 2 * n);
  entries_.topRightCorner(n, n) = m;
  entries_.bottomLeftCorner(n, n) = m.adjoint();
}

SpreadReport spread_check(const WeightLaw& law, double kappa, Seed mc_seed, int mc_draws) {
  validate(law);
  if (!(kappa >= 1.0)) throw std::invalid_argument("spread_check: kappa must be >= 1");
  SpreadReport r;
  std::visit(Overloaded{
                 [&](RealGaussian) {
                   const double phi = std::exp(-0.5 * kappa * kappa) / std::sqrt(2.0 * std::numbers::pi);
                   const double mass = std::erf(kappa / std::numbers::sqrt2);  // 2 Phi(kappa) - 1
                   r.truncated_variance = mass - 2.0 * kappa * phi;
                 },
                 [&](ComplexGaussian) {
                   const double k2 = kappa * kappa;
                   r.truncated_variance = 1.0 - (1.0 + k2) * std::exp(-k2);
                 },
                 [&](Rademacher) { r.truncated_variance = 1.0; },
                 [&](StandardizedStudentT) {
                   // Symmetric law: E xi = 0, so truncate |xi| <= kappa.
                   auto rng = make_engine(mc_seed);
                   double s1 = 0, s2 = 0, s4 = 0;
                   for (int k = 0; k < mc_draws; ++k) {
                     const double x = draw(law, rng).real();
                     const double y = std::abs(x) <= kappa ? x : 0.0;
                     s1 += y;
                     s2 += y * y;
                     s4 += y * y * y * y;
                   }
                   const double nd = mc_draws;
                   const double m1 = s1 / nd;
                   const double m2 = s2 / nd;
                   r.truncated_variance = m2 - m1 * m1;
                   r.std_error = std::sqrt(std::max(0.0, s4 / nd - m2 * m2) / nd);
                 },
             },
             law);
  r.spread = r.truncated_variance >= 1.0 / kappa;
  return r;
}

double spread_kappa_from_moment(double q, double moment_q) {
  if (!(q > 2.0)) throw std::invalid_argument("moment order must exceed 2");
  return 3.0 * std::pow(3.0 * moment_q, 1.0 / (q - 2.0));
}

namespace {

constexpr std::array<char, 8> kMagic{'R', 'R', 'D', 'C', 'M', 'A', 'T', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int k = 0; k < 8; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xff);
  out.write(b.data(), 8);
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 8)) throw std::invalid_argument("binary matrix: truncated");
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
  return v;
}

}  // namespace

void write_binary_matrix(std::ostream& out, const CMatrix& m) {
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, static_cast<std::uint64_t>(m.rows()));
  put_u64(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      put_u64(out, std::bit_cast<std::uint64_t>(m(i, j).real()));
      put_u64(out, std::bit_cast<std::uint64_t>(m(i, j).imag()));
    }
  }
}

CMatrix read_binary_matrix(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::invalid_argument("binary matrix: bad magic");
  }
  const auto rows = get_u64(in);
  const auto cols = get_u64(in);
  if (rows > (1u << 20) || cols > (1u << 20)) throw std::invalid_argument("binary matrix: implausible shape");
  CMatrix m(rows, cols);
  for (std::uint64_t i = 0; i < rows; ++i) {
    for (std::uint64_t j = 0; j < cols; ++j) {
      const double re = std::bit_cast<double>(get_u64(in));
      const double im = std::bit_cast<double>(get_u64(in));
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

}  // namespace rrdlab
