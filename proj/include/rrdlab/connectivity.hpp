#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "rrdlab/binary_matrix.hpp"
#include "rrdlab/matrix_builder.hpp"
#include "rrdlab/rng.hpp"

namespace rrdlab {

struct BroadConnectivityParams {
  double h_cut = 1.0;  // threshold, in (0, 1]
  double delta = 0.5;  // in (0, 1)
  double nu = 0.5;     // in (0, 1)
};

void validate(const BroadConnectivityParams& p);

struct CompressibilityParams {
  double theta = 0.5;
  double rho = 0.5;
};

/// Bipartite graph of a nonnegative n x m profile after thresholding: (i, j)
/// is an edge iff sigma_ij >= h_cut and sigma_ij > 0.
class GraphPrimitives {
 public:
  GraphPrimitives(const Eigen::MatrixXd& sigma, double h_cut);
  explicit GraphPrimitives(const BinaryMatrix& profile);

  int rows() const noexcept { return static_cast<int>(edges_.rows()); }
  int cols() const noexcept { return static_cast<int>(edges_.cols()); }
  bool edge(int i, int j) const { return edges_(i, j); }

  /// Columns adjacent to row i.
  std::vector<int> neighborhood(int i) const;
  /// Rows adjacent to column j.
  std::vector<int> co_neighborhood(int j) const;
  /// Columns j with |co_neighborhood(j) & I| >= delta |I|, for a row set I.
  std::vector<int> broad_neighbors(std::span<const int> rows, double delta) const;
  /// Rows i with |neighborhood(i) & J| >= delta |J|, for a column set J.
  std::vector<int> broad_co_neighbors(std::span<const int> cols, double delta) const;
  /// Number of edges in I x J.
  std::size_t edge_count(std::span<const int> rows, std::span<const int> cols) const;

  std::size_t row_degree(int i) const { return edges_.row_sum(i); }
  std::size_t col_degree(int j) const { return edges_.col_sum(j); }
  const BinaryMatrix& thresholded() const noexcept { return edges_; }

 private:
  void check_rows(std::span<const int> idx) const;
  void check_cols(std::span<const int> idx) const;
  BinaryMatrix edges_;
};

enum class VerdictKind { Holds, Violated, NotFalsified };

std::string to_string(VerdictKind k);

// Outcome of a property check. For a violation, `condition` names what failed
// and the witness sets let anyone re-check it with GraphPrimitives.
struct Verdict {
  VerdictKind kind = VerdictKind::NotFalsified;
  std::string condition;
  std::vector<int> witness_rows;
  std::vector<int> witness_cols;
};

struct ExactScan {};
struct RandomizedScan {
  int trials = 1000;
  Seed seed = 0;
};
using BroadScanMode = std::variant<ExactScan, RandomizedScan>;

inline constexpr int kMaxExactColumns = 20;

/// Checks the three broad-connectivity conditions on the thresholded profile:
///   (1) every row has >= delta m neighbors,
///   (2) every column has >= delta n neighbors,
///   (3) every column set J has >= min(n, (1+nu)|J|) delta-broad row neighbors.
/// ExactScan enumerates every J (m <= kMaxExactColumns) and returns Holds or a
/// witness. RandomizedScan certifies the small-|J| and large-|J| ranges from
/// degree bounds, tests all singletons, and samples the middle range; it
/// returns Holds only if the middle range is empty.
Verdict verify_broad(const GraphPrimitives& g, const BroadConnectivityParams& params, const BroadScanMode& mode);

/// Independent re-check of a Violated verdict; true iff the witness really
/// violates the named condition.
bool witness_confirms(const GraphPrimitives& g, const BroadConnectivityParams& params, const Verdict& v);

/// Column-set sizes for which condition (3) follows from degree bounds alone:
/// every |J| <= small or |J| >= large is certified.
struct CertifiedRange {
  int small = 0;
  int large = 0;
};
CertifiedRange certified_sizes(const GraphPrimitives& g, const BroadConnectivityParams& params);

/// Looks for I, J with |I|, |J| >= eps0 n and e_A(I, J) < p |I| |J| / 2 by
/// random restarts followed by alternating worst-row/worst-column descent.
Verdict discrepancy_search(const BinaryMatrix& a, double p, double eps0, int trials, Seed seed);

/// True iff e_A(I, J) < p |I| |J| / 2 and both sets are large enough.
bool discrepancy_witness_confirms(const BinaryMatrix& a, double p, double eps0, const Verdict& v);

/// Euclidean norm of v after removing its floor(theta m) largest-magnitude
/// coordinates, i.e. the distance to the nearest floor(theta m)-sparse vector.
double sparse_tail_norm(std::span<const Complex> v, double theta);

/// Throws std::invalid_argument unless |‖v‖ - 1| <= 1e-10.
bool is_compressible(std::span<const Complex> v, const CompressibilityParams& params);

nlohmann::ordered_json broad_record(const Verdict& v, const BroadConnectivityParams& params, const BroadScanMode& mode);
nlohmann::ordered_json discrepancy_record(const Verdict& v, double p, double eps0, int trials, Seed seed);

}  // namespace rrdlab
