#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rrdlab/binary_matrix.hpp"
#include "rrdlab/rng.hpp"

namespace rrdlab {

/// Adjacency matrix of a d-regular digraph on n vertices: a 0-1 matrix with
/// every row sum and every column sum equal to d. Loops are allowed (diagonal
/// entries are ordinary entries).
class RegularDigraph {
 public:
  /// Validates the row/column-sum invariant; throws std::invalid_argument.
  static RegularDigraph from_matrix(BinaryMatrix adjacency);

  /// Ones at (i, i+1 mod n), ..., (i, i+d mod n).
  static RegularDigraph circulant(int n, int d);

  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  const BinaryMatrix& adjacency() const noexcept { return adj_; }

  /// Edges (i, j) sorted lexicographically.
  std::vector<std::pair<int, int>> edges() const;

  friend bool operator==(const RegularDigraph&, const RegularDigraph&) = default;

 private:
  RegularDigraph(int n, int d, BinaryMatrix adj) : n_(n), d_(d), adj_(std::move(adj)) {}
  int n_ = 0;
  int d_ = 0;
  BinaryMatrix adj_;
};

bool is_regular(const BinaryMatrix& m, std::size_t d) noexcept;

struct SwitchChain {
  /// Proposal steps before the state is returned; nullopt means default_burn_in(n, d).
  std::optional<std::uint64_t> burn_in_steps;
};

/// Sum of d uniform permutation matrices conditioned on disjoint supports.
/// Contiguous to uniform for fixed d, not uniform.
struct PermutationSum {
  std::uint64_t max_rejections = 1000;
};

using SamplerMethod = std::variant<SwitchChain, PermutationSum>;

/// 20 * n * d * ceil(ln(n * d)).
std::uint64_t default_burn_in(int n, int d);

// Lazy directed-switch chain on M_n(d). Each step proposes two uniform edges
// (a,b), (c,e) and moves to (a,e), (c,b) when a != c, b != e and both targets
// are non-edges; otherwise the state is kept.
class SwitchChainState {
 public:
  explicit SwitchChainState(RegularDigraph start);

  bool step(Engine& rng);
  void run(std::uint64_t steps, Engine& rng);

  std::uint64_t accepted() const noexcept { return accepted_; }
  RegularDigraph digraph() const;
  const BinaryMatrix& adjacency() const noexcept { return adj_; }

 private:
  int n_;
  int d_;
  BinaryMatrix adj_;
  // Edge slot s is the edge (s / d, heads_[s]); rows own d consecutive slots.
  std::vector<std::uint32_t> heads_;
  std::uint64_t accepted_ = 0;
};

RegularDigraph sample_rrd(int n, int d, const SamplerMethod& method, Seed seed);

/// n x n matrix of iid Bernoulli(p) entries.
BinaryMatrix sample_bernoulli(int n, double p, Seed seed);

using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kMaxExactCountN = 8;

/// |M_n(d)| by a column-by-column DP over residual row-sum profiles.
/// Throws std::invalid_argument for n > kMaxExactCountN or d outside [1, n-1].
BigInt count_regular_matrices(int n, int d);

/// Leading term of log P(a Bernoulli(d/n) matrix lies in M_n(d)):
/// 0.5 log(2 pi d(n-d)) - n log(2 pi d(n-d)/n).
double canfield_mckay_log_prob(int n, int d);

/// Exact log P(Bernoulli(d/n) matrix lies in M_n(d)) from count_regular_matrices.
double exact_regular_log_prob(int n, int d);

// Edge-list text format: "n d" header, then one "i j" line per edge, 0-indexed,
// lexicographic order.
void write_edge_list(std::ostream& out, const RegularDigraph& g);
RegularDigraph read_edge_list(std::istream& in);

}  // namespace rrdlab
