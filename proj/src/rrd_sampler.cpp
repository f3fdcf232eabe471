#include "rrdlab/rrd_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "rrdlab/error.hpp"

namespace rrdlab {

namespace {

void check_degree(int n, int d) {
  if (n < 2 || d < 1 || d > n - 1) {
    throw std::invalid_argument("need 1 <= d <= n-1, got n=" + std::to_string(n) +
                                " d=" + std::to_string(d));
  }
}

}  // namespace

bool is_regular(const BinaryMatrix& m, std::size_t d) noexcept {
  if (m.rows() != m.cols()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (m.row_sum(i) != d || m.col_sum(i) != d) return false;
  }
  return true;
}

RegularDigraph RegularDigraph::from_matrix(BinaryMatrix adjacency) {
  if (adjacency.rows() != adjacency.cols() || adjacency.rows() == 0) {
    throw std::invalid_argument("adjacency matrix must be square and non-empty");
  }
  const auto d = adjacency.row_sum(0);
  if (!is_regular(adjacency, d)) {
    throw std::invalid_argument("adjacency matrix is not regular");
  }
  const int n = static_cast<int>(adjacency.rows());
  return RegularDigraph(n, static_cast<int>(d), std::move(adjacency));
}

RegularDigraph RegularDigraph::circulant(int n, int d) {
  check_degree(n, d);
  BinaryMatrix adj(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 1; k <= d; ++k) adj.set(i, (i + k) % n, true);
  }
  return RegularDigraph(n, d, std::move(adj));
}

std::vector<std::pair<int, int>> RegularDigraph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(n_) * d_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (adj_(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

std::uint64_t default_burn_in(int n, int d) {
  const double nd = static_cast<double>(n) * d;
  const auto log_steps = static_cast<std::uint64_t>(std::ceil(std::log(std::max(nd, 2.0))));
  return 20ULL * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(d) * log_steps;
}

SwitchChainState::SwitchChainState(RegularDigraph start)
    : n_(start.n()), d_(start.d()), adj_(start.adjacency()) {
  if (static_cast<std::uint64_t>(n_) * static_cast<std::uint64_t>(d_) >= (std::uint64_t{1} << 32)) {
    throw std::invalid_argument("switch chain supports at most 2^32 - 1 edges");
  }
  heads_.reserve(static_cast<std::size_t>(n_) * d_);
  for (const auto& [a, b] : start.edges()) heads_.push_back(static_cast<std::uint32_t>(b));
}

namespace {

// Unbiased draw from [0, bound) given 32 random bits (Lemire's multiply-shift
// with rejection); `more` supplies fresh bits after a rejection.
template <class More>
std::uint32_t bounded32(std::uint32_t bits, std::uint32_t bound, More&& more) {
  std::uint64_t prod = static_cast<std::uint64_t>(bits) * bound;
  auto low = static_cast<std::uint32_t>(prod);
  if (low < bound) {
    const std::uint32_t threshold = static_cast<std::uint32_t>(-bound) % bound;
    while (low < threshold) {
      prod = static_cast<std::uint64_t>(more()) * bound;
      low = static_cast<std::uint32_t>(prod);
    }
  }
  return static_cast<std::uint32_t>(prod >> 32);
}

}  // namespace

bool SwitchChainState::step(Engine& rng) {
  // Two edge slots, uniform and independent, from one 64-bit draw.
  const auto slots = static_cast<std::uint32_t>(heads_.size());
  const std::uint64_t r = rng();
  auto more = [&] { return static_cast<std::uint32_t>(rng() >> 32); };
  const std::uint32_t s1 = bounded32(static_cast<std::uint32_t>(r), slots, more);
  const std::uint32_t s2 = bounded32(static_cast<std::uint32_t>(r >> 32), slots, more);
  const std::uint32_t a = s1 / static_cast<std::uint32_t>(d_);
  const std::uint32_t c = s2 / static_cast<std::uint32_t>(d_);
  const std::uint32_t b = heads_[s1];
  const std::uint32_t e = heads_[s2];
  if (a == c || b == e) return false;
  if (adj_(a, e) || adj_(c, b)) return false;
  adj_.set(a, b, false);
  adj_.set(c, e, false);
  adj_.set(a, e, true);
  adj_.set(c, b, true);
  heads_[s1] = e;
  heads_[s2] = b;
  ++accepted_;
  return true;
}

void SwitchChainState::run(std::uint64_t steps, Engine& rng) {
  for (std::uint64_t s = 0; s < steps; ++s) step(rng);
}

RegularDigraph SwitchChainState::digraph() const { return RegularDigraph::from_matrix(adj_); }

namespace {

RegularDigraph sample_switch(int n, int d, const SwitchChain& m, Engine& rng) {
  SwitchChainState chain(RegularDigraph::circulant(n, d));
  chain.run(m.burn_in_steps.value_or(default_burn_in(n, d)), rng);
  return chain.digraph();
}

RegularDigraph sample_permutation_sum(int n, int d, const PermutationSum& m, Engine& rng) {
  if (m.max_rejections < 1) throw std::invalid_argument("max_rejections must be >= 1");
  std::vector<int> perm(n);
  for (std::uint64_t attempt = 0; attempt < m.max_rejections; ++attempt) {
    BinaryMatrix adj(n, n);
    bool clash = false;
    for (int k = 0; k < d && !clash; ++k) {
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int i = 0; i < n; ++i) {
        if (adj(i, perm[i])) {
          clash = true;
          break;
        }
        adj.set(i, perm[i], true);
      }
    }
    if (!clash) return RegularDigraph::from_matrix(std::move(adj));
  }
  throw BudgetExhausted("permutation-sum sampler: no disjoint draw in " +
                        std::to_string(m.max_rejections) + " attempts");
}

}  // namespace

RegularDigraph sample_rrd(int n, int d, const SamplerMethod& method, Seed seed) {
  check_degree(n, d);
  auto rng = make_engine(seed);
  return std::visit(
      [&](const auto& m) -> RegularDigraph {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, SwitchChain>) {
          return sample_switch(n, d, m, rng);
        } else {
          return sample_permutation_sum(n, d, m, rng);
        }
      },
      method);
}

BinaryMatrix sample_bernoulli(int n, double p, Seed seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
  if (n < 0) throw std::invalid_argument("n must be non-negative");
  auto rng = make_engine(seed);
  std::bernoulli_distribution coin(p);
  BinaryMatrix b(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) b.set(i, j, coin(rng));
  }
  return b;
}

BigInt count_regular_matrices(int n, int d) {
  check_degree(n, d);
  if (n > kMaxExactCountN) {
    throw std::invalid_argument("exact count supports n <= " + std::to_string(kMaxExactCountN));
  }

  // State: how many rows still need r more ones, for r = 0..d. Rows with the
  // same residual are interchangeable, so the profile determines the future.
  using Profile = std::vector<int>;
  std::map<Profile, BigInt> layer;
  Profile start(d + 1, 0);
  start[d] = n;
  layer[start] = 1;

  auto binom = [](int a, int b) -> BigInt {
    if (b < 0 || b > a) return 0;
    BigInt r = 1;
    for (int k = 1; k <= b; ++k) r = r * (a - b + k) / k;
    return r;
  };

  for (int col = 0; col < n; ++col) {
    std::map<Profile, BigInt> next;
    for (const auto& [prof, ways] : layer) {
      // Choose take[r] rows from residual class r (r >= 1), sum take = d.
      Profile take(d + 1, 0);
      auto recurse = [&](auto&& self, int r, int remaining, BigInt mult) -> void {
        if (r == 0) {
          if (remaining != 0) return;
          Profile np = prof;
          for (int q = 1; q <= d; ++q) {
            np[q] -= take[q];
            np[q - 1] += take[q];
          }
          next[np] += ways * mult;
          return;
        }
        const int hi = std::min(prof[r], remaining);
        for (int k = 0; k <= hi; ++k) {
          take[r] = k;
          self(self, r - 1, remaining - k, mult * binom(prof[r], k));
        }
        take[r] = 0;
      };
      recurse(recurse, d, d, BigInt(1));
    }
    layer = std::move(next);
  }

  Profile done(d + 1, 0);
  done[0] = n;
  const auto it = layer.find(done);
  return it == layer.end() ? BigInt(0) : it->second;
}

double canfield_mckay_log_prob(int n, int d) {
  check_degree(n, d);
  const double v = 2.0 * std::numbers::pi * d * static_cast<double>(n - d);
  return 0.5 * std::log(v) - n * std::log(v / n);
}

double exact_regular_log_prob(int n, int d) {
  const BigInt count = count_regular_matrices(n, d);
  const double p = static_cast<double>(d) / n;
  const double cells = static_cast<double>(n) * n;
  const double ones = static_cast<double>(n) * d;
  return std::log(count.convert_to<double>()) + ones * std::log(p) + (cells - ones) * std::log1p(-p);
}

void write_edge_list(std::ostream& out, const RegularDigraph& g) {
  out << g.n() << ' ' << g.d() << '\n';
  for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

RegularDigraph read_edge_list(std::istream& in) {
  int n = 0;
  int d = 0;
  if (!(in >> n >> d) || n < 1 || d < 0 || d > n) {
    throw std::invalid_argument("edge list: bad header");
  }
  BinaryMatrix adj(n, n);
  long long i = 0;
  long long j = 0;
  std::size_t count = 0;
  while (in >> i >> j) {
    if (i < 0 || j < 0 || i >= n || j >= n) throw std::invalid_argument("edge list: index out of range");
    if (adj(i, j)) throw std::invalid_argument("edge list: duplicate edge");
    adj.set(i, j, true);
    ++count;
  }
  if (!in.eof()) throw std::invalid_argument("edge list: malformed line");
  if (count != static_cast<std::size_t>(n) * d || !is_regular(adj, d)) {
    throw std::invalid_argument("edge list: not a " + std::to_string(d) + "-regular digraph");
  }
  return RegularDigraph::from_matrix(std::move(adj));
}

}  // namespace rrdlab
