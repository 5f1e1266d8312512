#include "wtk/sfext.hpp"

#include "wtk/sources.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace wtk::sfext {

using expander::Vertex;

ErrorBound sfext_error_bound(std::size_t n, std::size_t m, std::size_t k, unsigned d, double lambda) {
  require(k <= n, Errc::DomainError, "k exceeds n");
  require(m < n, Errc::DomainError, "needs m < n");
  require(d >= 2, Errc::DomainError, "needs d >= 2");
  require(lambda >= 0 && lambda <= 1, Errc::DomainError, "lambda must lie in [0, 1]");
  ErrorBound b;
  b.lambda_below_assumption = lambda < 1.0 / std::sqrt(double(d));
  double d_coeff, l_coeff;
  if (k <= n - m) {
    d_coeff = double(m);
    l_coeff = double(k);
  } else {
    d_coeff = double(n - k);
    l_coeff = double(n - m);
  }
  double lam_term;
  if (l_coeff == 0)
    lam_term = 0;
  else if (lambda == 0)
    lam_term = -std::numeric_limits<double>::infinity();
  else
    lam_term = l_coeff * std::log2(lambda * lambda);
  b.s = d_coeff * std::log2(double(d)) + lam_term;
  b.value = std::exp2(b.s / 2);
  return b;
}

SfextParams make_sfext(expander::LabeledGraph graph, unsigned d, std::size_t n, std::size_t k,
                       std::optional<double> lambda) {
  require(graph.degree() == d, Errc::DomainError, "graph degree must equal the alphabet size");
  std::size_t m = 0;
  std::uint64_t size = 1;
  while (size < graph.vertices()) {
    size *= d;
    ++m;
  }
  require(size == graph.vertices(), Errc::DomainError, "vertex count must be a power of d");
  require(m < n, Errc::DomainError, "needs m < n");
  require(k <= n, Errc::DomainError, "k exceeds n");
  SfextParams p{d, n, m, k, std::move(graph), 0, {}};
  p.lambda = lambda ? *lambda : expander::second_eigenvalue(p.graph).lambda;
  p.bound = sfext_error_bound(n, m, k, d, std::min(1.0, p.lambda));
  return p;
}

Word sfext_extract(const SfextParams& p, std::span<const Symbol> input) {
  require(input.size() == p.n, Errc::ShapeMismatch, "input length must be n");
  Vertex v = static_cast<Vertex>(word_to_index(input.first(p.m), p.d));
  Vertex end = expander::walk(p.graph, v, input.subspan(p.m));
  return index_to_word(end, p.d, p.m);
}

std::uint64_t sfext_coin_count(const SfextParams& p) { return ipow(p.d, p.n - p.m); }

Word sfext_invert_coin(const SfextParams& p, std::span<const Symbol> x, std::uint64_t coin) {
  require(x.size() == p.m, Errc::ShapeMismatch, "output length must be m");
  require(coin < sfext_coin_count(p), Errc::OutOfRange, "coin outside the walk space");
  Word w = index_to_word(coin, p.d, p.n - p.m);
  Vertex start = expander::walk_inverse(p.graph, static_cast<Vertex>(word_to_index(x, p.d)), w);
  Word out = index_to_word(start, p.d, p.m);
  out.insert(out.end(), w.begin(), w.end());
  return out;
}

Word sfext_invert(const SfextParams& p, std::span<const Symbol> x, Rng& rng) {
  return sfext_invert_coin(p, x, rng.below(sfext_coin_count(p)));
}

std::vector<std::uint64_t> sfext_table(const SfextParams& p) {
  const std::uint64_t space = checked_pow(p.d, p.n, kDefaultEnumerationCap);
  std::vector<std::uint64_t> tab(space);
  for (std::uint64_t i = 0; i < space; ++i) tab[i] = word_to_index(sfext_extract(p, index_to_word(i, p.d, p.n)), p.d);
  return tab;
}

Rational sfext_measured_error(const SfextParams& p, std::size_t k) {
  auto tab = sfext_table(p);
  return dists::symbol_fixing_error(p.d, p.n, k, tab, ipow(p.d, p.m));
}

std::uint64_t mod_map(std::uint64_t q, std::uint64_t p, std::uint64_t x) {
  require(p >= 1 && p <= q, Errc::DomainError, "Mod needs 1 <= p <= q");
  require(x >= 1 && x <= q, Errc::DomainError, "Mod input outside [q]");
  return 1 + (x % p);
}

std::uint64_t mod_preimage_count(std::uint64_t q, std::uint64_t p, std::uint64_t y) {
  require(p >= 1 && p <= q, Errc::DomainError, "Mod needs 1 <= p <= q");
  require(y >= 1 && y <= p, Errc::DomainError, "Mod output outside [p]");
  // x in {1..q} with x mod p = y - 1
  const std::uint64_t r = y - 1;
  const std::uint64_t first = r == 0 ? p : r;
  return first > q ? 0 : (q - first) / p + 1;
}

std::uint64_t mod_coin_count(std::uint64_t q, std::uint64_t p) {
  require(p >= 1 && p <= q, Errc::DomainError, "Mod needs 1 <= p <= q");
  return std::lcm(q / p, (q + p - 1) / p);
}

std::uint64_t mod_invert_coin(std::uint64_t q, std::uint64_t p, std::uint64_t y, std::uint64_t coin) {
  const std::uint64_t cnt = mod_preimage_count(q, p, y);
  const std::uint64_t r = y - 1;
  const std::uint64_t first = r == 0 ? p : r;
  return first + (coin % cnt) * p;
}

std::uint64_t mod_invert(std::uint64_t q, std::uint64_t p, std::uint64_t y, Rng& rng) {
  return mod_invert_coin(q, p, y, rng.below(mod_preimage_count(q, p, y)));
}

Rational mod_invert_linf(std::uint64_t q, std::uint64_t p) {
  require(p >= 1 && p <= q, Errc::DomainError, "Mod needs 1 <= p <= q");
  Rational u(1, q);
  Rational worst = 0;
  for (std::uint64_t y = 1; y <= p; ++y) {
    Rational pr(1, p * mod_preimage_count(q, p, y));
    worst = std::max(worst, Rational(abs(pr - u)));
  }
  return worst;
}

Rational mod_invert_linf_bound(std::uint64_t q, std::uint64_t p, const Rational& eps) {
  require(q > p, Errc::DomainError, "bound needs q > p");
  return Rational(p + eps * q) / Rational(q * (q - p));
}

RoundedSfextParams make_rounded(expander::LabeledGraph graph, unsigned d, std::size_t n, std::size_t m,
                                std::size_t m_prime) {
  require(graph.degree() == d, Errc::DomainError, "graph degree must equal the alphabet size");
  const std::uint64_t N = graph.vertices();
  require(ipow(d, m) < N && N <= ipow(d, m_prime), Errc::DomainError, "needs d^m < N <= d^m'");
  require(m_prime < n, Errc::DomainError, "needs m' < n");
  return {d, n, m, m_prime, std::move(graph)};
}

Word rounded_extract(const RoundedSfextParams& p, std::span<const Symbol> input) {
  require(input.size() == p.n, Errc::ShapeMismatch, "input length must be n");
  const std::uint64_t N = p.graph.vertices();
  const std::uint64_t u = word_to_index(input.first(p.m_prime), p.d);
  // vertices are 0-based; Mod acts on the 1-based values u+1 and v+1
  const Vertex start = static_cast<Vertex>(mod_map(ipow(p.d, p.m_prime), N, u + 1) - 1);
  const Vertex end = expander::walk(p.graph, start, input.subspan(p.m_prime));
  const std::uint64_t out = mod_map(N, ipow(p.d, p.m), std::uint64_t{end} + 1) - 1;
  return index_to_word(out, p.d, p.m);
}

std::uint64_t rounded_coin_count(const RoundedSfextParams& p) {
  const std::uint64_t N = p.graph.vertices();
  return mod_coin_count(N, ipow(p.d, p.m)) * ipow(p.d, p.n - p.m_prime) * mod_coin_count(ipow(p.d, p.m_prime), N);
}

Word rounded_invert_coin(const RoundedSfextParams& p, std::span<const Symbol> x, std::uint64_t coin) {
  require(x.size() == p.m, Errc::ShapeMismatch, "output length must be m");
  require(coin < rounded_coin_count(p), Errc::OutOfRange, "coin outside the coin space");
  const std::uint64_t N = p.graph.vertices();
  const std::uint64_t dm = ipow(p.d, p.m), dmp = ipow(p.d, p.m_prime), walks = ipow(p.d, p.n - p.m_prime);
  const std::uint64_t l1 = mod_coin_count(N, dm);
  const std::uint64_t c1 = coin % l1;
  const std::uint64_t wi = (coin / l1) % walks;
  const std::uint64_t c3 = coin / l1 / walks;

  const std::uint64_t x1 = mod_invert_coin(N, dm, word_to_index(x, p.d) + 1, c1);
  const Word w = index_to_word(wi, p.d, p.n - p.m_prime);
  const std::uint64_t x2 = std::uint64_t{expander::walk_inverse(p.graph, static_cast<Vertex>(x1 - 1), w)} + 1;
  const std::uint64_t x3 = mod_invert_coin(dmp, N, x2, c3);
  Word out = index_to_word(x3 - 1, p.d, p.m_prime);
  out.insert(out.end(), w.begin(), w.end());
  return out;
}

Word rounded_invert(const RoundedSfextParams& p, std::span<const Symbol> x, Rng& rng) {
  return rounded_invert_coin(p, x, rng.below(rounded_coin_count(p)));
}

RoundedLinf rounded_invert_linf(const RoundedSfextParams& p) {
  const std::uint64_t N = p.graph.vertices();
  const std::uint64_t dm = ipow(p.d, p.m), dmp = ipow(p.d, p.m_prime), space = ipow(p.d, p.n);
  const std::uint64_t coins = rounded_coin_count(p);
  std::vector<std::uint64_t> counts(space, 0);
  for (std::uint64_t xi = 0; xi < dm; ++xi) {
    Word x = index_to_word(xi, p.d, p.m);
    for (std::uint64_t c = 0; c < coins; ++c) ++counts[word_to_index(rounded_invert_coin(p, x, c), p.d)];
  }
  const std::uint64_t total = dm * coins;
  RoundedLinf r;
  // |c/total - 1/space| = |c*space - total| / (total*space)
  std::uint64_t worst = 0;
  for (auto c : counts) {
    std::uint64_t diff = c * space > total ? c * space - total : total - c * space;
    worst = std::max(worst, diff);
  }
  r.measured = Rational(worst) / Rational(BigInt(total) * space);
  r.stage1 = mod_invert_linf_bound(N, dm, 0);
  // the lemma takes input closeness relative to 1/p, so the stage-1 bound is scaled by N
  r.stage2 = dmp > N ? mod_invert_linf_bound(dmp, N, r.stage1 * N) : r.stage1;
  r.composed = r.stage2 / ipow(p.d, p.n - p.m_prime);
  return r;
}

WalkRate walk_rate(double delta, unsigned d, double lambda, double gamma) {
  require(delta >= 0 && delta < 1, Errc::DomainError, "needs 0 <= delta < 1");
  require(lambda > 0 && lambda < 1, Errc::DomainError, "needs 0 < lambda < 1");
  require(d >= 2, Errc::DomainError, "needs d >= 2");
  WalkRate w;
  w.alpha = -std::log(lambda * lambda) / std::log(double(d));
  w.rate = std::max(w.alpha * (1 - delta), 1 - delta / w.alpha) - gamma;
  w.k_fraction = 1 - delta;
  return w;
}

}  // namespace wtk::sfext
