#pragma once

// Random-walk symbol-fixing extractor, its exact inverter, the modular rounding
// maps, and the rounded extractor for vertex counts that are not powers of d.

#include <cstdint>
#include <optional>
#include <vector>
#include <span>

#include "wtk/common.hpp"
#include "wtk/expander.hpp"
#include "wtk/rng.hpp"

namespace wtk::sfext {

struct ErrorBound {
  double value = 0;   // 2^(s/2)
  double s = 0;       // -inf when lambda = 0 and the lambda term is active
  bool lambda_below_assumption = false;  // lambda < 1/sqrt(d)
};

/// Two-case bound on the extractor error; lambda in [0, 1].
ErrorBound sfext_error_bound(std::size_t n, std::size_t m, std::size_t k, unsigned d, double lambda);

struct SfextParams {
  unsigned d = 2;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  expander::LabeledGraph graph;
  double lambda = 0;
  ErrorBound bound;
};

/// Validates N = d^m, degree d and m < n. Uses the measured second eigenvalue
/// unless `lambda` is given.
SfextParams make_sfext(expander::LabeledGraph graph, unsigned d, std::size_t n, std::size_t k,
                       std::optional<double> lambda = std::nullopt);

/// Input (v, w): v is the start vertex in m big-endian symbols, w the walk.
Word sfext_extract(const SfextParams& p, std::span<const Symbol> input);

/// Coins are walk strings indexed in [d^(n-m)].
std::uint64_t sfext_coin_count(const SfextParams& p);
Word sfext_invert_coin(const SfextParams& p, std::span<const Symbol> x, std::uint64_t coin);
Word sfext_invert(const SfextParams& p, std::span<const Symbol> x, Rng& rng);

/// Output index of sfext_extract for every input index in [d^n].
std::vector<std::uint64_t> sfext_table(const SfextParams& p);
/// Exact extractor error over every (n,k)_d symbol-fixing source.
Rational sfext_measured_error(const SfextParams& p, std::size_t k);

/// Mod_{q,p}(x) = 1 + (x mod p), x in [q] = {1..q}.
std::uint64_t mod_map(std::uint64_t q, std::uint64_t p, std::uint64_t x);
/// Number of preimages of y in [p] under Mod_{q,p}.
std::uint64_t mod_preimage_count(std::uint64_t q, std::uint64_t p, std::uint64_t y);
/// lcm of floor(q/p) and ceil(q/p): a coin space that maps uniformly onto every fiber.
std::uint64_t mod_coin_count(std::uint64_t q, std::uint64_t p);
/// The (coin mod count)-th preimage of y, in increasing order.
std::uint64_t mod_invert_coin(std::uint64_t q, std::uint64_t p, std::uint64_t y, std::uint64_t coin);
std::uint64_t mod_invert(std::uint64_t q, std::uint64_t p, std::uint64_t y, Rng& rng);

/// Exact l-infinity distance from uniform on [q] of mod_invert applied to uniform input.
Rational mod_invert_linf(std::uint64_t q, std::uint64_t p);
/// (1/q) (p + eps q) / (q - p) for input at l-infinity distance eps/p; needs q > p.
Rational mod_invert_linf_bound(std::uint64_t q, std::uint64_t p, const Rational& eps);

struct RoundedSfextParams {
  unsigned d = 2;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t m_prime = 0;
  expander::LabeledGraph graph;
};

/// Requires d^m < N <= d^m' and m' < n.
RoundedSfextParams make_rounded(expander::LabeledGraph graph, unsigned d, std::size_t n, std::size_t m,
                                std::size_t m_prime);

Word rounded_extract(const RoundedSfextParams& p, std::span<const Symbol> input);

/// Coin space: (first preimage choice) x (walk) x (second preimage choice).
std::uint64_t rounded_coin_count(const RoundedSfextParams& p);
Word rounded_invert_coin(const RoundedSfextParams& p, std::span<const Symbol> x, std::uint64_t coin);
Word rounded_invert(const RoundedSfextParams& p, std::span<const Symbol> x, Rng& rng);

struct RoundedLinf {
  Rational measured;     // exact l-infinity distance of the inverter output from uniform on [d]^n
  Rational stage1;       // bound on x1 over [N]
  Rational stage2;       // bound on x3 over [d^m']
  Rational composed;     // stage2 / d^(n-m'), the bound on the output
};

/// Exhaustive: uniform x and uniform coins.
RoundedLinf rounded_invert_linf(const RoundedSfextParams& p);

struct WalkRate {
  double alpha = 0;  // -log_d lambda^2
  double rate = 0;
  double k_fraction = 0;  // k / n = 1 - delta
};

/// max{alpha (1 - delta), 1 - delta / alpha} - gamma.
WalkRate walk_rate(double delta, unsigned d, double lambda, double gamma);

}  // namespace wtk::sfext
