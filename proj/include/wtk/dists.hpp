#pragma once

// Exact probability laboratory over d-ary strings of length n.

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "wtk/common.hpp"

namespace wtk::dists {

/// Probability table over Σ^n, stored sparsely by big-endian string index.
/// Entries are strictly positive and sum to exactly one.
class ExactDist {
 public:
  ExactDist(unsigned d, std::size_t n, std::map<std::uint64_t, Rational> probs,
            std::uint64_t cap = kDefaultEnumerationCap);

  static ExactDist uniform(unsigned d, std::size_t n, std::uint64_t cap = kDefaultEnumerationCap);
  static ExactDist point_mass(unsigned d, std::span<const Symbol> w, std::uint64_t cap = kDefaultEnumerationCap);
  /// Uniform on the given indices (duplicates count with multiplicity).
  static ExactDist flat(unsigned d, std::size_t n, std::span<const std::uint64_t> support,
                        std::uint64_t cap = kDefaultEnumerationCap);
  /// Normalizes nonnegative integer weights.
  static ExactDist from_counts(unsigned d, std::size_t n, const std::map<std::uint64_t, std::uint64_t>& counts,
                               std::uint64_t cap = kDefaultEnumerationCap);

  unsigned alphabet() const { return d_; }
  std::size_t length() const { return n_; }
  std::uint64_t space_size() const { return space_; }
  std::uint64_t cap() const { return cap_; }
  const std::map<std::uint64_t, Rational>& support() const { return probs_; }

  Rational prob(std::uint64_t index) const;
  Rational prob(std::span<const Symbol> w) const;

  bool operator==(const ExactDist& o) const { return d_ == o.d_ && n_ == o.n_ && probs_ == o.probs_; }

 private:
  unsigned d_;
  std::size_t n_;
  std::uint64_t space_;
  std::uint64_t cap_;
  std::map<std::uint64_t, Rational> probs_;
};

Rational statistical_distance(const ExactDist& a, const ExactDist& b);
/// δ(a, uniform on Σ^n).
Rational distance_from_uniform(const ExactDist& a);
/// max |p(x) - 1/d^n| over all of Σ^n.
Rational linf_from_uniform(const ExactDist& a);

/// Entropies in d-ary symbols; pass `base` to measure in another unit (2 = bits).
double min_entropy(const ExactDist& a, double base = 0);
double shannon_entropy(const ExactDist& a, double base = 0);

/// a conditioned on a|_positions = w.
ExactDist condition(const ExactDist& a, std::span<const std::size_t> positions, std::span<const Symbol> w);

using WordMap = std::function<Word(std::span<const Symbol>)>;
/// Image of `a` under f : Σ^n -> Σ'^m.
ExactDist pushforward(const ExactDist& a, unsigned d_out, std::size_t m_out, const WordMap& f);

/// Both sides of E_Y[δ(X|Y, X)] = E_X[δ(Y|X, Y)] for a joint over the first
/// `split` coordinates (X) and the remaining ones (Y).
std::pair<Rational, Rational> duality_gap(const ExactDist& joint, std::size_t split);

struct MassBound {
  Rational value;  // Σ p_i · δ(A|S_i, U_{S_i})
  Rational gamma;  // δ(A, U)
  bool holds() const { return value <= 2 * gamma; }
};

/// Blocks are lists of string indices that must partition Σ^n.
MassBound conditioning_mass_bound(const ExactDist& a, const std::vector<std::vector<std::uint64_t>>& blocks);

/// H(a) >= lg|S| (1 - ε) for a on S = Σ^n with ε = δ(a, U), |S| > 4, ε <= 1/4.
bool shannon_floor_check(const ExactDist& a);

/// q-ary entropy function.
double hq(double x, unsigned q);

/// String rendering used in JSON: digits 0-9a-z when d <= 36, else dot-separated.
std::string word_to_string(std::span<const Symbol> w, unsigned d);
Word word_from_string(const std::string& s, unsigned d);

nlohmann::ordered_json to_json(const ExactDist& a);
ExactDist dist_from_json(const nlohmann::json& j, std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace wtk::dists
