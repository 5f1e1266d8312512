#pragma once

// Wiretap protocols built from invertible extractors, and an exact verifier
// that enumerates every message, coin and observed subset.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "wtk/affext.hpp"
#include "wtk/common.hpp"
#include "wtk/rng.hpp"
#include "wtk/sfext.hpp"

namespace wtk::wiretap {

struct Targets {
  std::size_t t = 0;
  Rational epsilon;
  Rational gamma;
};

/// Encoder coins are a uniform index in [coins]; for power-of-two coin spaces this is
/// exactly a uniform r-bit seed with r = log2(coins).
struct WiretapProtocol {
  std::string name;
  unsigned q = 2;
  std::size_t m = 0;
  std::size_t n = 0;
  std::uint64_t coins = 1;
  std::function<Word(std::span<const Symbol>, std::uint64_t)> encoder;
  std::function<Word(std::span<const Symbol>)> decoder;
  Targets declared;

  double seed_bits() const;
  double rate() const { return double(m) / double(n); }
};

Word encode_with_coin(const WiretapProtocol& p, std::span<const Symbol> x, std::uint64_t coin);
Word encode(const WiretapProtocol& p, std::span<const Symbol> x, Rng& rng);
Word decode(const WiretapProtocol& p, std::span<const Symbol> y);

/// True iff D(E(x, z)) = x for every message and coin.
bool decodable(const WiretapProtocol& p, std::uint64_t cap = kDefaultEnumerationCap);

/// Exact distance of the encoder output on uniform messages and coins from uniform on Sigma^n.
Rational inverter_distance(const WiretapProtocol& p, std::uint64_t cap = kDefaultEnumerationCap);

/// Extractor of min-entropy k with error eps paired with an inverter at distance g from uniform:
/// declared t = n - k, error eps + gamma, leakage gamma, where g = gamma^2 / 2.
WiretapProtocol from_invertible_extractor(std::string name, unsigned q, std::size_t m, std::size_t n,
                                          std::uint64_t coins,
                                          std::function<Word(std::span<const Symbol>, std::uint64_t)> inverter,
                                          std::function<Word(std::span<const Symbol>)> extractor, std::size_t k,
                                          const Rational& extractor_error, const Rational& inverter_error);

WiretapProtocol sfext_protocol(const sfext::SfextParams& p, const Rational& extractor_error);
WiretapProtocol rounded_protocol(const sfext::RoundedSfextParams& p, std::size_t k, const Rational& extractor_error,
                                 const Rational& inverter_error);
WiretapProtocol iaext_protocol(const affext::InvertibleAffineExtractor& ia, std::size_t k,
                               const Rational& extractor_error);
/// E(x, r) = (x xor r, r): the walk extractor on the two-vertex graph with labels {stay, flip}.
WiretapProtocol one_time_pad();
/// E(x) = x with a claimed resilience `t`; the maximally leaky baseline.
WiretapProtocol identity_protocol(unsigned q, std::size_t n, std::size_t claimed_t = 1);

struct Observation {
  std::uint64_t w = 0;  // big-endian index of the observed symbols
  Rational prob;
  Rational distance;    // delta(X | Y_S = w, U)
};

struct SubsetRecord {
  std::vector<std::size_t> subset;
  std::vector<Observation> observations;
  Rational bad_mass;       // Pr[Y_S in B_S] at the target epsilon
  Rational eps_at_gamma;   // smallest epsilon with bad mass <= target gamma
  Rational aont_side;      // E_X[delta(Y_S | X, Y_S)]
  Rational message_side;   // E_Y[delta(X | Y_S, X)]
  double entropy = 0;      // H(X | Y_S) in q-ary symbols
};

struct VerifyOptions {
  std::uint64_t cap = kDefaultEnumerationCap;
  unsigned jobs = 1;
  std::optional<Rational> gamma_target;  // defaults to the declared leakage
};

struct ResilienceReport {
  std::size_t t = 0;
  Rational eps_target;
  Rational gamma_target;
  std::vector<SubsetRecord> subsets;  // every |S| <= t, by size then colex
  Rational gamma_measured;            // max_S Pr[Y_S in B_S]
  Rational eps_measured;              // smallest epsilon meeting gamma_target on every S
  Rational max_distance;
  double equivocation = 0;            // min_S H(X | Y_S)
  bool zero_leakage = false;
  Rational aont_error;                // 2 max_S E_X[delta(Y_S | X, Y_S)]
  bool duality_exact = true;
  bool decodable = false;
};

/// Subsets of {0..n-1} of size k in colex order.
std::vector<std::vector<std::size_t>> colex_subsets(std::size_t n, std::size_t k);

/// Joint enumeration of (message, coin) under a linear or coordinate view.
/// `view` maps an encoding to the observed index; `views` is the number of possible observations.
struct ViewStats {
  std::vector<Observation> observations;
  Rational aont_side;
  Rational message_side;
  double entropy = 0;
};
ViewStats analyze_view(const WiretapProtocol& p, const std::function<std::uint64_t(std::span<const Symbol>)>& view,
                       std::uint64_t cap = kDefaultEnumerationCap);

ResilienceReport verify_resilience(const WiretapProtocol& p, std::size_t t, const Rational& eps_target,
                                   const VerifyOptions& opts = {});

/// Smallest epsilon whose bad mass is at most gamma.
Rational eps_for_gamma(const std::vector<Observation>& obs, const Rational& gamma);
/// Pr[distance > eps].
Rational bad_mass(const std::vector<Observation>& obs, const Rational& eps);

struct AontReport {
  Rational error;
  Rational bound;  // 2 (eps + gamma)
  bool holds = false;
  bool duality_exact = false;
};
AontReport aont_error(const WiretapProtocol& p, std::size_t t, const Rational& eps_target,
                      const VerifyOptions& opts = {});

struct EquivocationReport {
  double delta = 0;       // min over |S| <= t of H(X | Y_S), q-ary symbols
  double floor = 0;       // m (1 - eps - gamma)
  bool applicable = false;  // q^m > 4 and eps <= 1/4
  bool holds = false;
};
EquivocationReport equivocation(const WiretapProtocol& p, std::size_t t, const Rational& eps_target,
                                const VerifyOptions& opts = {});

nlohmann::ordered_json params_json(const WiretapProtocol& p);
nlohmann::ordered_json to_json(const WiretapProtocol& p, const ResilienceReport& r);

}  // namespace wtk::wiretap
