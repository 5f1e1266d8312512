#pragma once

// Seedless affine extractors (desk-scale stand-ins), the invertible affine
// extractor built from one plus a linear seeded extractor, and the
// seed-from-source composition check.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "wtk/common.hpp"
#include "wtk/gf2.hpp"
#include "wtk/linext.hpp"
#include "wtk/rng.hpp"
#include "wtk/sources.hpp"

namespace wtk::affext {

using gf2::BitVec;

/// f(x) = sum_{i<j} c_ij x_i x_j + <linear, x> over GF(2). upper[i] holds c_ij for j > i.
struct QuadraticForm {
  std::size_t n = 0;
  std::vector<BitVec> upper;
  BitVec linear = 0;

  unsigned eval(BitVec x) const;
  /// Rank of the alternating matrix Q + Q^T (always even).
  std::size_t rank() const;
};

/// |E_{x in S} (-1)^{f(x)}| over the affine source S.
Rational bias(const QuadraticForm& f, const dists::AffineSource& s);

struct Certification {
  std::size_t k = 0;
  Rational epsilon;
};

class AffineExtractor {
 public:
  std::size_t n() const { return n_; }
  std::size_t l() const { return l_; }
  const std::string& provenance() const { return provenance_; }
  const std::vector<QuadraticForm>& forms() const { return forms_; }
  const std::optional<Certification>& certification() const { return cert_; }
  const std::vector<BitVec>& table() const { return table_; }

  BitVec eval(BitVec x) const;

  /// Output bit j is <a, alpha^j b> where x = (a, b), a = low h bits, b = next h bits,
  /// h = floor(n/2), products taken in GF(2^h). Needs 1 <= l <= h.
  static AffineExtractor quadratic_bank(std::size_t n, std::size_t l);
  static AffineExtractor from_forms(std::size_t n, std::vector<QuadraticForm> forms, std::string provenance);
  /// Truth table of size 2^n, n <= 20.
  static AffineExtractor lookup_table(std::size_t n, std::size_t l, std::vector<BitVec> table);
  /// The zero map, for degenerate compositions.
  static AffineExtractor zero(std::size_t n, std::size_t l);

  /// Computes affine_error at dimension k and attaches it.
  void certify(std::size_t k, std::uint64_t cap = kDefaultEnumerationCap);

  /// Keeps the first t output bits.
  AffineExtractor truncated(std::size_t t) const;

 private:
  std::size_t n_ = 0, l_ = 0;
  std::string provenance_;
  std::vector<QuadraticForm> forms_;
  std::vector<BitVec> table_;
  std::optional<Certification> cert_;
};

/// Exact max over every k-dimensional affine source in GF(2)^n of delta(f(X), U_l),
/// where f is given as a truth table with l output bits.
Rational affine_error(std::span<const BitVec> table, std::size_t n, std::size_t k, std::size_t l,
                      std::uint64_t cap = kDefaultEnumerationCap);
Rational affine_error(const AffineExtractor& a, std::size_t k, std::uint64_t cap = kDefaultEnumerationCap);

/// Binary truth-table file: one JSON header line {n, l, certification: {k, epsilon}},
/// then 2^n little-endian entries of ceil(l/8) bytes each.
void save_lookup(const AffineExtractor& a, const std::string& path);
AffineExtractor load_lookup(const std::string& path);

struct InvertibleAffineExtractor {
  std::size_t t = 0;       // seed-part length
  std::size_t nprime = 0;  // data-part length
  linext::LinearSeededExtractor inner;
  AffineExtractor aext;

  std::size_t n() const { return t + nprime; }
  std::size_t m() const { return inner.m(); }
};

/// Checks inner has input length n' and seed length t, and aext has at least t outputs.
InvertibleAffineExtractor make_iaext(linext::LinearSeededExtractor inner, AffineExtractor aext);

/// Input bits 0..t-1 are s, bits t..t+n'-1 are x. Output E(x, s xor A(x)|_t).
BitVec iaext_extract(const InvertibleAffineExtractor& ia, BitVec input);

/// Coins are the inner inverter's coins: seed in the low t bits, then coset coefficients.
std::uint64_t iaext_coin_count(const InvertibleAffineExtractor& ia);
BitVec iaext_invert_coin(const InvertibleAffineExtractor& ia, BitVec y, std::uint64_t coin);
BitVec iaext_invert(const InvertibleAffineExtractor& ia, BitVec y, Rng& rng);

/// Truth table of iaext_extract over all 2^n inputs.
std::vector<BitVec> iaext_table(const InvertibleAffineExtractor& ia);

struct ShaltielReport {
  Rational measured;        // max over sources of delta(E(X, F(X)), E(X, U_t))
  Rational epsilon_f;       // affine_error of F truncated to t bits
  double bound = 0;         // epsilon_f * 2^(t+3)
  bool vacuous = false;     // bound >= 1
  bool closed = true;       // every conditioned source is affine of dimension >= k - m
  std::uint64_t sources = 0;

  bool holds() const { return to_double(measured) <= bound; }
};

ShaltielReport shaltiel_check(const AffineExtractor& f, const linext::LinearSeededExtractor& e, std::size_t k,
                              std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace wtk::affext
