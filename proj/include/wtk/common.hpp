#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace wtk {

/// Exact rational number used for every probability in the toolkit.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// A symbol of a q-ary alphabet. Alphabets never exceed 2^16 symbols.
using Symbol = std::uint32_t;
/// A string over a q-ary alphabet, position 0 first.
using Word = std::vector<Symbol>;

enum class Errc {
  DimensionMismatch,
  ShapeMismatch,
  DomainError,
  OutOfRange,
  ZeroProbabilityEvent,
  NotAPartition,
  PreconditionViolated,
  NoConvergence,
  UnsupportedFamily,
  EnumerationCapExceeded,
  TooManyErrors,
  UnreachableReceiver,
  RankDeficientAfterRetries,
  SingularTransfer,
  BadHeader,
  ParseError,
};

std::string_view errc_name(Errc code);

/// Every failure raised by the library carries one of the Errc kinds.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

/// Default bound on the number of entries an enumeration may touch.
inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

/// Returns base^exp, or fails with EnumerationCapExceeded if it exceeds `cap`.
std::uint64_t checked_pow(std::uint64_t base, std::size_t exp, std::uint64_t cap);

/// base^exp without a cap; throws DomainError on 64-bit overflow.
std::uint64_t ipow(std::uint64_t base, std::size_t exp);

/// Big-endian d-ary codec: index = w[0]*d^(n-1) + ... + w[n-1].
std::uint64_t word_to_index(std::span<const Symbol> w, unsigned d);
Word index_to_word(std::uint64_t index, unsigned d, std::size_t n);

/// "num/den" with den always present, e.g. "0/1".
std::string to_string(const Rational& r);
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

}  // namespace wtk
