#include "wtk/common.hpp"

#include <limits>

namespace wtk {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::DomainError: return "DomainError";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::ZeroProbabilityEvent: return "ZeroProbabilityEvent";
    case Errc::NotAPartition: return "NotAPartition";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::UnsupportedFamily: return "UnsupportedFamily";
    case Errc::EnumerationCapExceeded: return "EnumerationCapExceeded";
    case Errc::TooManyErrors: return "TooManyErrors";
    case Errc::UnreachableReceiver: return "UnreachableReceiver";
    case Errc::RankDeficientAfterRetries: return "RankDeficientAfterRetries";
    case Errc::SingularTransfer: return "SingularTransfer";
    case Errc::BadHeader: return "BadHeader";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::uint64_t ipow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
      fail(Errc::DomainError, "integer power overflows 64 bits");
    r *= base;
  }
  return r;
}

std::uint64_t checked_pow(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base)
      fail(Errc::EnumerationCapExceeded,
           std::to_string(base) + "^" + std::to_string(exp) + " exceeds cap " + std::to_string(cap));
    r *= base;
  }
  if (r > cap) fail(Errc::EnumerationCapExceeded, "enumeration exceeds cap " + std::to_string(cap));
  return r;
}

std::uint64_t word_to_index(std::span<const Symbol> w, unsigned d) {
  std::uint64_t idx = 0;
  for (Symbol s : w) {
    if (s >= d) fail(Errc::OutOfRange, "symbol " + std::to_string(s) + " outside alphabet of size " + std::to_string(d));
    idx = idx * d + s;
  }
  return idx;
}

Word index_to_word(std::uint64_t index, unsigned d, std::size_t n) {
  Word w(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    w[i] = static_cast<Symbol>(index % d);
    index /= d;
  }
  if (index != 0) fail(Errc::OutOfRange, "index does not fit in the requested length");
  return w;
}

std::string to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) fail(Errc::ParseError, "zero denominator in '" + s + "'");
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const Error*>(&e)) throw;
    fail(Errc::ParseError, "not a rational: '" + s + "'");
  }
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace wtk
