#include "wtk/sources.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace wtk::dists {

namespace {

struct Validator {
  void operator()(const SymbolFixingSource& s) const {
    require(s.d >= 2, Errc::DomainError, "alphabet needs at least two symbols");
    require(s.fixed.size() == s.n, Errc::ShapeMismatch, "fixed word must have length n");
    require(std::is_sorted(s.free.begin(), s.free.end()) &&
                std::adjacent_find(s.free.begin(), s.free.end()) == s.free.end(),
            Errc::DomainError, "free positions must be sorted and distinct");
    require(s.free.empty() || s.free.back() < s.n, Errc::OutOfRange, "free position outside the string");
    for (Symbol c : s.fixed) require(c < s.d, Errc::OutOfRange, "fixed symbol outside the alphabet");
  }
  void operator()(const AffineSource& s) const {
    require(s.n <= 64, Errc::DomainError, "affine sources are packed into 64 bits");
    require((s.offset & ~gf2::low_mask(s.n)) == 0, Errc::OutOfRange, "offset has bits beyond n");
    for (auto b : s.basis) require((b & ~gf2::low_mask(s.n)) == 0, Errc::OutOfRange, "basis vector beyond n");
    require(gf2::rank(std::span<const gf2::BitVec>(s.basis)) == s.basis.size(), Errc::DomainError,
            "affine basis is linearly dependent");
  }
  void operator()(const GeneralSource& s) const {
    require(min_entropy(s.dist) >= s.k - 1e-12, Errc::DomainError, "distribution is below its declared floor");
  }
};

}  // namespace

void validate(const SourceDescriptor& s) { std::visit(Validator{}, s); }

double entropy_k(const SourceDescriptor& s) {
  if (auto* sf = std::get_if<SymbolFixingSource>(&s)) return double(sf->free.size());
  if (auto* af = std::get_if<AffineSource>(&s)) return double(af->basis.size());
  return std::get<GeneralSource>(s).k;
}

unsigned alphabet(const SourceDescriptor& s) {
  if (auto* sf = std::get_if<SymbolFixingSource>(&s)) return sf->d;
  if (std::holds_alternative<AffineSource>(s)) return 2;
  return std::get<GeneralSource>(s).dist.alphabet();
}

std::size_t length(const SourceDescriptor& s) {
  if (auto* sf = std::get_if<SymbolFixingSource>(&s)) return sf->n;
  if (auto* af = std::get_if<AffineSource>(&s)) return af->n;
  return std::get<GeneralSource>(s).dist.length();
}

std::vector<std::uint64_t> support_indices(const SymbolFixingSource& s) {
  Validator{}(s);
  const std::size_t k = s.free.size();
  const std::uint64_t count = ipow(s.d, k);
  std::vector<std::uint64_t> out;
  out.reserve(count);
  Word w = s.fixed;
  for (std::uint64_t c = 0; c < count; ++c) {
    std::uint64_t rest = c;
    for (std::size_t i = k; i-- > 0;) {
      w[s.free[i]] = static_cast<Symbol>(rest % s.d);
      rest /= s.d;
    }
    out.push_back(word_to_index(w, s.d));
  }
  return out;
}

std::vector<gf2::BitVec> support_points(const AffineSource& s) {
  Validator{}(s);
  const std::size_t k = s.basis.size();
  std::vector<gf2::BitVec> out;
  out.reserve(std::size_t{1} << k);
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << k); ++c) {
    gf2::BitVec v = s.offset;
    for (std::size_t i = 0; i < k; ++i)
      if ((c >> i) & 1) v ^= s.basis[i];
    out.push_back(v);
  }
  return out;
}

std::uint64_t bits_to_index(gf2::BitVec v, std::size_t n) {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < n; ++i) idx = (idx << 1) | ((v >> i) & 1);
  return idx;
}

gf2::BitVec index_to_bits(std::uint64_t index, std::size_t n) {
  gf2::BitVec v = 0;
  for (std::size_t i = 0; i < n; ++i) v |= ((index >> (n - 1 - i)) & 1) << i;
  return v;
}

ExactDist to_dist(const SourceDescriptor& s, std::uint64_t cap) {
  validate(s);
  if (auto* sf = std::get_if<SymbolFixingSource>(&s)) {
    checked_pow(sf->d, sf->n, cap);
    auto pts = support_indices(*sf);
    return ExactDist::flat(sf->d, sf->n, pts, cap);
  }
  if (auto* af = std::get_if<AffineSource>(&s)) {
    checked_pow(2, af->n, cap);
    std::vector<std::uint64_t> idx;
    for (auto p : support_points(*af)) idx.push_back(bits_to_index(p, af->n));
    return ExactDist::flat(2, af->n, idx, cap);
  }
  return std::get<GeneralSource>(s).dist;
}

void for_each_symbol_fixing(unsigned d, std::size_t n, std::size_t k,
                            const std::function<void(const SymbolFixingSource&)>& visit) {
  require(k <= n, Errc::DomainError, "k exceeds n");
  SymbolFixingSource s;
  s.d = d;
  s.n = n;
  s.fixed.assign(n, 0);
  // positions as a bitmask with popcount k, increasing numeric order
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
    s.free.clear();
    std::vector<std::size_t> fixed_pos;
    for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? s.free : fixed_pos).push_back(i);
    const std::uint64_t values = ipow(d, n - k);
    for (std::uint64_t v = 0; v < values; ++v) {
      std::uint64_t rest = v;
      for (std::size_t i = fixed_pos.size(); i-- > 0;) {
        s.fixed[fixed_pos[i]] = static_cast<Symbol>(rest % d);
        rest /= d;
      }
      for (auto p : s.free) s.fixed[p] = 0;
      visit(s);
    }
  }
}

void for_each_subspace(std::size_t n, std::size_t k,
                       const std::function<void(const std::vector<gf2::BitVec>&,
                                                const std::vector<std::size_t>&)>& visit) {
  require(k <= n && n <= 32, Errc::DomainError, "subspace enumeration needs k <= n <= 32");
  for (std::uint64_t pmask = 0; pmask < (std::uint64_t{1} << n); ++pmask) {
    if (static_cast<std::size_t>(std::popcount(pmask)) != k) continue;
    std::vector<std::size_t> piv, non_piv;
    for (std::size_t i = 0; i < n; ++i) ((pmask >> i) & 1 ? piv : non_piv).push_back(i);
    // free slots: (row r, non-pivot column c > piv[r])
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t r = 0; r < k; ++r)
      for (auto c : non_piv)
        if (c > piv[r]) slots.emplace_back(r, c);
    require(slots.size() < 63, Errc::EnumerationCapExceeded, "too many subspaces");
    std::vector<gf2::BitVec> basis(k);
    for (std::uint64_t fill = 0; fill < (std::uint64_t{1} << slots.size()); ++fill) {
      for (std::size_t r = 0; r < k; ++r) basis[r] = gf2::BitVec{1} << piv[r];
      for (std::size_t i = 0; i < slots.size(); ++i)
        if ((fill >> i) & 1) basis[slots[i].first] |= gf2::BitVec{1} << slots[i].second;
      visit(basis, non_piv);
    }
  }
}

void for_each_affine(std::size_t n, std::size_t k, const std::function<void(const AffineSource&)>& visit) {
  AffineSource s;
  s.n = n;
  for_each_subspace(n, k, [&](const std::vector<gf2::BitVec>& basis, const std::vector<std::size_t>& non_piv) {
    s.basis = basis;
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << non_piv.size()); ++c) {
      s.offset = 0;
      for (std::size_t i = 0; i < non_piv.size(); ++i)
        if ((c >> i) & 1) s.offset |= gf2::BitVec{1} << non_piv[i];
      visit(s);
    }
  });
}

Rational symbol_fixing_error(unsigned d, std::size_t n, std::size_t k, std::span<const std::uint64_t> table,
                             std::uint64_t out_size, std::uint64_t cap) {
  require(table.size() == checked_pow(d, n, cap), Errc::ShapeMismatch, "table must cover all d^n inputs");
  require(out_size >= 1 && out_size <= (1u << 24), Errc::DomainError, "output space out of range");
  const std::uint64_t pts = ipow(d, k);
  std::vector<std::uint64_t> counts(out_size);
  // compare sum |c*out - pts| across sources; the denominator is shared
  BigInt worst = 0;
  for_each_symbol_fixing(d, n, k, [&](const SymbolFixingSource& s) {
    std::fill(counts.begin(), counts.end(), 0);
    for (auto idx : support_indices(s)) ++counts[table[idx]];
    BigInt sum = 0;
    for (auto c : counts) {
      BigInt diff = BigInt(c) * out_size - pts;
      sum += diff < 0 ? BigInt(-diff) : diff;
    }
    if (sum > worst) worst = sum;
  });
  return Rational(worst) / Rational(BigInt(pts) * out_size * 2);
}

std::uint64_t affine_family_size(std::size_t n, std::size_t k) {
  require(k <= n, Errc::DomainError, "k exceeds n");
  // [n choose k]_2 = prod_{i<k} (2^(n-i) - 1) / (2^(i+1) - 1)
  BigInt num = 1, den = 1;
  for (std::size_t i = 0; i < k; ++i) {
    num *= (BigInt(1) << (n - i)) - 1;
    den *= (BigInt(1) << (i + 1)) - 1;
  }
  BigInt total = (num / den) << (n - k);
  require(total <= BigInt(std::numeric_limits<std::uint64_t>::max()), Errc::EnumerationCapExceeded,
          "family size overflows 64 bits");
  return total.convert_to<std::uint64_t>();
}

}  // namespace wtk::dists
