#include "wtk/affext.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <map>

#include "wtk/gf.hpp"

namespace wtk::affext {

unsigned QuadraticForm::eval(BitVec x) const {
  unsigned acc = gf2::parity(linear & x);
  for (std::size_t i = 0; i < upper.size(); ++i)
    if ((x >> i) & 1) acc ^= gf2::parity(upper[i] & x);
  return acc;
}

std::size_t QuadraticForm::rank() const {
  std::vector<BitVec> rows(n, 0);
  for (std::size_t i = 0; i < upper.size(); ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if ((upper[i] >> j) & 1) {
        rows[i] |= BitVec{1} << j;
        rows[j] |= BitVec{1} << i;
      }
  return gf2::rank(std::span<const BitVec>(rows));
}

Rational bias(const QuadraticForm& f, const dists::AffineSource& s) {
  long long sum = 0;
  auto pts = dists::support_points(s);
  for (BitVec x : pts) sum += f.eval(x) ? -1 : 1;
  return Rational(std::llabs(sum), static_cast<long long>(pts.size()));
}

BitVec AffineExtractor::eval(BitVec x) const {
  require((x & ~gf2::low_mask(n_)) == 0, Errc::ShapeMismatch, "input has bits beyond n");
  if (!table_.empty()) return table_[x];
  BitVec y = 0;
  for (std::size_t j = 0; j < forms_.size(); ++j) y |= BitVec{forms_[j].eval(x)} << j;
  return y;
}

AffineExtractor AffineExtractor::from_forms(std::size_t n, std::vector<QuadraticForm> forms, std::string provenance) {
  require(n <= 64 && !forms.empty(), Errc::DomainError, "needs 1 <= l and n <= 64");
  for (const auto& f : forms) require(f.n == n, Errc::ShapeMismatch, "form length differs from n");
  AffineExtractor a;
  a.n_ = n;
  a.l_ = forms.size();
  a.provenance_ = std::move(provenance);
  a.forms_ = std::move(forms);
  if (n <= 20) {
    a.table_.resize(std::size_t{1} << n);
    for (BitVec x = 0; x < a.table_.size(); ++x) {
      BitVec y = 0;
      for (std::size_t j = 0; j < a.forms_.size(); ++j) y |= BitVec{a.forms_[j].eval(x)} << j;
      a.table_[x] = y;
    }
  }
  return a;
}

AffineExtractor AffineExtractor::quadratic_bank(std::size_t n, std::size_t l) {
  const std::size_t h = n / 2;
  require(h >= 1 && h <= 16, Errc::DomainError, "quadratic bank needs 2 <= n <= 33");
  require(l >= 1 && l <= h, Errc::DomainError, "quadratic bank needs 1 <= l <= n/2");
  const gf::Field f = gf::Field::binary(static_cast<unsigned>(h));
  const gf::Elem alpha = h == 1 ? 1 : 2;
  std::vector<QuadraticForm> forms;
  for (std::size_t j = 0; j < l; ++j) {
    QuadraticForm q{n, std::vector<BitVec>(n, 0), 0};
    const gf::Elem aj = f.pow(alpha, j);
    for (std::size_t k = 0; k < h; ++k) {
      const gf::Elem col = f.mul(aj, gf::Elem{1} << k);
      for (std::size_t i = 0; i < h; ++i)
        if ((col >> i) & 1) q.upper[i] |= BitVec{1} << (h + k);
    }
    forms.push_back(std::move(q));
  }
  return from_forms(n, std::move(forms), "quadratic-bank");
}

AffineExtractor AffineExtractor::lookup_table(std::size_t n, std::size_t l, std::vector<BitVec> table) {
  require(n <= 20, Errc::DomainError, "lookup tables are limited to n <= 20");
  require(l >= 1 && l <= 64, Errc::DomainError, "needs 1 <= l <= 64");
  require(table.size() == (std::size_t{1} << n), Errc::ShapeMismatch, "table must have 2^n entries");
  for (BitVec y : table) require((y & ~gf2::low_mask(l)) == 0, Errc::OutOfRange, "table entry beyond l bits");
  AffineExtractor a;
  a.n_ = n;
  a.l_ = l;
  a.provenance_ = "lookup-table";
  a.table_ = std::move(table);
  return a;
}

AffineExtractor AffineExtractor::zero(std::size_t n, std::size_t l) {
  return lookup_table(n, l, std::vector<BitVec>(std::size_t{1} << n, 0));
}

void AffineExtractor::certify(std::size_t k, std::uint64_t cap) { cert_ = Certification{k, affine_error(*this, k, cap)}; }

AffineExtractor AffineExtractor::truncated(std::size_t t) const {
  require(t >= 1 && t <= l_, Errc::DomainError, "truncation length must be in [1, l]");
  if (!forms_.empty()) {
    std::vector<QuadraticForm> kept(forms_.begin(), forms_.begin() + static_cast<std::ptrdiff_t>(t));
    AffineExtractor a = from_forms(n_, std::move(kept), provenance_);
    return a;
  }
  std::vector<BitVec> tab(table_.size());
  for (std::size_t x = 0; x < tab.size(); ++x) tab[x] = table_[x] & gf2::low_mask(t);
  return lookup_table(n_, t, std::move(tab));
}

Rational affine_error(std::span<const BitVec> table, std::size_t n, std::size_t k, std::size_t l,
                      std::uint64_t cap) {
  require(table.size() == (std::size_t{1} << n), Errc::ShapeMismatch, "table must have 2^n entries");
  require(l <= 20, Errc::DomainError, "output too long to histogram");
  require(dists::affine_family_size(n, k) <= cap, Errc::EnumerationCapExceeded,
          "affine family of GF(2)^" + std::to_string(n) + " at dimension " + std::to_string(k) + " exceeds the cap");
  const std::size_t outs = std::size_t{1} << l;
  const std::uint64_t pts = std::uint64_t{1} << k;
  // worst |c*outs - pts| sum, compared as integers across sources
  std::uint64_t worst = 0;
  std::vector<std::uint64_t> counts(outs);
  std::vector<BitVec> span(pts);
  dists::for_each_subspace(n, k, [&](const std::vector<BitVec>& basis, const std::vector<std::size_t>& non_piv) {
    for (std::uint64_t c = 0; c < pts; ++c) {
      BitVec v = 0;
      for (std::size_t i = 0; i < k; ++i)
        if ((c >> i) & 1) v ^= basis[i];
      span[c] = v;
    }
    for (std::uint64_t oc = 0; oc < (std::uint64_t{1} << non_piv.size()); ++oc) {
      BitVec off = 0;
      for (std::size_t i = 0; i < non_piv.size(); ++i)
        if ((oc >> i) & 1) off |= BitVec{1} << non_piv[i];
      std::fill(counts.begin(), counts.end(), 0);
      for (BitVec v : span) ++counts[table[v ^ off]];
      std::uint64_t sum = 0;
      for (auto cnt : counts) sum += cnt * outs > pts ? cnt * outs - pts : pts - cnt * outs;
      worst = std::max(worst, sum);
    }
  });
  return Rational(worst) / Rational(BigInt(pts) * outs * 2);
}

Rational affine_error(const AffineExtractor& a, std::size_t k, std::uint64_t cap) {
  require(!a.table().empty(), Errc::EnumerationCapExceeded, "extractor has no truth table (n > 20)");
  return affine_error(a.table(), a.n(), k, a.l(), cap);
}

void save_lookup(const AffineExtractor& a, const std::string& path) {
  require(!a.table().empty(), Errc::DomainError, "extractor has no truth table");
  nlohmann::ordered_json h;
  h["n"] = a.n();
  h["l"] = a.l();
  if (a.certification())
    h["certification"] = {{"k", a.certification()->k}, {"epsilon", to_string(a.certification()->epsilon)}};
  else
    h["certification"] = nullptr;
  std::ofstream out(path, std::ios::binary);
  require(bool(out), Errc::ParseError, "cannot open " + path);
  out << h.dump() << '\n';
  const std::size_t width = (a.l() + 7) / 8;
  for (BitVec y : a.table())
    for (std::size_t b = 0; b < width; ++b) out.put(static_cast<char>((y >> (8 * b)) & 0xff));
}

AffineExtractor load_lookup(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), Errc::ParseError, "cannot open " + path);
  std::string line;
  std::getline(in, line);
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("bad lookup header: ") + e.what());
  }
  const std::size_t n = h.at("n").get<std::size_t>(), l = h.at("l").get<std::size_t>();
  require(n <= 20, Errc::ParseError, "lookup header has n > 20");
  const std::size_t width = (l + 7) / 8;
  std::vector<BitVec> table(std::size_t{1} << n);
  for (auto& y : table) {
    y = 0;
    for (std::size_t b = 0; b < width; ++b) {
      int c = in.get();
      require(c != EOF, Errc::ParseError, "truncated lookup table");
      y |= BitVec(static_cast<unsigned char>(c)) << (8 * b);
    }
  }
  AffineExtractor a = AffineExtractor::lookup_table(n, l, std::move(table));
  if (!h.at("certification").is_null()) {
    Rational eps = parse_rational(h["certification"].at("epsilon").get<std::string>());
    std::size_t k = h["certification"].at("k").get<std::size_t>();
    a.certify(k);
    require(a.certification()->epsilon == eps, Errc::ParseError, "certificate does not match the table");
  }
  return a;
}

InvertibleAffineExtractor make_iaext(linext::LinearSeededExtractor inner, AffineExtractor aext) {
  require(aext.n() == inner.n(), Errc::ShapeMismatch, "affine extractor must read the data part");
  require(aext.l() >= inner.t(), Errc::ShapeMismatch, "affine extractor output shorter than the seed");
  require(inner.t() + inner.n() <= 64, Errc::DomainError, "total length beyond 64 bits");
  const std::size_t t = inner.t(), np = inner.n();
  return InvertibleAffineExtractor{t, np, std::move(inner), std::move(aext)};
}

BitVec iaext_extract(const InvertibleAffineExtractor& ia, BitVec input) {
  require((input & ~gf2::low_mask(ia.n())) == 0, Errc::ShapeMismatch, "input has bits beyond n");
  const BitVec s = input & gf2::low_mask(ia.t);
  const BitVec x = input >> ia.t;
  const std::uint64_t z = s ^ (ia.aext.eval(x) & gf2::low_mask(ia.t));
  return linext::lse_extract(ia.inner, x, z);
}

std::uint64_t iaext_coin_count(const InvertibleAffineExtractor& ia) { return linext::lse_coin_count(ia.inner); }

BitVec iaext_invert_coin(const InvertibleAffineExtractor& ia, BitVec y, std::uint64_t coin) {
  auto [z, x] = linext::lse_invert_coin(ia.inner, y, coin);
  const BitVec s = z ^ (ia.aext.eval(x) & gf2::low_mask(ia.t));
  return s | (x << ia.t);
}

BitVec iaext_invert(const InvertibleAffineExtractor& ia, BitVec y, Rng& rng) {
  return iaext_invert_coin(ia, y, rng.below(iaext_coin_count(ia)));
}

std::vector<BitVec> iaext_table(const InvertibleAffineExtractor& ia) {
  require(ia.n() <= 24, Errc::EnumerationCapExceeded, "iaext table beyond 2^24 entries");
  std::vector<BitVec> tab(std::size_t{1} << ia.n());
  for (BitVec v = 0; v < tab.size(); ++v) tab[v] = iaext_extract(ia, v);
  return tab;
}

ShaltielReport shaltiel_check(const AffineExtractor& f, const linext::LinearSeededExtractor& e, std::size_t k,
                              std::uint64_t cap) {
  require(f.n() == e.n(), Errc::ShapeMismatch, "F and E must read the same source");
  require(f.l() >= e.t(), Errc::ShapeMismatch, "F must output at least t bits");
  require(e.t() <= 6, Errc::DomainError, "composition check needs t <= 6");
  ShaltielReport rep;
  const AffineExtractor ft = f.truncated(e.t());
  rep.epsilon_f = affine_error(ft, k, cap);
  rep.bound = to_double(rep.epsilon_f) * std::exp2(double(e.t() + 3));
  rep.vacuous = rep.bound >= 1.0;

  const std::size_t outs = std::size_t{1} << e.m();
  const std::uint64_t seeds = e.seeds();
  std::uint64_t worst = 0, denom = 0;
  std::vector<std::uint64_t> a(outs), b(outs);
  dists::for_each_affine(e.n(), k, [&](const dists::AffineSource& s) {
    ++rep.sources;
    auto pts = dists::support_points(s);
    std::fill(a.begin(), a.end(), 0);
    std::fill(b.begin(), b.end(), 0);
    for (BitVec x : pts) {
      ++a[linext::lse_extract(e, x, ft.eval(x))];
      for (std::uint64_t z = 0; z < seeds; ++z) ++b[linext::lse_extract(e, x, z)];
    }
    std::uint64_t sum = 0;
    for (std::size_t y = 0; y < outs; ++y) {
      std::uint64_t lhs = a[y] * seeds;
      sum += lhs > b[y] ? lhs - b[y] : b[y] - lhs;
    }
    worst = std::max(worst, sum);
    denom = pts.size() * seeds * 2;

    for (std::uint64_t z = 0; z < seeds && rep.closed; ++z) {
      std::map<BitVec, std::vector<BitVec>> groups;
      for (BitVec x : pts) groups[linext::lse_extract(e, x, z)].push_back(x);
      for (auto& [y, g] : groups) {
        if (!gf2::is_affine_subspace(g) || std::bit_width(g.size()) - 1 + e.m() < k) {
          rep.closed = false;
          break;
        }
      }
    }
  });
  rep.measured = denom ? Rational(worst) / Rational(denom) : Rational(0);
  return rep;
}

}  // namespace wtk::affext
