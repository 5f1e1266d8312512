#include "wtk/linext.hpp"

#include <variant>

namespace wtk::linext {

LinearSeededExtractor::LinearSeededExtractor(std::size_t n, std::size_t t, std::size_t m,
                                             std::vector<BitMatrix> matrices, std::string provenance)
    : n_(n), t_(t), m_(m), provenance_(std::move(provenance)), raw_(std::move(matrices)) {
  require(m <= n && n <= 64, Errc::DomainError, "needs m <= n <= 64");
  require(t <= 24, Errc::DomainError, "seed spaces beyond 2^24 are not materialized");
  require(raw_.size() == (std::size_t{1} << t), Errc::ShapeMismatch, "need one matrix per seed");
  const BitMatrix proj = BitMatrix::identity_block(m, n);
  eff_.reserve(raw_.size());
  fallback_.reserve(raw_.size());
  for (const auto& mz : raw_) {
    require(mz.rows == m && mz.cols == n, Errc::ShapeMismatch, "seed matrix must be m x n");
    bool full = gf2::rank(mz) == m;
    fallback_.push_back(!full);
    eff_.push_back(full ? mz : proj);
  }
}

const BitMatrix& LinearSeededExtractor::raw_matrix(std::uint64_t z) const {
  require(z < raw_.size(), Errc::OutOfRange, "seed outside the seed space");
  return raw_[z];
}

const BitMatrix& LinearSeededExtractor::effective_matrix(std::uint64_t z) const {
  require(z < eff_.size(), Errc::OutOfRange, "seed outside the seed space");
  return eff_[z];
}

bool LinearSeededExtractor::uses_fallback(std::uint64_t z) const {
  require(z < fallback_.size(), Errc::OutOfRange, "seed outside the seed space");
  return fallback_[z];
}

Rational LinearSeededExtractor::fallback_fraction() const {
  std::uint64_t c = 0;
  for (bool f : fallback_) c += f;
  return Rational(c, fallback_.size());
}

BitMatrix toeplitz_matrix(std::size_t n, std::size_t m, std::uint64_t diag) {
  BitMatrix mat(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) mat.set(i, j, (diag >> (i + n - 1 - j)) & 1);
  return mat;
}

LinearSeededExtractor toeplitz_family(std::size_t n, std::size_t m) {
  require(m >= 1 && m <= n, Errc::DomainError, "needs 1 <= m <= n");
  const std::size_t t = n + m - 1;
  require(t <= 24, Errc::DomainError, "toeplitz seed too long to materialize");
  std::vector<BitMatrix> mats;
  mats.reserve(std::size_t{1} << t);
  for (std::uint64_t z = 0; z < (std::uint64_t{1} << t); ++z) mats.push_back(toeplitz_matrix(n, m, z));
  return LinearSeededExtractor(n, t, m, std::move(mats), "toeplitz");
}

LinearSeededExtractor toeplitz_subfamily(std::size_t n, std::size_t m, std::size_t t, std::uint64_t master_seed) {
  require(m >= 1 && m <= n, Errc::DomainError, "needs 1 <= m <= n");
  Rng rng(master_seed);
  std::vector<BitMatrix> mats;
  for (std::uint64_t z = 0; z < (std::uint64_t{1} << t); ++z)
    mats.push_back(toeplitz_matrix(n, m, rng() & gf2::low_mask(n + m - 1)));
  return LinearSeededExtractor(n, t, m, std::move(mats), "toeplitz");
}

LinearSeededExtractor random_family(std::size_t n, std::size_t m, std::size_t t, std::uint64_t master_seed) {
  require(m <= n, Errc::DomainError, "needs m <= n");
  Rng rng(master_seed);
  std::vector<BitMatrix> mats;
  for (std::uint64_t z = 0; z < (std::uint64_t{1} << t); ++z) mats.push_back(BitMatrix::random(m, n, rng));
  return LinearSeededExtractor(n, t, m, std::move(mats), "random-family");
}

LinearSeededExtractor projection_family(std::size_t n, std::size_t m, std::size_t t) {
  std::vector<BitMatrix> mats(std::size_t{1} << t, BitMatrix::identity_block(m, n));
  return LinearSeededExtractor(n, t, m, std::move(mats), "custom");
}

BitVec lse_extract(const LinearSeededExtractor& e, BitVec x, std::uint64_t z) {
  require((x & ~gf2::low_mask(e.n())) == 0, Errc::ShapeMismatch, "input has bits beyond n");
  return gf2::mul(e.effective_matrix(z), x);
}

std::uint64_t lse_coin_count(const LinearSeededExtractor& e) { return std::uint64_t{1} << (e.t() + e.n() - e.m()); }

std::pair<std::uint64_t, BitVec> lse_invert_coin(const LinearSeededExtractor& e, BitVec y, std::uint64_t coin) {
  require((y & ~gf2::low_mask(e.m())) == 0, Errc::ShapeMismatch, "output has bits beyond m");
  require(coin < lse_coin_count(e), Errc::OutOfRange, "coin outside the coin space");
  const std::uint64_t z = coin & gf2::low_mask(e.t());
  auto sol = gf2::solve_affine(e.effective_matrix(z), y);
  // effective matrices are surjective, so a solution always exists
  require(sol.has_value() && sol->dimension() == e.n() - e.m(), Errc::DomainError, "effective matrix not surjective");
  return {z, sol->member(coin >> e.t())};
}

std::pair<std::uint64_t, BitVec> lse_invert(const LinearSeededExtractor& e, BitVec y, Rng& rng) {
  return lse_invert_coin(e, y, rng.below(lse_coin_count(e)));
}

Rational distance_of_counts(std::span<const std::uint64_t> counts, std::uint64_t total) {
  const std::uint64_t k = counts.size();
  BigInt sum = 0;
  for (auto c : counts) {
    BigInt diff = BigInt(c) * k - total;
    sum += diff < 0 ? BigInt(-diff) : diff;
  }
  return Rational(sum) / Rational(BigInt(total) * k * 2);
}

std::vector<Rational> seed_errors(const LinearSeededExtractor& e, std::span<const BitVec> points) {
  require(!points.empty(), Errc::DomainError, "empty source");
  std::vector<Rational> out;
  out.reserve(e.seeds());
  std::vector<std::uint64_t> counts(std::size_t{1} << e.m());
  for (std::uint64_t z = 0; z < e.seeds(); ++z) {
    std::fill(counts.begin(), counts.end(), 0);
    for (BitVec x : points) ++counts[gf2::mul(e.effective_matrix(z), x)];
    out.push_back(distance_of_counts(counts, points.size()));
  }
  return out;
}

Rational strong_error(const LinearSeededExtractor& e, std::span<const BitVec> points) {
  Rational sum = 0;
  for (const auto& r : seed_errors(e, points)) sum += r;
  return sum / e.seeds();
}

namespace {

Rational strong_error_weighted(const LinearSeededExtractor& e, const dists::ExactDist& a) {
  require(a.alphabet() == 2 && a.length() == e.n(), Errc::ShapeMismatch, "source must live on {0,1}^n");
  const std::size_t outs = std::size_t{1} << e.m();
  Rational total = 0;
  for (std::uint64_t z = 0; z < e.seeds(); ++z) {
    std::vector<Rational> mass(outs, 0);
    for (auto& [idx, p] : a.support()) mass[gf2::mul(e.effective_matrix(z), dists::index_to_bits(idx, e.n()))] += p;
    Rational d = 0;
    for (auto& v : mass) d += abs(v - Rational(1, outs));
    total += d / 2;
  }
  return total / e.seeds();
}

}  // namespace

Rational strongness_measure(const LinearSeededExtractor& e, const std::vector<dists::SourceDescriptor>& sources,
                            std::uint64_t cap) {
  Rational worst = 0;
  for (const auto& s : sources) {
    dists::validate(s);
    require(dists::length(s) == e.n() && dists::alphabet(s) == 2, Errc::ShapeMismatch,
            "source must live on {0,1}^n");
    Rational r;
    if (auto* sf = std::get_if<dists::SymbolFixingSource>(&s)) {
      require(ipow(2, sf->free.size()) * e.seeds() <= cap, Errc::EnumerationCapExceeded, "source too large");
      std::vector<BitVec> pts;
      for (auto idx : dists::support_indices(*sf)) pts.push_back(dists::index_to_bits(idx, e.n()));
      r = strong_error(e, pts);
    } else if (auto* af = std::get_if<dists::AffineSource>(&s)) {
      require(ipow(2, af->basis.size()) * e.seeds() <= cap, Errc::EnumerationCapExceeded, "source too large");
      auto pts = dists::support_points(*af);
      r = strong_error(e, pts);
    } else {
      const auto& g = std::get<dists::GeneralSource>(s);
      require(g.dist.support().size() * e.seeds() <= cap, Errc::EnumerationCapExceeded, "source too large");
      r = strong_error_weighted(e, g.dist);
    }
    worst = std::max(worst, r);
  }
  return worst;
}

}  // namespace wtk::linext
