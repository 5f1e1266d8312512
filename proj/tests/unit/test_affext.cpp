#include "doctest.h"

#include <bit>
#include <cstdio>
#include <filesystem>
#include <map>

#include "wtk/affext.hpp"
#include "wtk/gf.hpp"

using namespace wtk;
using namespace wtk::affext;

namespace {

// Bank bit j from the definition: <a, alpha^j b> in GF(2^h) with alpha = x.
BitVec oracle_bank(std::size_t n, std::size_t l, BitVec x) {
  const std::size_t h = n / 2;
  gf::Field f = gf::Field::binary(static_cast<unsigned>(h));
  const gf::Elem a = static_cast<gf::Elem>(x & gf2::low_mask(h));
  const gf::Elem b = static_cast<gf::Elem>((x >> h) & gf2::low_mask(h));
  BitVec out = 0;
  for (std::size_t j = 0; j < l; ++j) {
    gf::Elem c = f.mul(f.pow(h == 1 ? 1 : 2, j), b);
    out |= BitVec(std::popcount(a & c) & 1) << j;
  }
  return out;
}

// E(x, s xor A(x)|_t) assembled from the parts.
BitVec oracle_iaext(const InvertibleAffineExtractor& ia, BitVec input) {
  BitVec s = input & gf2::low_mask(ia.t);
  BitVec x = input >> ia.t;
  BitVec seed = s ^ (ia.aext.eval(x) & gf2::low_mask(ia.t));
  return gf2::mul(ia.inner.effective_matrix(seed), x);
}

Rational oracle_bias(const QuadraticForm& f, const dists::AffineSource& s) {
  long sum = 0;
  auto pts = dists::support_points(s);
  for (BitVec x : pts) sum += f.eval(x) ? -1 : 1;
  return Rational(std::abs(sum), long(pts.size()));
}

QuadraticForm random_form(std::size_t n, Rng& rng) {
  QuadraticForm q{n, std::vector<BitVec>(n, 0), 0};
  for (std::size_t i = 0; i < n; ++i) q.upper[i] = rng.below(std::uint64_t{1} << n) & ~gf2::low_mask(i + 1);
  q.linear = rng.below(std::uint64_t{1} << n);
  return q;
}

}  // namespace

TEST_SUITE("affext") {
  TEST_CASE("quadratic bank matches the field definition") {
    for (std::size_t n : {4u, 6u, 8u}) {
      auto a = AffineExtractor::quadratic_bank(n, n / 2);
      for (BitVec x = 0; x < (BitVec{1} << n); ++x) CHECK(a.eval(x) == oracle_bank(n, n / 2, x));
    }
    CHECK_THROWS_AS(AffineExtractor::quadratic_bank(6, 4), Error);
  }

  TEST_CASE("quadratic forms: evaluation and rank") {
    // Inner product of the two halves of GF(2)^6 has full rank.
    QuadraticForm ip{6, std::vector<BitVec>(6, 0), 0};
    for (std::size_t i = 0; i < 3; ++i) ip.upper[i] = BitVec{1} << (i + 3);
    CHECK(ip.rank() == 6);
    CHECK(ip.eval(0b001001) == 1);
    CHECK(ip.eval(0b011001) == 1);
    CHECK(ip.eval(0b011011) == 0);
    QuadraticForm lin{4, std::vector<BitVec>(4, 0), 0b0101};
    CHECK(lin.rank() == 0);
    CHECK(lin.eval(0b0001) == 1);
  }

  TEST_CASE("bias matches the character sum and obeys the rank bound") {
    Rng rng(71);
    for (int trial = 0; trial < 12; ++trial) {
      auto f = random_form(6, rng);
      const double r = double(f.rank());
      for (std::size_t k : {4u, 5u}) {
        double exponent = (r - 2.0 * (6 - double(k))) / 2.0;
        dists::for_each_affine(6, k, [&](const dists::AffineSource& s) {
          Rational b = bias(f, s);
          CHECK(b == oracle_bias(f, s));
          if (exponent > 0) CHECK(to_double(b) <= std::exp2(-exponent) + 1e-12);
        });
      }
    }
  }

  TEST_CASE("inner-product bank on 5-dimensional sources") {
    auto a = AffineExtractor::quadratic_bank(6, 1);
    Rational err = affine_error(a, 5);
    CHECK(err <= Rational(1, 8));
    // Independent: half the largest bias of the form over the same family.
    Rational worst = 0;
    dists::for_each_affine(6, 5, [&](const dists::AffineSource& s) {
      worst = std::max(worst, oracle_bias(a.forms()[0], s));
    });
    CHECK(err == worst / 2);
  }

  TEST_CASE("full-dimensional source through a surjective linear map") {
    std::vector<BitVec> table(64);
    for (BitVec x = 0; x < 64; ++x) table[x] = (x ^ (x >> 3)) & 3;
    CHECK(affine_error(table, 6, 6, 2) == 0);
  }

  TEST_CASE("lookup table certification and file round trip") {
    auto bank = AffineExtractor::quadratic_bank(6, 2);
    std::vector<BitVec> table(64);
    for (BitVec x = 0; x < 64; ++x) table[x] = bank.eval(x);
    auto lut = AffineExtractor::lookup_table(6, 2, table);
    lut.certify(5);
    REQUIRE(lut.certification());
    CHECK(lut.certification()->epsilon == affine_error(bank, 5));
    CHECK(affine_error(lut, 5) == lut.certification()->epsilon);

    auto path = (std::filesystem::temp_directory_path() / "wtk_lut_test.bin").string();
    save_lookup(lut, path);
    auto back = load_lookup(path);
    std::remove(path.c_str());
    CHECK(back.table() == lut.table());
    REQUIRE(back.certification());
    CHECK(back.certification()->k == 5);
    CHECK(back.certification()->epsilon == lut.certification()->epsilon);
    CHECK_THROWS_AS(AffineExtractor::lookup_table(21, 1, {}), Error);
  }

  TEST_CASE("iaext forward map") {
    auto ia = make_iaext(linext::toeplitz_subfamily(6, 2, 2, 1), AffineExtractor::quadratic_bank(6, 3));
    CHECK(ia.n() == 8);
    CHECK(ia.m() == 2);
    for (BitVec in = 0; in < 256; ++in) CHECK(iaext_extract(ia, in) == oracle_iaext(ia, in));
    // Shifting s by c shifts the inner seed by c.
    for (BitVec in = 0; in < 256; ++in)
      for (BitVec c = 0; c < 4; ++c) {
        BitVec x = in >> 2;
        BitVec seed = ((in & 3) ^ (ia.aext.eval(x) & 3)) ^ c;
        CHECK(iaext_extract(ia, in ^ c) == linext::lse_extract(ia.inner, x, seed));
      }
    auto degenerate = make_iaext(linext::projection_family(6, 2, 2), AffineExtractor::zero(6, 2));
    for (BitVec in = 0; in < 256; ++in) CHECK(iaext_extract(degenerate, in) == ((in >> 2) & 3));
    CHECK_THROWS_AS(make_iaext(linext::toeplitz_subfamily(6, 2, 3, 1), AffineExtractor::quadratic_bank(6, 2)),
                    Error);
  }

  TEST_CASE("iaext inverter: round trip and exact uniformity") {
    for (std::size_t np : {4u, 6u, 8u}) {
      auto ia = make_iaext(linext::toeplitz_subfamily(np, 2, 2, 1), AffineExtractor::quadratic_bank(np, 2));
      std::map<BitVec, int> hits;
      for (BitVec y = 0; y < 4; ++y)
        for (std::uint64_t c = 0; c < iaext_coin_count(ia); ++c) {
          BitVec in = iaext_invert_coin(ia, y, c);
          CHECK(iaext_extract(ia, in) == y);
          hits[in]++;
        }
      CHECK(hits.size() == (std::size_t{1} << ia.n()));
      for (auto& [k, v] : hits) CHECK(v == 1);
    }
  }

  TEST_CASE("degenerate inverter is lse_invert plus a uniform seed part") {
    auto inner = linext::projection_family(6, 2, 2);
    auto ia = make_iaext(inner, AffineExtractor::zero(6, 2));
    for (BitVec y = 0; y < 4; ++y)
      for (std::uint64_t c = 0; c < iaext_coin_count(ia); ++c) {
        auto [z, x] = linext::lse_invert_coin(inner, y, c);
        CHECK(iaext_invert_coin(ia, y, c) == (z | (x << 2)));
      }
  }

  TEST_CASE("composition check") {
    auto f = AffineExtractor::quadratic_bank(6, 1);
    auto e = linext::toeplitz_subfamily(6, 2, 1, 1);
    auto rep = shaltiel_check(f, e, 5);
    CHECK(rep.sources == dists::affine_family_size(6, 5));
    CHECK(rep.epsilon_f == affine_error(f, 5));
    CHECK(rep.bound == doctest::Approx(to_double(rep.epsilon_f) * 16));
    CHECK(rep.holds());
    CHECK(rep.closed);
  }

  TEST_CASE("conditioning on a linear constraint keeps sources affine") {
    auto e = linext::toeplitz_family(6, 1);
    dists::for_each_affine(6, 4, [&](const dists::AffineSource& s) {
      auto pts = dists::support_points(s);
      for (std::uint64_t z = 0; z < e.seeds(); z += 5) {
        std::map<BitVec, std::vector<BitVec>> groups;
        for (BitVec x : pts) groups[linext::lse_extract(e, x, z)].push_back(x);
        for (auto& [y, g] : groups) {
          CHECK(gf2::is_affine_subspace(g));
          CHECK(g.size() >= 8);
        }
      }
    });
  }
}
