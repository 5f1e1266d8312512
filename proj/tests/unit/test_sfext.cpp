#include "doctest.h"

#include <cmath>
#include <map>
#include <set>

#include "wtk/sfext.hpp"
#include "wtk/sources.hpp"

using namespace wtk;
using namespace wtk::sfext;

namespace {

// Walk extractor on the 4-cycle written out directly: start at the big-endian
// value of the first two bits, move +1 on a 0 label and -1 on a 1 label.
std::uint64_t cycle4_oracle(std::span<const Symbol> in) {
  int v = int(in[0]) * 2 + int(in[1]);
  for (std::size_t i = 2; i < in.size(); ++i) v = (v + (in[i] == 0 ? 1 : 3)) % 4;
  return std::uint64_t(v);
}

}  // namespace

TEST_SUITE("sfext") {
  TEST_CASE("extract on the 4-cycle") {
    auto p = make_sfext(expander::cycle(4), 2, 4, 2);
    CHECK(sfext_extract(p, Word{0, 0, 0, 0}) == Word{1, 0});
    for (std::uint64_t i = 0; i < 16; ++i) {
      Word in = index_to_word(i, 2, 4);
      CHECK(word_to_index(sfext_extract(p, in), 2) == cycle4_oracle(in));
    }
    CHECK_THROWS_AS(sfext_extract(p, Word{0, 0, 0}), Error);
  }

  TEST_CASE("identity walk returns the start vertex") {
    // Label 0 of complete-selfloop is the self-loop.
    auto p = make_sfext(expander::complete_selfloop(4), 4, 3, 1);
    for (Symbol v = 0; v < 4; ++v) CHECK(sfext_extract(p, Word{v, 0, 0}) == Word{v});
  }

  TEST_CASE("complete-selfloop output is exactly uniform once a walk symbol is free") {
    auto p = make_sfext(expander::complete_selfloop(4), 4, 2, 1);
    std::map<std::uint64_t, int> hist;
    for (std::uint64_t i = 0; i < 16; ++i) hist[word_to_index(sfext_extract(p, index_to_word(i, 4, 2)), 4)]++;
    CHECK(hist.size() == 4);
    for (auto& [y, c] : hist) CHECK(c == 4);
    auto big = make_sfext(expander::complete_selfloop(4), 4, 4, 1);
    for (std::size_t k = 1; k <= 4; ++k) CHECK(sfext_measured_error(big, k) == 0);
  }

  TEST_CASE("inverter round trip, every coin") {
    for (std::size_t n = 3; n <= 10; ++n) {
      auto p = make_sfext(expander::cycle(4), 2, n, n - 2);
      CHECK(sfext_coin_count(p) == ipow(2, n - 2));
      for (std::uint64_t x = 0; x < 4; ++x) {
        Word xw = index_to_word(x, 2, 2);
        for (std::uint64_t c = 0; c < sfext_coin_count(p); ++c)
          CHECK(sfext_extract(p, sfext_invert_coin(p, xw, c)) == xw);
      }
    }
    auto p = make_sfext(expander::cycle(4), 2, 6, 4);
    Rng rng(51);
    for (int i = 0; i < 100; ++i) {
      Word x = index_to_word(rng.below(4), 2, 2);
      CHECK(sfext_extract(p, sfext_invert(p, x, rng)) == x);
    }
  }

  TEST_CASE("inverter is a bijection from messages x coins onto inputs") {
    auto p = make_sfext(expander::cycle(4), 2, 6, 4);
    std::set<Word> hit;
    for (std::uint64_t x = 0; x < 4; ++x)
      for (std::uint64_t c = 0; c < sfext_coin_count(p); ++c) hit.insert(sfext_invert_coin(p, index_to_word(x, 2, 2), c));
    CHECK(hit.size() == 64);
    // For a fixed walk the start vertex is a bijective function of the output.
    for (std::uint64_t wi = 0; wi < 16; ++wi) {
      Word w = index_to_word(wi, 2, 4);
      std::set<expander::Vertex> starts;
      for (expander::Vertex x = 0; x < 4; ++x) starts.insert(expander::walk_inverse(p.graph, x, w));
      CHECK(starts.size() == 4);
    }
  }

  TEST_CASE("error bound formula") {
    auto b = sfext_error_bound(8, 2, 3, 2, 1 / std::sqrt(2.0));
    CHECK(b.s == doctest::Approx(-1.0));
    CHECK(b.value == doctest::Approx(std::pow(2.0, -0.5)));
    CHECK_FALSE(b.lambda_below_assumption);
    for (std::size_t n = 4; n <= 10; ++n) {
      auto full = sfext_error_bound(n, 2, n, 2, 1 / std::sqrt(2.0));
      CHECK(full.value == doctest::Approx(std::pow(2.0, -double(n - 2) / 2)));
    }
    auto zero = sfext_error_bound(8, 2, 3, 2, 0.0);
    CHECK(zero.value == 0.0);
    CHECK(zero.lambda_below_assumption);
    CHECK_THROWS_AS(sfext_error_bound(8, 2, 9, 2, 0.5), Error);
  }

  TEST_CASE("measured error is within the bound and monotone in k") {
    auto p = make_sfext(expander::cycle(4), 2, 8, 5);
    Rational prev = 2;
    for (std::size_t k = 0; k <= 8; ++k) {
      Rational e = sfext_measured_error(p, k);
      CHECK(e <= prev);
      prev = e;
      CHECK(to_double(e) <= sfext_error_bound(8, 2, k, 2, p.lambda).value + 1e-12);
    }
    // Independent check at k = 5 from the oracle table.
    std::vector<std::uint64_t> table(256);
    for (std::uint64_t i = 0; i < 256; ++i) table[i] = cycle4_oracle(index_to_word(i, 2, 8));
    CHECK(dists::symbol_fixing_error(2, 8, 5, table, 4) == sfext_measured_error(p, 5));
  }

  TEST_CASE("mod map and preimages") {
    for (std::uint64_t x = 1; x <= 5; ++x) CHECK(mod_map(5, 5, x) == 1 + x % 5);
    std::map<std::uint64_t, std::set<std::uint64_t>> fibers;
    for (std::uint64_t x = 1; x <= 7; ++x) fibers[mod_map(7, 3, x)].insert(x);
    CHECK(fibers[1] == std::set<std::uint64_t>{3, 6});
    CHECK(fibers[2] == std::set<std::uint64_t>{1, 4, 7});
    CHECK(fibers[3] == std::set<std::uint64_t>{2, 5});
    for (std::uint64_t y = 1; y <= 3; ++y) {
      CHECK(mod_preimage_count(7, 3, y) == fibers[y].size());
      std::set<std::uint64_t> got;
      for (std::uint64_t c = 0; c < mod_coin_count(7, 3); ++c) got.insert(mod_invert_coin(7, 3, y, c));
      CHECK(got == fibers[y]);
    }
    Rng rng(52);
    for (int i = 0; i < 50; ++i) CHECK(mod_map(7, 3, mod_invert(7, 3, 2, rng)) == 2);
    CHECK_THROWS_AS(mod_map(3, 7, 1), Error);
    CHECK_THROWS_AS(mod_map(7, 3, 0), Error);
  }

  TEST_CASE("mod inverter linf distance") {
    // Fibers of sizes 2,3,2: points get 1/6 or 1/9 against 1/7; worst gap is 2/63.
    CHECK(mod_invert_linf(7, 3) == Rational(2, 63));
    CHECK(mod_invert_linf_bound(7, 3, 0) == Rational(3, 28));
    for (std::uint64_t q = 3; q <= 24; ++q)
      for (std::uint64_t pp = 2; pp < q; ++pp) {
        // Oracle: mass of x is (1/p) / |fiber(x)|.
        Rational worst = 0;
        for (std::uint64_t x = 1; x <= q; ++x) {
          std::uint64_t y = 1 + x % pp, size = 0;
          for (std::uint64_t z = 1; z <= q; ++z) size += (1 + z % pp) == y;
          worst = std::max(worst, Rational(abs(Rational(1, pp * size) - Rational(1, q))));
        }
        CHECK(mod_invert_linf(q, pp) == worst);
        CHECK(worst <= mod_invert_linf_bound(q, pp, 0));
      }
  }

  TEST_CASE("rounded extractor round trip and linf chain") {
    auto p = make_rounded(expander::cycle(5), 2, 6, 2, 3);
    for (std::uint64_t x = 0; x < 4; ++x) {
      Word xw = index_to_word(x, 2, 2);
      for (std::uint64_t c = 0; c < rounded_coin_count(p); ++c)
        CHECK(rounded_extract(p, rounded_invert_coin(p, xw, c)) == xw);
    }
    auto l = rounded_invert_linf(p);
    CHECK(l.measured <= l.composed);
    CHECK(l.stage1 == mod_invert_linf_bound(5, 4, 0));
    CHECK_THROWS_AS(make_rounded(expander::cycle(4), 2, 6, 2, 3), Error);
  }

  TEST_CASE("walk rate") {
    auto r0 = walk_rate(0.0, 2, 0.809017, 0.01);
    CHECK(r0.rate == doctest::Approx(0.99));
    auto r = walk_rate(0.5, 2, 0.809017, 0.0);
    CHECK(r.alpha == doctest::Approx(-std::log2(0.809017 * 0.809017)));
    CHECK(r.alpha == doctest::Approx(0.6115).epsilon(1e-3));
    CHECK(r.rate == doctest::Approx(std::max(r.alpha * 0.5, 1 - 0.5 / r.alpha)));
    CHECK(r.k_fraction == doctest::Approx(0.5));
    // A Ramanujan-quality lambda for d = 64 gives alpha >= 2/3.
    double lam = 2 * std::sqrt(63.0) / 64;
    CHECK(walk_rate(0.1, 64, lam, 0).alpha >= 2.0 / 3.0);
    CHECK_THROWS_AS(walk_rate(1.0, 2, 0.5, 0), Error);
  }
}
