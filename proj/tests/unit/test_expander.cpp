#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wtk/expander.hpp"

using namespace wtk;
using namespace wtk::expander;

namespace {

// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  return ev;
}

// Second largest absolute eigenvalue of the normalized adjacency matrix.
double oracle_lambda(const LabeledGraph& g) {
  const std::size_t n = g.vertices();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0));
  for (const auto& perm : g.labels())
    for (std::size_t u = 0; u < n; ++u) a[u][perm[u]] += 1.0 / g.degree();
  auto ev = jacobi_eigenvalues(a);
  for (auto& v : ev) v = std::abs(v);
  std::sort(ev.rbegin(), ev.rend());
  return n > 1 ? ev[1] : 0.0;
}

double l2_from_uniform(std::span<const double> p) {
  double u = 1.0 / p.size(), s = 0;
  for (double x : p) s += (x - u) * (x - u);
  return std::sqrt(s);
}

}  // namespace

TEST_SUITE("expander") {
  TEST_CASE("cycle steps") {
    auto g = cycle(5);
    CHECK(g.vertices() == 5);
    CHECK(g.degree() == 2);
    CHECK(g.step(0, 0) == 1);
    CHECK(g.step(0, 1) == 4);
    for (Vertex u = 0; u < 5; ++u)
      for (unsigned t = 0; t < 2; ++t) {
        CHECK(g.step_inverse(g.step(u, t), t) == u);
        CHECK(g.step(g.step_inverse(u, t), t) == u);
      }
    CHECK_THROWS_AS(g.step(5, 0), Error);
    CHECK_THROWS_AS(g.step(0, 2), Error);
  }

  TEST_CASE("margulis label arithmetic") {
    auto g = margulis(3);
    // (1,1) under x += 2y: 1 + 2 = 3 = 0 mod 3, giving (0,1).
    CHECK(g.step(1 * 3 + 1, 0) == 0 * 3 + 1);
    // Independent evaluation of all eight maps.
    const std::uint32_t m = 4;
    auto h = margulis(m);
    CHECK(h.vertices() == 16);
    CHECK(h.degree() == 8);
    auto md = [&](long v) { return static_cast<std::uint32_t>(((v % long(m)) + long(m)) % long(m)); };
    for (std::uint32_t x = 0; x < m; ++x)
      for (std::uint32_t y = 0; y < m; ++y) {
        long X = x, Y = y;
        std::uint32_t want[8][2] = {{md(X + 2 * Y), y},     {md(X - 2 * Y), y},     {md(X + 2 * Y + 1), y},
                                    {md(X - 2 * Y - 1), y}, {x, md(Y + 2 * X)},     {x, md(Y - 2 * X)},
                                    {x, md(Y + 2 * X + 1)}, {x, md(Y - 2 * X - 1)}};
        for (unsigned t = 0; t < 8; ++t) CHECK(h.step(x * m + y, t) == want[t][0] * m + want[t][1]);
      }
  }

  TEST_CASE("every family label is a bijection") {
    for (auto g : {cycle(5), complete_selfloop(4), margulis(3), margulis(4), margulis(5)}) {
      for (const auto& perm : g.labels()) {
        std::vector<Vertex> sorted = perm;
        std::sort(sorted.begin(), sorted.end());
        for (Vertex v = 0; v < g.vertices(); ++v) CHECK(sorted[v] == v);
      }
      // Uniform stays uniform under any single label.
      std::vector<double> u(g.vertices(), 1.0 / g.vertices());
      CHECK(l2_from_uniform(propagate(g, u)) == doctest::Approx(0.0));
    }
  }

  TEST_CASE("constructor rejects inconsistent labelings") {
    CHECK_THROWS_AS(LabeledGraph({{0, 0, 1}}), Error);
    // A directed 3-cycle alone is a bijection but has no reverse edges.
    CHECK_THROWS_AS(LabeledGraph({{1, 2, 0}}), Error);
  }

  TEST_CASE("family lookup") {
    auto c = family_graph("cycle", 5);
    CHECK(c.vertices() == 5);
    CHECK(c.degree() == 2);
    auto k = family_graph("complete-selfloop", 4);
    CHECK(k.vertices() == 4);
    CHECK(k.degree() == 4);
    try {
      family_graph("ramanujan", 5);
      FAIL("expected UnsupportedFamily");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::UnsupportedFamily);
    }
  }

  TEST_CASE("walks") {
    auto g = cycle(5);
    CHECK(walk(g, 3, Word{}) == 3);
    CHECK(walk(g, 0, Word{0, 0, 1}) == 1);
    for (std::size_t len = 0; len <= 4; ++len)
      for (std::uint64_t wi = 0; wi < ipow(2, len); ++wi) {
        Word w = index_to_word(wi, 2, len);
        for (Vertex s = 0; s < 5; ++s) CHECK(walk_inverse(g, walk(g, s, w), w) == s);
      }
  }

  TEST_CASE("spectral estimates match a dense eigensolver") {
    CHECK(oracle_lambda(cycle(5)) == doctest::Approx(std::abs(std::cos(4 * std::numbers::pi / 5))));
    for (auto g : {cycle(5), cycle(4), complete_selfloop(4), complete_selfloop(8), margulis(3), margulis(4)}) {
      CAPTURE(g.family());
      CAPTURE(g.vertices());
      auto rep = second_eigenvalue(g, 1e-9);
      CHECK(rep.lambda == doctest::Approx(oracle_lambda(g)).epsilon(1e-6));
      CHECK(rep.lambda <= 1.0 + rep.residual);
    }
    CHECK(second_eigenvalue(complete_selfloop(6)).lambda == doctest::Approx(0.0));
    CHECK(second_eigenvalue(margulis(5)).lambda <= 0.89);
  }

  TEST_CASE("walk contraction on random distributions") {
    Rng rng(41);
    for (auto g : {cycle(5), margulis(3), margulis(4), complete_selfloop(8)}) {
      double lambda = second_eigenvalue(g, 1e-9).lambda;
      for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> p(g.vertices());
        double total = 0;
        for (auto& x : p) total += (x = double(rng.below(1000) + 1));
        for (auto& x : p) x /= total;
        CHECK(l2_from_uniform(propagate(g, p)) <= lambda * l2_from_uniform(p) + 1e-12);
      }
    }
  }

  TEST_CASE("json round trip") {
    auto g = margulis(3);
    auto back = graph_from_json(nlohmann::json::parse(to_json(g).dump()));
    CHECK(back.labels() == g.labels());
  }
}
