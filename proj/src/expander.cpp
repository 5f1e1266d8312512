#include "wtk/expander.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace wtk::expander {

LabeledGraph::LabeledGraph(std::vector<std::vector<Vertex>> labels, std::string family)
    : n_(0), family_(std::move(family)), fwd_(std::move(labels)) {
  require(!fwd_.empty(), Errc::DomainError, "graph needs at least one label");
  n_ = static_cast<std::uint32_t>(fwd_[0].size());
  require(n_ > 0, Errc::DomainError, "graph needs at least one vertex");
  inv_.assign(fwd_.size(), std::vector<Vertex>(n_, 0));
  for (std::size_t t = 0; t < fwd_.size(); ++t) {
    require(fwd_[t].size() == n_, Errc::ShapeMismatch, "label maps must all cover [N]");
    std::vector<bool> hit(n_, false);
    for (Vertex u = 0; u < n_; ++u) {
      Vertex v = fwd_[t][u];
      require(v < n_ && !hit[v], Errc::DomainError, "label " + std::to_string(t) + " is not a bijection");
      hit[v] = true;
      inv_[t][v] = u;
    }
  }
  // undirected multigraph: every directed edge multiplicity matches its reverse
  std::map<std::pair<Vertex, Vertex>, long> balance;
  for (std::size_t t = 0; t < fwd_.size(); ++t)
    for (Vertex u = 0; u < n_; ++u) {
      Vertex v = fwd_[t][u];
      if (u == v) continue;
      auto key = std::minmax(u, v);
      balance[{key.first, key.second}] += (u < v) ? 1 : -1;
    }
  for (auto& [edge, b] : balance)
    require(b == 0, Errc::DomainError,
            "edge " + std::to_string(edge.first) + "-" + std::to_string(edge.second) + " has no matching reverse");
}

Vertex LabeledGraph::step(Vertex u, unsigned t) const {
  require(u < n_, Errc::OutOfRange, "vertex outside [N]");
  require(t < fwd_.size(), Errc::OutOfRange, "label outside [d]");
  return fwd_[t][u];
}

Vertex LabeledGraph::step_inverse(Vertex v, unsigned t) const {
  require(v < n_, Errc::OutOfRange, "vertex outside [N]");
  require(t < inv_.size(), Errc::OutOfRange, "label outside [d]");
  return inv_[t][v];
}

LabeledGraph cycle(std::uint32_t n) {
  require(n >= 1, Errc::DomainError, "cycle needs a vertex");
  std::vector<std::vector<Vertex>> l(2, std::vector<Vertex>(n));
  for (Vertex u = 0; u < n; ++u) {
    l[0][u] = (u + 1) % n;
    l[1][u] = (u + n - 1) % n;
  }
  return LabeledGraph(std::move(l), "cycle");
}

LabeledGraph complete_selfloop(std::uint32_t n) {
  require(n >= 1, Errc::DomainError, "graph needs a vertex");
  std::vector<std::vector<Vertex>> l(n, std::vector<Vertex>(n));
  for (Vertex t = 0; t < n; ++t)
    for (Vertex u = 0; u < n; ++u) l[t][u] = (u + t) % n;
  return LabeledGraph(std::move(l), "complete-selfloop");
}

LabeledGraph margulis(std::uint32_t m) {
  require(m >= 1 && std::uint64_t{m} * m <= (1u << 30), Errc::DomainError, "margulis size out of range");
  const std::uint32_t n = m * m;
  std::vector<std::vector<Vertex>> l(8, std::vector<Vertex>(n));
  auto md = [m](std::int64_t v) { return static_cast<std::uint32_t>(((v % m) + m) % m); };
  for (std::uint32_t x = 0; x < m; ++x)
    for (std::uint32_t y = 0; y < m; ++y) {
      const Vertex u = x * m + y;
      const std::int64_t X = x, Y = y;
      l[0][u] = md(X + 2 * Y) * m + y;
      l[1][u] = md(X - 2 * Y) * m + y;
      l[2][u] = md(X + 2 * Y + 1) * m + y;
      l[3][u] = md(X - (2 * Y + 1)) * m + y;
      l[4][u] = x * m + md(Y + 2 * X);
      l[5][u] = x * m + md(Y - 2 * X);
      l[6][u] = x * m + md(Y + 2 * X + 1);
      l[7][u] = x * m + md(Y - (2 * X + 1));
    }
  return LabeledGraph(std::move(l), "margulis");
}

LabeledGraph family_graph(const std::string& tag, std::uint32_t size) {
  if (tag == "cycle") return cycle(size);
  if (tag == "complete-selfloop") return complete_selfloop(size);
  if (tag == "margulis") return margulis(size);
  fail(Errc::UnsupportedFamily, "unknown graph family '" + tag + "'");
}

Vertex walk(const LabeledGraph& g, Vertex start, std::span<const Symbol> labels) {
  Vertex v = start;
  for (Symbol t : labels) v = g.step(v, t);
  return v;
}

Vertex walk_inverse(const LabeledGraph& g, Vertex end, std::span<const Symbol> labels) {
  Vertex v = end;
  for (std::size_t i = labels.size(); i-- > 0;) v = g.step_inverse(v, labels[i]);
  return v;
}

std::vector<double> propagate(const LabeledGraph& g, std::span<const double> p) {
  require(p.size() == g.vertices(), Errc::ShapeMismatch, "vector length differs from N");
  std::vector<double> out(p.size(), 0.0);
  const double w = 1.0 / g.degree();
  for (const auto& perm : g.labels())
    for (std::size_t u = 0; u < p.size(); ++u) out[perm[u]] += w * p[u];
  return out;
}

namespace {

void deflate(std::vector<double>& x) {
  double mean = std::accumulate(x.begin(), x.end(), 0.0) / double(x.size());
  for (auto& v : x) v -= mean;
}

double norm(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

SpectralReport second_eigenvalue(const LabeledGraph& g, double tol, std::size_t max_iter, std::uint64_t seed) {
  require(g.vertices() <= 100000, Errc::DomainError, "dense power iteration is limited to N <= 1e5");
  SpectralReport rep;
  const std::size_t n = g.vertices();
  if (n == 1) return rep;

  Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = double(rng() >> 11) / double(std::uint64_t{1} << 53) - 0.5;
  deflate(x);
  double nx = norm(x);
  require(nx > 0, Errc::NoConvergence, "degenerate start vector");
  for (auto& v : x) v /= nx;

  // The normalized adjacency is symmetric, so <x, A^2 x> = |Ax|^2 and pA = Ap.
  for (std::size_t it = 1; it <= max_iter; ++it) {
    std::vector<double> y = propagate(g, propagate(g, x));
    deflate(y);
    double mu = 0;
    for (std::size_t i = 0; i < n; ++i) mu += x[i] * y[i];
    double r2 = 0;
    for (std::size_t i = 0; i < n; ++i) r2 += (y[i] - mu * x[i]) * (y[i] - mu * x[i]);
    rep.iterations = it;
    rep.residual = std::sqrt(r2);
    rep.lambda = std::sqrt(std::max(0.0, mu));
    double ny = norm(y);
    if (ny <= 1e-300) {
      rep.lambda = 0;
      rep.residual = 0;
      return rep;
    }
    if (rep.residual <= tol) return rep;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
  }
  fail(Errc::NoConvergence, "power iteration did not reach tolerance after " + std::to_string(max_iter) +
                                " iterations (residual " + std::to_string(rep.residual) + ")");
}

nlohmann::ordered_json to_json(const LabeledGraph& g) {
  nlohmann::ordered_json j;
  j["N"] = g.vertices();
  j["d"] = g.degree();
  j["family"] = g.family();
  j["labels"] = g.labels();
  return j;
}

LabeledGraph graph_from_json(const nlohmann::json& j) {
  try {
    auto labels = j.at("labels").get<std::vector<std::vector<Vertex>>>();
    require(labels.size() == j.at("d").get<std::size_t>(), Errc::ShapeMismatch, "label count differs from d");
    for (const auto& l : labels)
      require(l.size() == j.at("N").get<std::size_t>(), Errc::ShapeMismatch, "label map size differs from N");
    return LabeledGraph(std::move(labels), j.value("family", std::string("custom")));
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, e.what());
  }
}

}  // namespace wtk::expander
