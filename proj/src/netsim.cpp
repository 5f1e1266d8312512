#include "wtk/netsim.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <queue>

namespace wtk::netsim {

void validate(const NetworkSpec& net) {
  require(net.vertices >= 2, Errc::DomainError, "network needs at least two vertices");
  require(net.source < net.vertices, Errc::OutOfRange, "source outside the vertex range");
  require(!net.receivers.empty(), Errc::DomainError, "network needs a receiver");
  require(gf::is_prime(net.q) || std::has_single_bit(net.q), Errc::DomainError, "q must be a prime or a power of two");
  for (const auto& [u, v] : net.edges) {
    require(u < net.vertices && v < net.vertices, Errc::OutOfRange, "edge endpoint outside the vertex range");
    require(u != v, Errc::DomainError, "self-loops are not allowed");
  }
  topological_order(net);
  std::vector<bool> seen(net.vertices, false);
  std::deque<VertexId> todo{net.source};
  seen[net.source] = true;
  while (!todo.empty()) {
    VertexId u = todo.front();
    todo.pop_front();
    for (const auto& [a, b] : net.edges)
      if (a == u && !seen[b]) {
        seen[b] = true;
        todo.push_back(b);
      }
  }
  for (VertexId r : net.receivers) {
    require(r < net.vertices, Errc::OutOfRange, "receiver outside the vertex range");
    require(seen[r], Errc::UnreachableReceiver, "receiver " + std::to_string(r) + " is unreachable from the source");
  }
}

std::vector<VertexId> topological_order(const NetworkSpec& net) {
  std::vector<std::size_t> indeg(net.vertices, 0);
  for (const auto& e : net.edges) ++indeg[e.second];
  std::priority_queue<VertexId, std::vector<VertexId>, std::greater<>> ready;
  for (VertexId v = 0; v < net.vertices; ++v)
    if (indeg[v] == 0) ready.push(v);
  std::vector<VertexId> order;
  while (!ready.empty()) {
    VertexId u = ready.top();
    ready.pop();
    order.push_back(u);
    for (const auto& [a, b] : net.edges)
      if (a == u && --indeg[b] == 0) ready.push(b);
  }
  require(order.size() == net.vertices, Errc::DomainError, "network graph has a cycle");
  return order;
}

NetworkSpec path_network(std::size_t length, std::uint32_t q) {
  require(length >= 1, Errc::DomainError, "path needs at least one edge");
  NetworkSpec n{"path", static_cast<std::uint32_t>(length + 1), {}, 0, {static_cast<VertexId>(length)}, q};
  for (VertexId v = 0; v < length; ++v) n.edges.emplace_back(v, v + 1);
  return n;
}

NetworkSpec parallel_network(std::size_t k, std::uint32_t q) {
  require(k >= 1, Errc::DomainError, "needs at least one path");
  const auto r = static_cast<VertexId>(k + 1);
  NetworkSpec n{"parallel", static_cast<std::uint32_t>(k + 2), {}, 0, {r}, q};
  for (VertexId i = 1; i <= k; ++i) n.edges.emplace_back(0, i);
  for (VertexId i = 1; i <= k; ++i) n.edges.emplace_back(i, r);
  return n;
}

NetworkSpec butterfly_network(std::uint32_t q) {
  return {"butterfly", 7, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}, {1, 5}, {2, 6}, {4, 5}, {4, 6}}, 0, {5, 6}, q};
}

NetworkSpec diamond_network(std::uint32_t q) {
  return {"diamond", 4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {1, 2}}, 0, {3}, q};
}

NetworkSpec named_network(const std::string& name, std::uint32_t q) {
  if (name == "path") return path_network(1, q);
  if (name == "parallel") return parallel_network(2, q);
  if (name == "butterfly") return butterfly_network(q);
  if (name == "diamond") return diamond_network(q);
  fail(Errc::UnsupportedFamily, "unknown topology '" + name + "'");
}

NetworkSpec network_from_json(const nlohmann::json& j) {
  NetworkSpec net;
  try {
    if (j.contains("named")) {
      net = named_network(j.at("named").get<std::string>(), j.value("q", 2u));
    } else {
      net.name = j.value("name", std::string("custom"));
      net.vertices = j.at("vertices").get<std::uint32_t>();
      for (const auto& e : j.at("edges")) net.edges.emplace_back(e.at(0).get<VertexId>(), e.at(1).get<VertexId>());
      net.source = j.at("source").get<VertexId>();
      net.receivers = j.at("receivers").get<std::vector<VertexId>>();
      net.q = j.value("q", 2u);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("topology: ") + e.what());
  }
  validate(net);
  return net;
}

nlohmann::ordered_json to_json(const NetworkSpec& net) {
  nlohmann::ordered_json j;
  j["name"] = net.name;
  j["vertices"] = net.vertices;
  auto edges = nlohmann::ordered_json::array();
  for (const auto& [u, v] : net.edges) edges.push_back(nlohmann::ordered_json::array({u, v}));
  j["edges"] = edges;
  j["source"] = net.source;
  j["receivers"] = net.receivers;
  j["q"] = net.q;
  return j;
}

std::size_t min_cut(const NetworkSpec& net, VertexId receiver) {
  validate(net);
  require(receiver < net.vertices && receiver != net.source, Errc::DomainError, "receiver must be a non-source vertex");
  std::vector<int> flow(net.edges.size(), 0);
  std::size_t value = 0;
  for (;;) {
    // BFS over residual arcs; pred holds (edge index, forward?)
    std::vector<std::pair<std::ptrdiff_t, bool>> pred(net.vertices, {-1, false});
    std::vector<bool> seen(net.vertices, false);
    std::deque<VertexId> todo{net.source};
    seen[net.source] = true;
    while (!todo.empty() && !seen[receiver]) {
      VertexId u = todo.front();
      todo.pop_front();
      for (std::size_t e = 0; e < net.edges.size(); ++e) {
        const auto [a, b] = net.edges[e];
        if (a == u && flow[e] == 0 && !seen[b]) {
          seen[b] = true;
          pred[b] = {static_cast<std::ptrdiff_t>(e), true};
          todo.push_back(b);
        } else if (b == u && flow[e] == 1 && !seen[a]) {
          seen[a] = true;
          pred[a] = {static_cast<std::ptrdiff_t>(e), false};
          todo.push_back(a);
        }
      }
    }
    if (!seen[receiver]) break;
    for (VertexId v = receiver; v != net.source;) {
      const auto [e, fwd] = pred[v];
      flow[static_cast<std::size_t>(e)] = fwd ? 1 : 0;
      v = fwd ? net.edges[static_cast<std::size_t>(e)].first : net.edges[static_cast<std::size_t>(e)].second;
    }
    ++value;
  }
  return value;
}

std::vector<std::size_t> incoming_edges(const NetworkSpec& net, VertexId v) {
  std::vector<std::size_t> in;
  for (std::size_t e = 0; e < net.edges.size(); ++e)
    if (net.edges[e].second == v) in.push_back(e);
  return in;
}

namespace {

// Edge indices ordered so every edge comes after the edges entering its tail.
std::vector<std::size_t> edge_order(const NetworkSpec& net) {
  std::vector<std::size_t> order;
  for (VertexId u : topological_order(net))
    for (std::size_t e = 0; e < net.edges.size(); ++e)
      if (net.edges[e].first == u) order.push_back(e);
  return order;
}

std::size_t local_width(const NetworkSpec& net, std::size_t n, std::size_t e) {
  const VertexId tail = net.edges[e].first;
  return tail == net.source ? n : incoming_edges(net, tail).size();
}

}  // namespace

NetworkCode make_code(const NetworkSpec& net, std::size_t n, std::vector<gf::Vector> local) {
  validate(net);
  require(n >= 1, Errc::DomainError, "needs at least one source symbol");
  require(local.size() == net.edges.size(), Errc::ShapeMismatch, "needs one local vector per edge");
  const gf::Field f = gf::Field::of_order(net.q);
  NetworkCode code{n, std::move(local), std::vector<gf::Vector>(net.edges.size())};
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    require(code.local[e].size() == local_width(net, n, e), Errc::ShapeMismatch,
            "local vector of edge " + std::to_string(e) + " has the wrong length");
    for (auto c : code.local[e]) require(f.contains(c), Errc::OutOfRange, "coefficient outside the field");
  }
  for (std::size_t e : edge_order(net)) {
    const VertexId tail = net.edges[e].first;
    if (tail == net.source) {
      code.global[e] = code.local[e];
      continue;
    }
    gf::Vector g(n, 0);
    const auto in = incoming_edges(net, tail);
    for (std::size_t j = 0; j < in.size(); ++j) g = gf::add(f, g, gf::scale(f, code.local[e][j], code.global[in[j]]));
    code.global[e] = std::move(g);
  }
  return code;
}

gf::Matrix transfer_matrix(const NetworkSpec& net, const NetworkCode& code, VertexId receiver) {
  const auto in = incoming_edges(net, receiver);
  gf::Matrix t(in.size(), code.n);
  for (std::size_t i = 0; i < in.size(); ++i)
    for (std::size_t j = 0; j < code.n; ++j) t.at(i, j) = code.global[in[i]][j];
  return t;
}

namespace {

bool ranks_full(const NetworkSpec& net, const NetworkCode& code) {
  const gf::Field f = gf::Field::of_order(net.q);
  for (VertexId r : net.receivers)
    if (gf::rank(f, transfer_matrix(net, code, r)) < std::min(code.n, min_cut(net, r))) return false;
  return true;
}

}  // namespace

NetworkCode assign_random_code(const NetworkSpec& net, std::size_t n, Rng& rng) {
  validate(net);
  constexpr int kRetries = 16;
  for (int attempt = 0; attempt < kRetries; ++attempt) {
    std::vector<gf::Vector> local(net.edges.size());
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
      local[e].resize(local_width(net, n, e));
      for (auto& c : local[e]) c = static_cast<gf::Elem>(rng.below(net.q));
    }
    NetworkCode code = make_code(net, n, std::move(local));
    if (ranks_full(net, code)) return code;
  }
  fail(Errc::RankDeficientAfterRetries,
       "no full-rank code after " + std::to_string(kRetries) + " draws over GF(" + std::to_string(net.q) + ")");
}

NetworkCode butterfly_xor_code(const NetworkSpec& net) {
  const NetworkSpec ref = butterfly_network(net.q);
  require(net.vertices == ref.vertices && net.edges == ref.edges && net.source == ref.source,
          Errc::DomainError, "the XOR code is defined on the butterfly topology");
  require(net.q % 2 == 0, Errc::DomainError, "the XOR code needs characteristic two");
  // s-a, s-b, a-c, b-c, c-d, a-r1, b-r2, d-r1, d-r2
  std::vector<gf::Vector> local{{1, 0}, {0, 1}, {1}, {1}, {1, 1}, {1}, {1}, {1}, {1}};
  return make_code(net, 2, std::move(local));
}

gf::Vector transmit(const NetworkSpec& net, const NetworkCode& code, std::span<const gf::Elem> source_symbols) {
  require(source_symbols.size() == code.n, Errc::ShapeMismatch, "needs n source symbols");
  const gf::Field f = gf::Field::of_order(net.q);
  for (auto s : source_symbols) require(f.contains(s), Errc::OutOfRange, "source symbol outside the field");
  gf::Vector sym(net.edges.size(), 0);
  for (std::size_t e : edge_order(net)) {
    const VertexId tail = net.edges[e].first;
    gf::Elem acc = 0;
    if (tail == net.source) {
      for (std::size_t i = 0; i < code.n; ++i) acc = f.add(acc, f.mul(code.local[e][i], source_symbols[i]));
    } else {
      const auto in = incoming_edges(net, tail);
      for (std::size_t j = 0; j < in.size(); ++j) acc = f.add(acc, f.mul(code.local[e][j], sym[in[j]]));
    }
    sym[e] = acc;
  }
  return sym;
}

gf::Vector receiver_decode(const NetworkSpec& net, const NetworkCode& code, VertexId receiver,
                           std::span<const gf::Elem> incoming) {
  const gf::Field f = gf::Field::of_order(net.q);
  const gf::Matrix t = transfer_matrix(net, code, receiver);
  require(incoming.size() == t.rows, Errc::ShapeMismatch, "needs one symbol per incoming edge");
  auto sol = gf::solve_affine(f, t, incoming);
  require(sol && sol->kernel.empty(), Errc::SingularTransfer,
          "transfer matrix of receiver " + std::to_string(receiver) + " does not determine the source symbols");
  return sol->particular;
}

wiretap::WiretapProtocol network_protocol(const NetworkSpec& net, const NetworkCode& code,
                                          const wiretap::WiretapProtocol& p, VertexId receiver) {
  require(p.q == net.q, Errc::DimensionMismatch, "protocol alphabet must match the network field");
  require(p.n == code.n, Errc::DimensionMismatch, "protocol block length must equal the number of source symbols");
  wiretap::WiretapProtocol out = p;
  out.name = p.name + "@" + net.name;
  out.n = net.edges.size();
  const auto in = incoming_edges(net, receiver);
  out.encoder = [net, code, p](std::span<const Symbol> x, std::uint64_t coin) {
    return transmit(net, code, wiretap::encode_with_coin(p, x, coin));
  };
  out.decoder = [net, code, p, in, receiver](std::span<const Symbol> y) {
    gf::Vector obs;
    for (auto e : in) obs.push_back(y[e]);
    return wiretap::decode(p, receiver_decode(net, code, receiver, obs));
  };
  return out;
}

NetRunReport wiretap_netcode_run(const NetworkSpec& net, const NetworkCode& code, const wiretap::WiretapProtocol& p,
                                 std::size_t t, const Rational& eps_target, const wiretap::VerifyOptions& opts) {
  validate(net);
  NetRunReport rep;
  rep.all_decode = true;
  for (VertexId r : net.receivers) {
    bool ok;
    try {
      ok = wiretap::decodable(network_protocol(net, code, p, r), opts.cap);
    } catch (const Error& e) {
      if (e.code() != Errc::SingularTransfer) throw;
      ok = false;
    }
    rep.receiver_decodes.push_back(ok);
    rep.all_decode = rep.all_decode && ok;
  }
  // the resilience verifier also checks decoding; the network decoder may refuse on a singular receiver
  wiretap::WiretapProtocol np = network_protocol(net, code, p, net.receivers.front());
  if (!rep.receiver_decodes.front()) np.decoder = [m = p.m](std::span<const Symbol>) { return Word(m, 0); };
  rep.resilience = wiretap::verify_resilience(np, t, eps_target, opts);
  rep.resilience.decodable = rep.all_decode;
  return rep;
}

wiretap::ViewStats wiretap_edges_view(const NetworkSpec& net, const NetworkCode& code,
                                      const wiretap::WiretapProtocol& p, const std::vector<std::size_t>& edges,
                                      std::uint64_t cap) {
  for (auto e : edges) require(e < net.edges.size(), Errc::OutOfRange, "wiretap edge outside the network");
  const wiretap::WiretapProtocol np = network_protocol(net, code, p, net.receivers.front());
  return wiretap::analyze_view(
      np,
      [&](std::span<const Symbol> y) {
        std::uint64_t w = 0;
        for (auto e : edges) w = w * net.q + y[e];
        return w;
      },
      cap);
}

}  // namespace wtk::netsim
