#pragma once

// Linear network coding over a DAG with a wiretap outer code at the source.
// Each edge carries one field symbol per use.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "wtk/common.hpp"
#include "wtk/gf.hpp"
#include "wtk/rng.hpp"
#include "wtk/wiretap.hpp"

namespace wtk::netsim {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

struct NetworkSpec {
  std::string name;
  std::uint32_t vertices = 0;
  std::vector<Edge> edges;  // unit capacity, parallel edges allowed
  VertexId source = 0;
  std::vector<VertexId> receivers;
  std::uint32_t q = 2;
};

/// Acyclic, endpoints in range, every receiver reachable.
void validate(const NetworkSpec& net);
/// Vertices in a topological order (ties by id).
std::vector<VertexId> topological_order(const NetworkSpec& net);

NetworkSpec path_network(std::size_t length, std::uint32_t q = 2);
/// k vertex-disjoint two-hop paths from the source to one receiver.
NetworkSpec parallel_network(std::size_t k, std::uint32_t q = 2);
/// s=0 a=1 b=2 c=3 d=4 r1=5 r2=6 with edges s-a s-b a-c b-c c-d a-r1 b-r2 d-r1 d-r2.
NetworkSpec butterfly_network(std::uint32_t q = 2);
/// s -> a, s -> b, a -> r, b -> r, a -> b.
NetworkSpec diamond_network(std::uint32_t q = 2);
/// path | parallel | butterfly | diamond
NetworkSpec named_network(const std::string& name, std::uint32_t q = 2);

/// {name?, vertices, edges: [[u, v], ...], source, receivers, q} or {named: "...", q?}.
NetworkSpec network_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const NetworkSpec& net);

/// Max-flow with unit capacities.
std::size_t min_cut(const NetworkSpec& net, VertexId receiver);

struct NetworkCode {
  std::size_t n = 0;                 // source symbols
  std::vector<gf::Vector> local;     // per edge: n coefficients at the source, else one per incoming edge of the tail
  std::vector<gf::Vector> global;    // per edge: its symbol as a combination of the n source symbols
};

/// Computes the global vectors from local ones.
NetworkCode make_code(const NetworkSpec& net, std::size_t n, std::vector<gf::Vector> local);
/// Incoming edges of a vertex, by edge index.
std::vector<std::size_t> incoming_edges(const NetworkSpec& net, VertexId v);
/// Rows are the global vectors of the receiver's incoming edges.
gf::Matrix transfer_matrix(const NetworkSpec& net, const NetworkCode& code, VertexId receiver);

/// Uniform local coefficients, redrawn until every receiver has rank min(n, min-cut); at most 16 draws.
NetworkCode assign_random_code(const NetworkSpec& net, std::size_t n, Rng& rng);
/// The classic GF(2) assignment on the butterfly: c -> d carries the sum of both symbols.
NetworkCode butterfly_xor_code(const NetworkSpec& net);

/// Symbol on every edge, by edge index.
gf::Vector transmit(const NetworkSpec& net, const NetworkCode& code, std::span<const gf::Elem> source_symbols);
/// Recovers the source symbols from the receiver's incoming edges; SingularTransfer if the rank is short.
gf::Vector receiver_decode(const NetworkSpec& net, const NetworkCode& code, VertexId receiver,
                           std::span<const gf::Elem> incoming);

/// P's encoding injected at the source; the resulting protocol outputs every edge symbol
/// and decodes at `receiver`.
wiretap::WiretapProtocol network_protocol(const NetworkSpec& net, const NetworkCode& code,
                                          const wiretap::WiretapProtocol& p, VertexId receiver);

struct NetRunReport {
  wiretap::ResilienceReport resilience;  // subsets are edge sets
  std::vector<bool> receiver_decodes;     // per receiver, exhaustive over messages and coins
  bool all_decode = false;
};

/// Every edge set of size <= t.
NetRunReport wiretap_netcode_run(const NetworkSpec& net, const NetworkCode& code, const wiretap::WiretapProtocol& p,
                                 std::size_t t, const Rational& eps_target, const wiretap::VerifyOptions& opts = {});
/// The view on one chosen edge set.
wiretap::ViewStats wiretap_edges_view(const NetworkSpec& net, const NetworkCode& code,
                                      const wiretap::WiretapProtocol& p, const std::vector<std::size_t>& edges,
                                      std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace wtk::netsim
