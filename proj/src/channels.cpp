#include "wtk/channels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>

namespace wtk::channels {

namespace {

// Hamming(7,4) block: data d0..d3 then parities p0 = d0+d1+d3, p1 = d0+d2+d3, p2 = d1+d2+d3.
constexpr std::array<std::array<Symbol, 3>, 7> kHammingColumns{{
    {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

Word hamming_block_encode(std::span<const Symbol> d) {
  Word c(d.begin(), d.end());
  for (std::size_t r = 0; r < 3; ++r) {
    Symbol p = 0;
    for (std::size_t j = 0; j < 4; ++j) p ^= d[j] & kHammingColumns[j][r];
    c.push_back(p);
  }
  return c;
}

Word hamming_block_decode(std::span<const Symbol> recv) {
  std::array<Symbol, 3> syn{};
  for (std::size_t j = 0; j < 7; ++j)
    for (std::size_t r = 0; r < 3; ++r) syn[r] ^= recv[j] & kHammingColumns[j][r];
  Word c(recv.begin(), recv.end());
  if (syn != std::array<Symbol, 3>{0, 0, 0}) {
    for (std::size_t j = 0; j < 7; ++j)
      if (kHammingColumns[j] == syn) c[j] ^= 1;
  }
  return Word(c.begin(), c.begin() + 4);
}

gf::Elem poly_eval(const gf::Field& f, std::span<const gf::Elem> coeffs, gf::Elem a) {
  gf::Elem acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = f.add(f.mul(acc, a), coeffs[i]);
  return acc;
}

// Quotient of num by den (den monic of degree den.size()-1); nullopt if the remainder is nonzero.
std::optional<gf::Vector> poly_divide(const gf::Field& f, gf::Vector num, const gf::Vector& den) {
  const std::size_t dd = den.size() - 1;
  if (num.size() <= dd) {
    for (auto c : num)
      if (c != 0) return std::nullopt;
    return gf::Vector{};
  }
  gf::Vector quot(num.size() - dd, 0);
  for (std::size_t i = num.size(); i-- > dd;) {
    const gf::Elem lead = num[i];
    if (lead == 0) continue;
    quot[i - dd] = lead;
    for (std::size_t j = 0; j <= dd; ++j) num[i - dd + j] = f.sub(num[i - dd + j], f.mul(lead, den[j]));
  }
  for (std::size_t i = 0; i < dd; ++i)
    if (num[i] != 0) return std::nullopt;
  return quot;
}

Word rs_decode(const LinearCode& c, std::span<const Symbol> r) {
  const gf::Field& f = c.field;
  const std::size_t e = c.radius, K = c.K, N = c.N;
  gf::Matrix sys(N, K + 2 * e);
  gf::Vector rhs(N);
  for (std::size_t i = 0; i < N; ++i) {
    const gf::Elem a = c.points[i];
    gf::Elem pw = 1;
    for (std::size_t j = 0; j < K + e; ++j) {
      sys.at(i, j) = pw;
      if (j < e) sys.at(i, K + e + j) = f.neg(f.mul(r[i], pw));
      pw = f.mul(pw, a);
    }
    rhs[i] = f.mul(r[i], f.pow(a, e));
  }
  auto sol = gf::solve_affine(f, sys, rhs);
  if (!sol) fail(Errc::TooManyErrors, "received word is farther than the decoding radius from every codeword");
  gf::Vector Q(sol->particular.begin(), sol->particular.begin() + static_cast<std::ptrdiff_t>(K + e));
  gf::Vector E(sol->particular.begin() + static_cast<std::ptrdiff_t>(K + e), sol->particular.end());
  E.push_back(1);
  auto fpoly = poly_divide(f, Q, E);
  if (!fpoly) fail(Errc::TooManyErrors, "received word is farther than the decoding radius from every codeword");
  std::size_t errors = 0;
  Word msg(K);
  for (std::size_t i = 0; i < N; ++i) {
    const gf::Elem v = poly_eval(f, *fpoly, c.points[i]);
    if (v != r[i]) ++errors;
    if (i < K) msg[i] = v;
  }
  if (errors > e) fail(Errc::TooManyErrors, "received word is farther than the decoding radius from every codeword");
  return msg;
}

void check_word(const LinearCode& c, std::span<const Symbol> w, std::size_t len) {
  require(w.size() == len, Errc::ShapeMismatch, "word length does not match the code");
  for (Symbol s : w) require(c.field.contains(s), Errc::OutOfRange, "symbol outside the field");
}

Rational observation_distance(std::span<const std::uint64_t> counts, std::uint64_t tot, std::uint64_t msgs) {
  // delta(X | o) against uniform: sum_x |c/tot - 1/msgs| / 2
  BigInt acc = 0;
  for (auto cnt : counts) {
    const BigInt a = BigInt(cnt) * msgs, b = BigInt(tot);
    acc += a > b ? BigInt(a - b) : BigInt(b - a);
  }
  return Rational(acc) / Rational(BigInt(2) * tot * msgs);
}

}  // namespace

LinearCode hamming74(std::size_t blocks) {
  require(blocks >= 1, Errc::DomainError, "needs at least one block");
  LinearCode c;
  c.kind = CodeKind::Hamming;
  c.field = gf::Field::prime(2);
  c.blocks = blocks;
  c.N = 7 * blocks;
  c.K = 4 * blocks;
  c.d_min = 3;
  c.radius = 1;
  c.generator = gf::Matrix(c.K, c.N);
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t j = 0; j < 4; ++j) {
      Word d(4, 0);
      d[j] = 1;
      Word cw = hamming_block_encode(d);
      for (std::size_t i = 0; i < 7; ++i) c.generator.at(4 * b + j, 7 * b + i) = cw[i];
    }
  return c;
}

LinearCode reed_solomon(std::uint32_t q, std::size_t N, std::size_t K) {
  require(K >= 1 && K <= N, Errc::DomainError, "needs 1 <= K <= N");
  require(N <= q, Errc::DomainError, "Reed-Solomon needs N <= q");
  LinearCode c;
  c.kind = CodeKind::ReedSolomon;
  c.field = gf::Field::of_order(q);
  c.N = N;
  c.K = K;
  c.d_min = N - K + 1;
  c.radius = (N - K) / 2;
  const gf::Field& f = c.field;
  for (std::size_t i = 0; i < N; ++i) c.points.push_back(static_cast<gf::Elem>(i));
  c.generator = gf::Matrix(K, N);
  for (std::size_t j = 0; j < K; ++j)
    for (std::size_t i = 0; i < N; ++i) {
      gf::Elem v = 1;
      for (std::size_t l = 0; l < K; ++l) {
        if (l == j) continue;
        v = f.mul(v, f.div(f.sub(c.points[i], c.points[l]), f.sub(c.points[j], c.points[l])));
      }
      c.generator.at(j, i) = v;
    }
  return c;
}

LinearCode code_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const auto N = j.at("N").get<std::size_t>();
    const auto K = j.at("K").get<std::size_t>();
    if (kind == "hamming") {
      require(j.value("q", 2u) == 2, Errc::DomainError, "Hamming codes are binary");
      require(N % 7 == 0 && N > 0 && K * 7 == N * 4, Errc::DomainError, "Hamming needs (N, K) = (7b, 4b)");
      return hamming74(N / 7);
    }
    if (kind == "reed-solomon") return reed_solomon(j.at("q").get<std::uint32_t>(), N, K);
    fail(Errc::UnsupportedFamily, "unknown code kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("code description: ") + e.what());
  }
}

Word code_encode(const LinearCode& c, std::span<const Symbol> msg) {
  check_word(c, msg, c.K);
  Word out(c.N, 0);
  for (std::size_t j = 0; j < c.K; ++j) {
    if (msg[j] == 0) continue;
    for (std::size_t i = 0; i < c.N; ++i) out[i] = c.field.add(out[i], c.field.mul(msg[j], c.generator.at(j, i)));
  }
  return out;
}

Word code_decode(const LinearCode& c, std::span<const Symbol> received) {
  check_word(c, received, c.N);
  if (c.kind == CodeKind::ReedSolomon) return rs_decode(c, received);
  Word msg;
  for (std::size_t b = 0; b < c.blocks; ++b) {
    Word d = hamming_block_decode(received.subspan(7 * b, 7));
    msg.insert(msg.end(), d.begin(), d.end());
  }
  return msg;
}

wiretap::WiretapProtocol compose(const wiretap::WiretapProtocol& p, const LinearCode& c) {
  require(p.q == c.field.order(), Errc::DimensionMismatch, "protocol alphabet must match the code field");
  require(p.n == c.K, Errc::DimensionMismatch, "protocol output length must equal the code dimension");
  wiretap::WiretapProtocol out = p;
  out.name = p.name + "+" + (c.kind == CodeKind::Hamming ? "hamming" : "reed-solomon");
  out.n = c.N;
  out.encoder = [p, c](std::span<const Symbol> x, std::uint64_t coin) {
    return code_encode(c, wiretap::encode_with_coin(p, x, coin));
  };
  out.decoder = [p, c](std::span<const Symbol> y) { return wiretap::decode(p, code_decode(c, y)); };
  return out;
}

Word compose_encode(const wiretap::WiretapProtocol& p, const LinearCode& c, std::span<const Symbol> x, Rng& rng) {
  return code_encode(c, wiretap::encode(p, x, rng));
}

Word compose_decode(const LinearCode& c, const wiretap::WiretapProtocol& p, std::span<const Symbol> y) {
  return wiretap::decode(p, code_decode(c, y));
}

LinearObservationReport linear_observation_report(const wiretap::WiretapProtocol& p, const LinearCode& c,
                                                  const gf::Matrix& L, std::uint64_t cap) {
  require(L.cols == c.N, Errc::DimensionMismatch, "observation matrix needs N columns");
  require(p.q == c.field.order() && p.n == c.K, Errc::DimensionMismatch, "protocol does not fit the code");
  for (auto v : L.data) require(c.field.contains(v), Errc::OutOfRange, "observation matrix entry outside the field");
  const std::uint64_t msgs = checked_pow(p.q, p.m, cap);
  require(p.coins <= cap / msgs, Errc::EnumerationCapExceeded,
          "messages x coins exceeds the enumeration cap of " + std::to_string(cap));

  LinearObservationReport rep;
  rep.rank = gf::rank(c.field, L);
  std::map<std::uint64_t, std::vector<std::uint64_t>> counts;
  std::map<std::uint64_t, std::map<gf2::BitVec, std::uint64_t>> inner;  // w -> protocol output -> multiplicity
  rep.affine_checked = p.q == 2;
  for (std::uint64_t xi = 0; xi < msgs; ++xi) {
    const Word x = index_to_word(xi, p.q, p.m);
    for (std::uint64_t coin = 0; coin < p.coins; ++coin) {
      const Word y = wiretap::encode_with_coin(p, x, coin);
      const Word cw = code_encode(c, y);
      const std::uint64_t w = word_to_index(gf::mul(c.field, L, cw), p.q);
      auto& cx = counts[w];
      if (cx.empty()) cx.assign(msgs, 0);
      ++cx[xi];
      if (rep.affine_checked) ++inner[w][gf2::pack(y)];
    }
  }
  const std::uint64_t total = msgs * p.coins;
  rep.max_distance = 0;
  for (const auto& [w, cx] : counts) {
    std::uint64_t tot = 0;
    for (auto v : cx) tot += v;
    wiretap::Observation o{w, Rational(tot, total), observation_distance(cx, tot, msgs)};
    rep.max_distance = std::max(rep.max_distance, o.distance);
    rep.observations.push_back(std::move(o));
  }
  if (rep.affine_checked) {
    rep.min_conditional_dim = p.n;
    for (const auto& [w, ys] : inner) {
      std::vector<gf2::BitVec> pts;
      const std::uint64_t mult = ys.begin()->second;
      bool flat = true;
      for (const auto& [y, cnt] : ys) {
        pts.push_back(y);
        flat = flat && cnt == mult;
      }
      const bool affine = flat && gf2::is_affine_subspace(pts);
      rep.conditional_affine = rep.conditional_affine && affine;
      std::size_t dim = 0;
      while ((std::size_t{1} << dim) < pts.size()) ++dim;
      rep.min_conditional_dim = std::min(rep.min_conditional_dim, dim);
    }
  }
  return rep;
}

std::uint64_t general_coin_count(const linext::LinearSeededExtractor& e) { return linext::lse_coin_count(e); }

GeneralEncoding general_encode_coin(const linext::LinearSeededExtractor& e, gf2::BitVec x, std::uint64_t coin) {
  auto [z, main] = linext::lse_invert_coin(e, x, coin);
  return {main, z};
}

GeneralEncoding general_encode(const linext::LinearSeededExtractor& e, gf2::BitVec x, Rng& rng) {
  return general_encode_coin(e, x, rng.below(general_coin_count(e)));
}

gf2::BitVec general_decode(const linext::LinearSeededExtractor& e, gf2::BitVec main, std::uint64_t side) {
  require(side < e.seeds(), Errc::OutOfRange, "side-channel seed outside the seed space");
  return linext::lse_extract(e, main, side);
}

std::vector<std::uint32_t> projection_table(std::size_t n, const std::vector<std::size_t>& bits) {
  for (auto b : bits) require(b < n, Errc::OutOfRange, "projected bit outside the main string");
  std::vector<std::uint32_t> tab(std::size_t{1} << n);
  for (std::uint64_t v = 0; v < tab.size(); ++v)
    for (std::size_t j = 0; j < bits.size(); ++j) tab[v] |= static_cast<std::uint32_t>((v >> bits[j]) & 1) << j;
  return tab;
}

std::vector<std::uint32_t> parity_table(std::size_t n, const std::vector<gf2::BitVec>& masks) {
  std::vector<std::uint32_t> tab(std::size_t{1} << n);
  for (std::uint64_t v = 0; v < tab.size(); ++v)
    for (std::size_t j = 0; j < masks.size(); ++j) tab[v] |= gf2::parity(masks[j] & v) << j;
  return tab;
}

std::vector<std::uint32_t> decoder_probe_table(const linext::LinearSeededExtractor& e, std::uint64_t guess,
                                               std::size_t bit) {
  require(bit < e.m(), Errc::OutOfRange, "probe bit outside the message");
  std::vector<std::uint32_t> tab(std::size_t{1} << e.n());
  for (std::uint64_t v = 0; v < tab.size(); ++v)
    tab[v] = static_cast<std::uint32_t>((linext::lse_extract(e, v, guess) >> bit) & 1);
  return tab;
}

std::vector<std::uint32_t> full_seed_table(std::size_t t) {
  std::vector<std::uint32_t> tab(std::size_t{1} << t);
  for (std::uint32_t z = 0; z < tab.size(); ++z) tab[z] = z;
  return tab;
}

namespace {

std::vector<std::uint32_t> parse_hex_table(const std::string& hex, std::size_t entries, std::size_t bits,
                                           const char* what) {
  const std::size_t width = std::max<std::size_t>(1, (bits + 3) / 4);
  require(hex.size() == entries * width, Errc::ParseError,
          std::string(what) + " needs " + std::to_string(entries * width) + " hex digits");
  std::vector<std::uint32_t> tab(entries);
  for (std::size_t i = 0; i < entries; ++i) {
    const std::string cell = hex.substr(i * width, width);
    std::uint32_t v = 0;
    for (char ch : cell) {
      int d;
      if (ch >= '0' && ch <= '9') d = ch - '0';
      else if (ch >= 'a' && ch <= 'f') d = ch - 'a' + 10;
      else if (ch >= 'A' && ch <= 'F') d = ch - 'A' + 10;
      else fail(Errc::ParseError, std::string(what) + " contains a non-hex digit");
      v = (v << 4) | static_cast<std::uint32_t>(d);
    }
    require(bits >= 32 || v < (std::uint32_t{1} << bits), Errc::OutOfRange,
            std::string(what) + " entry exceeds its bit width");
    tab[i] = v;
  }
  return tab;
}

std::string hex_table(const std::vector<std::uint32_t>& tab, std::size_t bits) {
  static const char* digits = "0123456789abcdef";
  const std::size_t width = std::max<std::size_t>(1, (bits + 3) / 4);
  std::string out;
  out.reserve(tab.size() * width);
  for (auto v : tab)
    for (std::size_t k = width; k-- > 0;) out.push_back(digits[(v >> (4 * k)) & 0xF]);
  return out;
}

}  // namespace

GeneralAdversary adversary_from_json(const nlohmann::json& j, std::size_t n, std::size_t seed_bits) {
  GeneralAdversary a;
  try {
    a.name = j.value("name", std::string("custom"));
    a.c1_bits = j.at("c1_bits").get<std::size_t>();
    a.c2_bits = j.value("c2_bits", std::size_t{0});
    if (j.contains("t"))
      require(j.at("t").get<std::size_t>() == a.c1_bits + a.c2_bits, Errc::DomainError,
              "t must equal c1_bits + c2_bits");
    require(a.c1_bits <= 31 && a.c2_bits <= 31, Errc::DomainError, "observation widths are limited to 31 bits");
    a.c1 = parse_hex_table(j.at("c1").get<std::string>(), std::size_t{1} << n, a.c1_bits, "c1");
    if (j.contains("c2"))
      a.c2 = parse_hex_table(j.at("c2").get<std::string>(), std::size_t{1} << seed_bits, a.c2_bits, "c2");
    else
      a.c2.assign(std::size_t{1} << seed_bits, 0);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("adversary description: ") + e.what());
  }
  return a;
}

nlohmann::ordered_json to_json(const GeneralAdversary& a) {
  nlohmann::ordered_json j;
  j["name"] = a.name;
  j["t"] = a.t();
  j["c1_bits"] = a.c1_bits;
  j["c2_bits"] = a.c2_bits;
  j["c1"] = hex_table(a.c1, a.c1_bits);
  j["c2"] = hex_table(a.c2, a.c2_bits);
  return j;
}

Rational seed_good_epsilon(const std::vector<Rational>& per_seed) {
  require(!per_seed.empty(), Errc::DomainError, "needs at least one seed");
  std::vector<Rational> vals(per_seed);
  vals.push_back(0);
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  const Rational total(per_seed.size());
  // Pr[delta_z > eps] is constant on [vals[i], vals[i+1]).
  for (std::size_t i = 0; i < vals.size(); ++i) {
    std::size_t above = 0;
    for (const auto& v : per_seed)
      if (v > vals[i]) ++above;
    const Rational tail = Rational(above) / total;
    const Rational cand = std::max(vals[i], tail);
    if (i + 1 == vals.size() || cand < vals[i + 1]) return cand;
  }
  return vals.back();
}

GeneralReport general_adversary_report(const linext::LinearSeededExtractor& e, const GeneralAdversary& a,
                                       double alpha, SideChannel mode, std::uint64_t cap) {
  const std::size_t n = e.n();
  require(a.c1.size() == (std::size_t{1} << n), Errc::ShapeMismatch, "C1 table must cover every main string");
  require(a.c2.size() == e.seeds(), Errc::ShapeMismatch, "C2 table must cover every seed");
  require(alpha > 0 && alpha < 1, Errc::DomainError, "alpha must lie in (0, 1)");
  const std::uint64_t msgs = std::uint64_t{1} << e.m();
  const std::uint64_t coins = general_coin_count(e);
  require(coins <= cap / msgs, Errc::EnumerationCapExceeded,
          "messages x coins exceeds the enumeration cap of " + std::to_string(cap));
  const std::size_t c2_bits = mode == SideChannel::Public ? a.c2_bits : 0;

  GeneralReport rep;
  rep.alpha = alpha;
  rep.delta = double(a.c1_bits) / double(n);
  rep.threshold = std::exp2(double(n) * (1 - rep.delta - alpha));
  rep.classifier_limit = std::exp2(-alpha * double(n));

  std::map<std::uint32_t, std::vector<gf2::BitVec>> preimages;
  for (gf2::BitVec v = 0; v < a.c1.size(); ++v) preimages[a.c1[v]].push_back(v);

  std::map<std::uint64_t, std::vector<std::uint64_t>> counts;
  std::map<std::uint32_t, std::uint64_t> c1_hits;
  for (std::uint64_t x = 0; x < msgs; ++x)
    for (std::uint64_t coin = 0; coin < coins; ++coin) {
      const GeneralEncoding g = general_encode_coin(e, x, coin);
      const std::uint32_t o1 = a.c1[g.main];
      const std::uint64_t o2 = c2_bits ? a.c2[g.side] : 0;
      ++c1_hits[o1];
      auto& cx = counts[std::uint64_t{o1} | (o2 << a.c1_bits)];
      if (cx.empty()) cx.assign(msgs, 0);
      ++cx[x];
    }
  const std::uint64_t total = msgs * coins;

  rep.classifier_mass = 0;
  rep.eps_seed = 0;
  for (const auto& [o1, pts] : preimages) {
    if (double(pts.size()) < rep.threshold) {
      rep.classifier_mass += Rational(c1_hits[o1], total);
      continue;
    }
    rep.eps_seed = std::max(rep.eps_seed, seed_good_epsilon(linext::seed_errors(e, pts)));
  }

  rep.leakage = 0;
  rep.max_distance = 0;
  for (const auto& [o, cx] : counts) {
    std::uint64_t tot = 0;
    for (auto v : cx) tot += v;
    wiretap::Observation ob{o, Rational(tot, total), observation_distance(cx, tot, msgs)};
    if (ob.distance > rep.eps_seed) rep.leakage += ob.prob;
    rep.max_distance = std::max(rep.max_distance, ob.distance);
    rep.observations.push_back(std::move(ob));
  }
  return rep;
}

}  // namespace wtk::channels
