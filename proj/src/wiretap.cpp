#include "wtk/wiretap.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <map>
#include <thread>

namespace wtk::wiretap {

double WiretapProtocol::seed_bits() const { return std::log2(double(coins)); }

Word encode_with_coin(const WiretapProtocol& p, std::span<const Symbol> x, std::uint64_t coin) {
  require(x.size() == p.m, Errc::ShapeMismatch, "message length must be m");
  for (Symbol c : x) require(c < p.q, Errc::OutOfRange, "message symbol outside the alphabet");
  require(coin < p.coins, Errc::OutOfRange, "coin outside the coin space");
  Word y = p.encoder(x, coin);
  require(y.size() == p.n, Errc::ShapeMismatch, "encoder produced the wrong length");
  return y;
}

Word encode(const WiretapProtocol& p, std::span<const Symbol> x, Rng& rng) {
  return encode_with_coin(p, x, rng.below(p.coins));
}

Word decode(const WiretapProtocol& p, std::span<const Symbol> y) {
  require(y.size() == p.n, Errc::ShapeMismatch, "encoding length must be n");
  for (Symbol c : y) require(c < p.q, Errc::OutOfRange, "symbol outside the alphabet");
  return p.decoder(y);
}

namespace {

std::uint64_t joint_size(const WiretapProtocol& p, std::uint64_t cap) {
  const std::uint64_t msgs = checked_pow(p.q, p.m, cap);
  require(p.coins <= cap / msgs, Errc::EnumerationCapExceeded,
          "messages x coins exceeds the enumeration cap of " + std::to_string(cap));
  return msgs * p.coins;
}

// All encodings, row (x * coins + coin), flattened with stride n.
std::vector<Symbol> encode_all(const WiretapProtocol& p, std::uint64_t cap) {
  const std::uint64_t total = joint_size(p, cap);
  std::vector<Symbol> out;
  out.reserve(total * p.n);
  const std::uint64_t msgs = ipow(p.q, p.m);
  for (std::uint64_t xi = 0; xi < msgs; ++xi) {
    Word x = index_to_word(xi, p.q, p.m);
    for (std::uint64_t c = 0; c < p.coins; ++c) {
      Word y = encode_with_coin(p, x, c);
      out.insert(out.end(), y.begin(), y.end());
    }
  }
  return out;
}

Rational abs_diff(const BigInt& a, const BigInt& b) { return Rational(a > b ? BigInt(a - b) : BigInt(b - a)); }

// counts[w][x] = #coins with E(x, coin) viewed as w.
ViewStats stats_from_counts(const std::map<std::uint64_t, std::vector<std::uint64_t>>& counts, std::uint64_t msgs,
                            std::uint64_t coins, unsigned q) {
  ViewStats st;
  const BigInt T = BigInt(msgs) * coins;
  // message side: sum_w p_w * 1/2 sum_x |c/tot - 1/msgs|
  Rational msg_side = 0;
  // AONT side accumulators: per x, 1/2 sum_w |c/coins - tot/T|
  std::vector<Rational> per_x(msgs, 0);
  for (const auto& [w, cx] : counts) {
    std::uint64_t tot = 0;
    for (auto c : cx) tot += c;
    Observation o;
    o.w = w;
    o.prob = Rational(BigInt(tot)) / Rational(T);
    Rational dist_sum = 0;
    double h = 0;
    for (std::uint64_t x = 0; x < msgs; ++x) {
      dist_sum += abs_diff(BigInt(cx[x]) * msgs, BigInt(tot));
      if (cx[x]) {
        double pr = double(cx[x]) / double(tot);
        h -= pr * std::log(pr);
      }
      // |c/coins - tot/T| = |c*msgs - tot| / T
      per_x[x] += abs_diff(BigInt(cx[x]) * msgs, BigInt(tot)) / Rational(T);
    }
    o.distance = dist_sum / Rational(BigInt(tot) * msgs * 2);
    msg_side += o.prob * o.distance;
    st.entropy += to_double(o.prob) * h / std::log(double(q));
    st.observations.push_back(std::move(o));
  }
  // observations never seen contribute |0 - 0| to the message side; on the AONT
  // side an unseen w has tot = 0 and contributes nothing either.
  Rational aont = 0;
  for (auto& v : per_x) aont += v / 2;
  st.aont_side = aont / msgs;
  st.message_side = msg_side;
  st.entropy = std::max(0.0, st.entropy);
  return st;
}

std::uint64_t view_index(std::span<const Symbol> y, std::span<const std::size_t> subset, unsigned q) {
  std::uint64_t w = 0;
  for (auto i : subset) w = w * q + y[i];
  return w;
}

ViewStats subset_stats(const WiretapProtocol& p, const std::vector<Symbol>& enc, std::span<const std::size_t> subset) {
  const std::uint64_t msgs = ipow(p.q, p.m);
  std::map<std::uint64_t, std::vector<std::uint64_t>> counts;
  for (std::uint64_t row = 0; row < msgs * p.coins; ++row) {
    std::span<const Symbol> y(enc.data() + row * p.n, p.n);
    auto& cx = counts[view_index(y, subset, p.q)];
    if (cx.empty()) cx.assign(msgs, 0);
    ++cx[row / p.coins];
  }
  return stats_from_counts(counts, msgs, p.coins, p.q);
}

Rational upper_sqrt(const Rational& v) {
  // rational upper bound on sqrt(v) with denominator 2^32
  if (v == 0) return 0;
  const double s = std::sqrt(to_double(v));
  BigInt num(static_cast<long long>(std::ceil(s * 4294967296.0)) + 1);
  return Rational(num) / Rational(BigInt(1) << 32);
}

}  // namespace

bool decodable(const WiretapProtocol& p, std::uint64_t cap) {
  joint_size(p, cap);
  const std::uint64_t msgs = ipow(p.q, p.m);
  for (std::uint64_t xi = 0; xi < msgs; ++xi) {
    Word x = index_to_word(xi, p.q, p.m);
    for (std::uint64_t c = 0; c < p.coins; ++c)
      if (decode(p, encode_with_coin(p, x, c)) != x) return false;
  }
  return true;
}

Rational inverter_distance(const WiretapProtocol& p, std::uint64_t cap) {
  const std::uint64_t total = joint_size(p, cap);
  const std::uint64_t space = checked_pow(p.q, p.n, cap);
  std::map<std::uint64_t, std::uint64_t> counts;
  const std::uint64_t msgs = ipow(p.q, p.m);
  for (std::uint64_t xi = 0; xi < msgs; ++xi) {
    Word x = index_to_word(xi, p.q, p.m);
    for (std::uint64_t c = 0; c < p.coins; ++c) ++counts[word_to_index(encode_with_coin(p, x, c), p.q)];
  }
  BigInt sum = BigInt(space - counts.size()) * total;
  for (auto& [y, c] : counts) {
    BigInt d = BigInt(c) * space - total;
    sum += d < 0 ? BigInt(-d) : d;
  }
  return Rational(sum) / Rational(BigInt(total) * space * 2);
}

WiretapProtocol from_invertible_extractor(std::string name, unsigned q, std::size_t m, std::size_t n,
                                          std::uint64_t coins,
                                          std::function<Word(std::span<const Symbol>, std::uint64_t)> inverter,
                                          std::function<Word(std::span<const Symbol>)> extractor, std::size_t k,
                                          const Rational& extractor_error, const Rational& inverter_error) {
  require(k <= n, Errc::DomainError, "k exceeds n");
  WiretapProtocol p;
  p.name = std::move(name);
  p.q = q;
  p.m = m;
  p.n = n;
  p.coins = coins;
  p.encoder = std::move(inverter);
  p.decoder = std::move(extractor);
  const Rational gamma = upper_sqrt(2 * inverter_error);
  p.declared = Targets{n - k, extractor_error + gamma, gamma};
  return p;
}

WiretapProtocol sfext_protocol(const sfext::SfextParams& sp, const Rational& extractor_error) {
  auto inv = [sp](std::span<const Symbol> x, std::uint64_t c) { return sfext::sfext_invert_coin(sp, x, c); };
  auto ext = [sp](std::span<const Symbol> y) { return sfext::sfext_extract(sp, y); };
  return from_invertible_extractor("sfext", sp.d, sp.m, sp.n, sfext::sfext_coin_count(sp), inv, ext, sp.k,
                                   extractor_error, 0);
}

WiretapProtocol rounded_protocol(const sfext::RoundedSfextParams& rp, std::size_t k, const Rational& extractor_error,
                                 const Rational& inverter_error) {
  auto inv = [rp](std::span<const Symbol> x, std::uint64_t c) { return sfext::rounded_invert_coin(rp, x, c); };
  auto ext = [rp](std::span<const Symbol> y) { return sfext::rounded_extract(rp, y); };
  return from_invertible_extractor("rounded-sfext", rp.d, rp.m, rp.n, sfext::rounded_coin_count(rp), inv, ext, k,
                                   extractor_error, inverter_error);
}

WiretapProtocol iaext_protocol(const affext::InvertibleAffineExtractor& ia, std::size_t k,
                               const Rational& extractor_error) {
  const std::size_t n = ia.n(), m = ia.m();
  auto inv = [ia, n, m](std::span<const Symbol> x, std::uint64_t c) {
    return gf2::unpack(affext::iaext_invert_coin(ia, gf2::pack(x), c), n);
  };
  auto ext = [ia, m](std::span<const Symbol> y) { return gf2::unpack(affext::iaext_extract(ia, gf2::pack(y)), m); };
  return from_invertible_extractor("iaext", 2, m, n, affext::iaext_coin_count(ia), inv, ext, k, extractor_error, 0);
}

WiretapProtocol one_time_pad() {
  auto sp = sfext::make_sfext(expander::complete_selfloop(2), 2, 2, 1, 0.0);
  WiretapProtocol p = sfext_protocol(sp, 0);
  p.name = "one-time-pad";
  return p;
}

WiretapProtocol identity_protocol(unsigned q, std::size_t n, std::size_t claimed_t) {
  WiretapProtocol p;
  p.name = "identity";
  p.q = q;
  p.m = n;
  p.n = n;
  p.coins = 1;
  p.encoder = [](std::span<const Symbol> x, std::uint64_t) { return Word(x.begin(), x.end()); };
  p.decoder = [](std::span<const Symbol> y) { return Word(y.begin(), y.end()); };
  p.declared = Targets{claimed_t, 0, 0};
  return p;
}

std::vector<std::vector<std::size_t>> colex_subsets(std::size_t n, std::size_t k) {
  require(k <= n && n < 64, Errc::DomainError, "needs k <= n < 64");
  std::vector<std::vector<std::size_t>> out;
  // colex order on k-subsets = increasing order of the bitmask
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1) s.push_back(i);
    out.push_back(std::move(s));
  }
  return out;
}

ViewStats analyze_view(const WiretapProtocol& p, const std::function<std::uint64_t(std::span<const Symbol>)>& view,
                       std::uint64_t cap) {
  joint_size(p, cap);
  const std::uint64_t msgs = ipow(p.q, p.m);
  std::map<std::uint64_t, std::vector<std::uint64_t>> counts;
  for (std::uint64_t xi = 0; xi < msgs; ++xi) {
    Word x = index_to_word(xi, p.q, p.m);
    for (std::uint64_t c = 0; c < p.coins; ++c) {
      auto& cx = counts[view(encode_with_coin(p, x, c))];
      if (cx.empty()) cx.assign(msgs, 0);
      ++cx[xi];
    }
  }
  return stats_from_counts(counts, msgs, p.coins, p.q);
}

Rational bad_mass(const std::vector<Observation>& obs, const Rational& eps) {
  Rational m = 0;
  for (const auto& o : obs)
    if (o.distance > eps) m += o.prob;
  return m;
}

Rational eps_for_gamma(const std::vector<Observation>& obs, const Rational& gamma) {
  std::vector<Rational> cands{Rational(0)};
  for (const auto& o : obs) cands.push_back(o.distance);
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  for (const auto& c : cands)
    if (bad_mass(obs, c) <= gamma) return c;
  return cands.back();
}

ResilienceReport verify_resilience(const WiretapProtocol& p, std::size_t t, const Rational& eps_target,
                                   const VerifyOptions& opts) {
  require(t <= p.n, Errc::DomainError, "t exceeds n");
  const std::uint64_t total = joint_size(p, opts.cap);
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t k = 0; k <= t; ++k) {
    auto s = colex_subsets(p.n, k);
    subsets.insert(subsets.end(), s.begin(), s.end());
  }
  require(subsets.size() <= opts.cap / total, Errc::EnumerationCapExceeded,
          "messages x coins x subsets exceeds the enumeration cap of " + std::to_string(opts.cap));

  ResilienceReport rep;
  rep.t = t;
  rep.eps_target = eps_target;
  rep.gamma_target = opts.gamma_target.value_or(p.declared.gamma);
  rep.decodable = decodable(p, opts.cap);

  const std::vector<Symbol> enc = encode_all(p, opts.cap);
  rep.subsets.resize(subsets.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < subsets.size(); i = next++) {
      ViewStats st = subset_stats(p, enc, subsets[i]);
      SubsetRecord& r = rep.subsets[i];
      r.subset = subsets[i];
      r.bad_mass = bad_mass(st.observations, eps_target);
      r.eps_at_gamma = eps_for_gamma(st.observations, rep.gamma_target);
      r.aont_side = st.aont_side;
      r.message_side = st.message_side;
      r.entropy = st.entropy;
      r.observations = std::move(st.observations);
    }
  };
  const unsigned jobs = std::max(1u, opts.jobs);
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  rep.equivocation = double(p.m);
  for (const auto& r : rep.subsets) {
    rep.gamma_measured = std::max(rep.gamma_measured, r.bad_mass);
    rep.eps_measured = std::max(rep.eps_measured, r.eps_at_gamma);
    for (const auto& o : r.observations) rep.max_distance = std::max(rep.max_distance, o.distance);
    rep.equivocation = std::min(rep.equivocation, r.entropy);
    rep.aont_error = std::max(rep.aont_error, Rational(2 * r.aont_side));
    rep.duality_exact = rep.duality_exact && r.aont_side == r.message_side;
  }
  rep.zero_leakage = rep.gamma_measured == 0;
  return rep;
}

AontReport aont_error(const WiretapProtocol& p, std::size_t t, const Rational& eps_target, const VerifyOptions& opts) {
  ResilienceReport r = verify_resilience(p, t, eps_target, opts);
  AontReport a;
  a.error = r.aont_error;
  a.bound = 2 * (eps_target + r.gamma_measured);
  a.holds = a.error <= a.bound;
  a.duality_exact = r.duality_exact;
  return a;
}

EquivocationReport equivocation(const WiretapProtocol& p, std::size_t t, const Rational& eps_target,
                                const VerifyOptions& opts) {
  ResilienceReport r = verify_resilience(p, t, eps_target, opts);
  EquivocationReport e;
  e.delta = r.equivocation;
  e.floor = double(p.m) * (1.0 - to_double(eps_target) - to_double(r.gamma_measured));
  e.applicable = ipow(p.q, p.m) > 4 && eps_target <= Rational(1, 4);
  e.holds = e.delta >= e.floor - 1e-12;
  return e;
}

nlohmann::ordered_json params_json(const WiretapProtocol& p) {
  nlohmann::ordered_json j;
  j["name"] = p.name;
  j["q"] = p.q;
  j["m"] = p.m;
  j["n"] = p.n;
  j["coins"] = p.coins;
  j["declared"] = {{"t", p.declared.t}, {"epsilon", to_string(p.declared.epsilon)}, {"gamma", to_string(p.declared.gamma)}};
  return j;
}

nlohmann::ordered_json to_json(const WiretapProtocol& p, const ResilienceReport& r) {
  nlohmann::ordered_json j;
  j["params"] = params_json(p);
  j["t"] = r.t;
  j["epsilon_target"] = to_string(r.eps_target);
  j["gamma_target"] = to_string(r.gamma_target);
  auto prof = nlohmann::ordered_json::array();
  for (const auto& s : r.subsets) {
    nlohmann::ordered_json e;
    e["subset"] = s.subset;
    e["bad_mass"] = to_string(s.bad_mass);
    e["epsilon_at_gamma"] = to_string(s.eps_at_gamma);
    auto obs = nlohmann::ordered_json::array();
    for (const auto& o : s.observations) {
      nlohmann::ordered_json oj;
      oj["w"] = dists::word_to_string(index_to_word(o.w, p.q, s.subset.size()), p.q);
      oj["prob"] = to_string(o.prob);
      oj["distance"] = to_string(o.distance);
      obs.push_back(std::move(oj));
    }
    e["observations"] = std::move(obs);
    prof.push_back(std::move(e));
  }
  j["epsilon_profile"] = std::move(prof);
  j["epsilon_measured"] = to_string(r.eps_measured);
  j["gamma"] = to_string(r.gamma_measured);
  j["equivocation"] = r.equivocation;
  j["aont_error"] = to_string(r.aont_error);
  j["duality_exact"] = r.duality_exact;
  j["decodable"] = r.decodable;
  j["zero_leakage"] = r.zero_leakage;
  return j;
}

}  // namespace wtk::wiretap
