// Acceptance suite: one PASS/FAIL line per criterion. `--only N` runs a single criterion.
// Indented lines starting with '#' are supplementary measurements, not criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cli.hpp"
#include "wtk/affext.hpp"
#include "wtk/channels.hpp"
#include "wtk/dists.hpp"
#include "wtk/expander.hpp"
#include "wtk/linext.hpp"
#include "wtk/netsim.hpp"
#include "wtk/sfext.hpp"
#include "wtk/wiretap.hpp"

using namespace wtk;
namespace fs = std::filesystem;

namespace {

// Tolerances and fixed instances.
constexpr double kContractionSlack = 1e-12;
constexpr double kSpectralTol = 1e-9;
constexpr double kCycleLambdaTol = 1e-6;
constexpr std::uint64_t kToeplitzMasterSeed = 1;
const Rational kAffineTarget(1, 4);

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> notes;
};

std::string str(const Rational& r) { return to_string(r); }

// ---- shared instances ----

sfext::SfextParams cycle_sfext(std::size_t n, std::size_t k) {
  return sfext::make_sfext(expander::cycle(4), 2, n, k);
}

affext::InvertibleAffineExtractor desk_iaext(std::size_t nprime = 6) {
  return affext::make_iaext(linext::toeplitz_subfamily(nprime, 2, 2, kToeplitzMasterSeed),
                            affext::AffineExtractor::quadratic_bank(nprime, 2));
}

template <class Ext, class Inv>
std::uint64_t count_inversion_failures(std::uint64_t outputs, std::uint64_t coins, Ext ext, Inv inv) {
  std::uint64_t bad = 0;
  for (std::uint64_t y = 0; y < outputs; ++y)
    for (std::uint64_t c = 0; c < coins; ++c)
      if (ext(inv(y, c)) != y) ++bad;
  return bad;
}

// ---- criteria ----

Outcome c1_perfect_inversion() {
  Outcome o;
  std::uint64_t checked = 0, bad = 0;
  for (std::size_t n : {4, 6, 8, 10}) {
    auto sp = cycle_sfext(n, n);
    const auto coins = sfext::sfext_coin_count(sp);
    bad += count_inversion_failures(
        4, coins, [&](const Word& w) { return word_to_index(sfext::sfext_extract(sp, w), 2); },
        [&](std::uint64_t y, std::uint64_t c) { return sfext::sfext_invert_coin(sp, index_to_word(y, 2, 2), c); });
    checked += 4 * coins;
  }
  for (std::size_t n : {6, 8}) {
    auto rp = sfext::make_rounded(expander::cycle(5), 2, n, 2, 3);
    const auto coins = sfext::rounded_coin_count(rp);
    bad += count_inversion_failures(
        4, coins, [&](const Word& w) { return word_to_index(sfext::rounded_extract(rp, w), 2); },
        [&](std::uint64_t y, std::uint64_t c) { return sfext::rounded_invert_coin(rp, index_to_word(y, 2, 2), c); });
    checked += 4 * coins;
  }
  for (const auto& e : {linext::toeplitz_family(8, 3), linext::random_family(10, 4, 4, 7),
                        linext::toeplitz_subfamily(10, 2, 3, kToeplitzMasterSeed)}) {
    const auto coins = linext::lse_coin_count(e);
    const std::uint64_t outs = std::uint64_t{1} << e.m();
    for (std::uint64_t y = 0; y < outs; ++y)
      for (std::uint64_t c = 0; c < coins; ++c) {
        auto [z, x] = linext::lse_invert_coin(e, y, c);
        if (linext::lse_extract(e, x, z) != y) ++bad;
      }
    checked += outs * coins;
  }
  for (std::size_t np : {6, 8}) {
    const auto ia = desk_iaext(np);
    const auto coins = affext::iaext_coin_count(ia);
    bad += count_inversion_failures(
        4, coins, [&](gf2::BitVec v) { return affext::iaext_extract(ia, v); },
        [&](std::uint64_t y, std::uint64_t c) { return affext::iaext_invert_coin(ia, y, c); });
    checked += 4 * coins;
  }
  o.pass = bad == 0;
  o.detail = std::to_string(checked) + " (output, coin) pairs, " + std::to_string(bad) + " failures";
  return o;
}

// Every fiber count equal, i.e. the output is exactly uniform.
bool all_equal(const std::vector<std::uint64_t>& counts) {
  for (auto c : counts)
    if (c != counts.front()) return false;
  return true;
}

Outcome c2_zero_inverter() {
  Outcome o;
  bool ok = true;
  std::ostringstream d;
  for (std::size_t n : {4, 6, 8}) {
    auto sp = cycle_sfext(n, n);
    std::vector<std::uint64_t> counts(std::size_t{1} << n, 0);
    for (std::uint64_t y = 0; y < 4; ++y)
      for (std::uint64_t c = 0; c < sfext::sfext_coin_count(sp); ++c)
        ++counts[word_to_index(sfext::sfext_invert_coin(sp, index_to_word(y, 2, 2), c), 2)];
    ok = ok && all_equal(counts);
  }
  {
    const auto ia = desk_iaext();
    std::vector<std::uint64_t> counts(std::size_t{1} << ia.n(), 0);
    for (std::uint64_t y = 0; y < 4; ++y)
      for (std::uint64_t c = 0; c < affext::iaext_coin_count(ia); ++c) ++counts[affext::iaext_invert_coin(ia, y, c)];
    ok = ok && all_equal(counts);
    d << "iaext n=8 fiber count " << counts.front();
  }
  o.pass = ok;
  o.detail = "sfext n=4,6,8 and " + d.str() + (ok ? ", all fibers equal" : ", unequal fibers");
  return o;
}

Outcome c3_walk_bound() {
  Outcome o;
  o.pass = true;
  struct Inst {
    const char* name;
    expander::LabeledGraph g;
    unsigned d;
  };
  std::vector<Inst> insts{{"cycle(4)", expander::cycle(4), 2}, {"complete-selfloop(4)", expander::complete_selfloop(4), 4}};
  const std::size_t n = 8;
  std::ostringstream d;
  for (auto& in : insts) {
    const double lambda = std::min(1.0, expander::second_eigenvalue(in.g, kSpectralTol).lambda);
    auto sp = sfext::make_sfext(in.g, in.d, n, 0, lambda);
    const auto tab = sfext::sfext_table(sp);
    bool ok = true;
    std::ostringstream errs;
    for (std::size_t k = 0; k <= n; ++k) {
      const Rational err = dists::symbol_fixing_error(in.d, n, k, tab, ipow(in.d, sp.m));
      const auto b = sfext::sfext_error_bound(n, sp.m, k, in.d, lambda);
      const bool holds = to_double(err) <= b.value;
      ok = ok && holds;
      errs << " k=" << k << ":" << str(err) << "<=" << b.value;
    }
    const bool below = lambda < 1.0 / std::sqrt(double(in.d));
    o.notes.push_back(std::string(in.name) + " m=" + std::to_string(sp.m) + " lambda=" + std::to_string(lambda) +
                      (below ? " (below 1/sqrt(d): assumption violated)" : "") + errs.str());
    o.pass = o.pass && ok;
    d << in.name << (ok ? " holds" : " VIOLATED") << "; ";
  }
  o.detail = d.str() + "every k in 0..8";
  return o;
}

Outcome c4_lemma_end_to_end() {
  Outcome o;
  auto sp = cycle_sfext(8, 5);
  const Rational ext_err = sfext::sfext_measured_error(sp, 5);
  const auto p = wiretap::sfext_protocol(sp, ext_err);
  const auto r = wiretap::verify_resilience(p, 3, ext_err);
  const auto eq = wiretap::equivocation(p, 3, ext_err);
  o.pass = r.gamma_measured == 0 && r.eps_measured <= ext_err && r.decodable;
  o.detail = "t=3 gamma=" + str(r.gamma_measured) + " eps=" + str(r.eps_measured) + " extractor error=" + str(ext_err) +
             (r.decodable ? " decodable" : " NOT decodable");
  o.notes.push_back("equivocation min H(X|Y_S) = " + std::to_string(eq.delta) + " bits, floor " +
                    std::to_string(eq.floor) + (eq.applicable ? "" : " (not applicable: q^m <= 4 or eps > 1/4)"));
  return o;
}

Outcome c5_mod_bound() {
  Outcome o;
  std::size_t pairs = 0, bad = 0;
  for (std::uint64_t q = 3; q <= 64; ++q)
    for (std::uint64_t p = 2; p < q; ++p) {
      ++pairs;
      if (sfext::mod_invert_linf(q, p) > sfext::mod_invert_linf_bound(q, p, 0)) ++bad;
    }
  o.pass = bad == 0;
  o.detail = std::to_string(pairs) + " (q, p) pairs, " + std::to_string(bad) + " violations";
  return o;
}

Outcome c6_duality() {
  Outcome o;
  Rng rng(2024);
  std::size_t bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const unsigned d = 2 + unsigned(rng.below(2));
    const std::size_t n = 2 + rng.below(3);
    const std::size_t split = 1 + rng.below(n - 1);
    std::map<std::uint64_t, std::uint64_t> w;
    const std::uint64_t space = ipow(d, n);
    for (std::uint64_t x = 0; x < space; ++x)
      if (auto v = rng.below(10)) w[x] = v;
    if (w.empty()) w[0] = 1;
    auto [l, r] = dists::duality_gap(dists::ExactDist::from_counts(d, n, w), split);
    if (l != r) ++bad;
  }
  auto sp = cycle_sfext(8, 5);
  const auto p4 = wiretap::sfext_protocol(sp, sfext::sfext_measured_error(sp, 5));
  const auto r4 = wiretap::verify_resilience(p4, 3, p4.declared.epsilon);
  const auto p8 = wiretap::iaext_protocol(desk_iaext(), 5, kAffineTarget);
  const auto r8 = wiretap::verify_resilience(p8, 3, p8.declared.epsilon);
  o.pass = bad == 0 && r4.duality_exact && r8.duality_exact;
  o.detail = "1000 random joints, " + std::to_string(bad) + " gaps; protocol instances " +
             (r4.duality_exact && r8.duality_exact ? "exact" : "NOT exact");
  return o;
}

double l2_from_uniform(const std::vector<double>& p) {
  const double u = 1.0 / double(p.size());
  double s = 0;
  for (double v : p) s += (v - u) * (v - u);
  return std::sqrt(s);
}

Outcome c7_contraction() {
  Outcome o;
  o.pass = true;
  std::vector<std::pair<std::string, expander::LabeledGraph>> graphs{{"cycle(5)", expander::cycle(5)},
                                                                     {"margulis(3)", expander::margulis(3)},
                                                                     {"margulis(4)", expander::margulis(4)},
                                                                     {"complete-selfloop(8)", expander::complete_selfloop(8)}};
  Rng rng(77);
  double worst = -1;
  double cycle_lambda = 0;
  for (const auto& [name, g] : graphs) {
    const double lambda = expander::second_eigenvalue(g, kSpectralTol).lambda;
    if (name == "cycle(5)") cycle_lambda = lambda;
    o.notes.push_back(name + " lambda=" + std::to_string(lambda));
    for (int i = 0; i < 100; ++i) {
      std::vector<double> p(g.vertices());
      double s = 0;
      for (auto& v : p) s += v = double(rng.below(1000) + 1);
      for (auto& v : p) v /= s;
      const double lhs = l2_from_uniform(expander::propagate(g, p));
      const double rhs = lambda * l2_from_uniform(p);
      worst = std::max(worst, lhs - rhs);
      if (lhs > rhs + kContractionSlack) o.pass = false;
    }
  }
  const double expected = std::abs(std::cos(4 * std::numbers::pi / 5));
  const bool close = std::abs(cycle_lambda - expected) <= kCycleLambdaTol;
  o.pass = o.pass && close;
  std::ostringstream d;
  d << "max(|pA-u| - lambda|p-u|) = " << worst << "; |lambda(cycle 5) - |cos(4pi/5)|| = "
    << std::abs(cycle_lambda - expected);
  o.detail = d.str();
  return o;
}

std::optional<Rational> c8_affine_error_cache;

Rational desk_affine_error() {
  if (!c8_affine_error_cache) {
    const auto ia = desk_iaext();
    c8_affine_error_cache = affext::affine_error(affext::iaext_table(ia), ia.n(), 5, ia.m());
  }
  return *c8_affine_error_cache;
}

Outcome c8_desk_instance() {
  Outcome o;
  const auto ia = desk_iaext();
  const Rational err = desk_affine_error();
  std::vector<std::uint64_t> counts(std::size_t{1} << ia.n(), 0);
  for (std::uint64_t y = 0; y < 4; ++y)
    for (std::uint64_t c = 0; c < affext::iaext_coin_count(ia); ++c) ++counts[affext::iaext_invert_coin(ia, y, c)];
  const bool uniform = all_equal(counts);
  const auto sh = affext::shaltiel_check(ia.aext, ia.inner, 5);
  o.pass = err <= kAffineTarget && uniform && sh.holds();
  std::ostringstream d;
  d << "affine_error(k=5, " << dists::affine_family_size(8, 5) << " sources) = " << str(err) << (err <= kAffineTarget ? " <= " : " > ") << "1/4 target; inverter "
    << (uniform ? "uniform" : "NOT uniform") << "; shaltiel measured " << str(sh.measured) << " <= bound " << sh.bound
    << (sh.vacuous ? " (vacuous)" : "");
  o.detail = d.str();
  Rational best = err;
  std::uint64_t best_seed = kToeplitzMasterSeed;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    const auto alt = affext::make_iaext(linext::toeplitz_subfamily(6, 2, 2, seed), ia.aext);
    const Rational e = affext::affine_error(affext::iaext_table(alt), alt.n(), 5, alt.m());
    if (e < best) best = e, best_seed = seed;
  }
  o.notes.push_back("smallest affine_error over Toeplitz master seeds 0..63: " + str(best) + " (seed " +
                    std::to_string(best_seed) + ")");
  o.notes.push_back("shaltiel: epsilon_F = " + str(sh.epsilon_f) + ", sources " + std::to_string(sh.sources) +
                    ", conditioned sources affine: " + (sh.closed ? "yes" : "no"));
  return o;
}

Outcome c9_composition() {
  Outcome o;
  const auto ia = desk_iaext();
  const Rational eps = desk_affine_error();
  const auto p = wiretap::iaext_protocol(ia, 5, eps);
  const auto code = channels::hamming74(2);
  const auto cp = channels::compose(p, code);
  std::uint64_t bad = 0, trials = 0;
  for (std::uint64_t xi = 0; xi < 4; ++xi) {
    const Word x = index_to_word(xi, 2, 2);
    for (std::uint64_t c = 0; c < cp.coins; ++c) {
      const Word cw = wiretap::encode_with_coin(cp, x, c);
      for (std::size_t pos = 0; pos <= cw.size(); ++pos) {
        Word r = cw;
        if (pos < cw.size()) r[pos] ^= 1;
        ++trials;
        if (wiretap::decode(cp, r) != x) ++bad;
      }
    }
  }
  Rng rng(99);
  bool affine = true;
  Rational worst = 0;
  std::size_t min_dim = 64;
  for (int i = 0; i < 50; ++i) {
    const std::size_t rows = 1 + rng.below(2);
    gf::Matrix L(rows, code.N);
    for (auto& v : L.data) v = static_cast<gf::Elem>(rng.below(2));
    const auto rep = channels::linear_observation_report(p, code, L);
    affine = affine && rep.affine_checked && rep.conditional_affine;
    worst = std::max(worst, rep.max_distance);
    min_dim = std::min(min_dim, rep.min_conditional_dim);
  }
  o.pass = bad == 0 && affine && worst <= eps;
  o.detail = std::to_string(trials) + " decodes with <= 1 error, " + std::to_string(bad) + " failures; 50 observations: " +
             (affine ? "conditionals affine" : "NON-affine conditional") + ", max eps " + str(worst) + " <= " +
             str(eps);
  o.notes.push_back("smallest conditional source dimension " + std::to_string(min_dim));
  return o;
}

// E(x, r) = (x + r, r) over GF(q) with field addition.
wiretap::WiretapProtocol additive_pad(unsigned q) {
  const gf::Field f = gf::Field::of_order(q);
  wiretap::WiretapProtocol p;
  p.name = "additive-pad";
  p.q = q;
  p.m = 1;
  p.n = 2;
  p.coins = q;
  p.encoder = [f](std::span<const Symbol> x, std::uint64_t r) {
    return Word{f.add(x[0], static_cast<Symbol>(r)), static_cast<Symbol>(r)};
  };
  p.decoder = [f](std::span<const Symbol> y) { return Word{f.sub(y[0], y[1])}; };
  p.declared = wiretap::Targets{1, 0, 0};
  return p;
}

Outcome c10_butterfly() {
  Outcome o;
  const auto net = netsim::butterfly_network(2);
  const auto code = netsim::butterfly_xor_code(net);
  const auto otp = wiretap::one_time_pad();
  const auto run = netsim::wiretap_netcode_run(net, code, otp, 1, 0);
  std::size_t leaky = 0;
  std::string leaky_edges;
  for (const auto& s : run.resilience.subsets)
    if (s.subset.size() == 1 && s.eps_at_gamma > 0) {
      ++leaky;
      const auto [u, v] = net.edges[s.subset[0]];
      leaky_edges += " " + std::to_string(u) + "->" + std::to_string(v);
    }
  o.pass = run.all_decode && run.resilience.eps_measured == 0 && run.resilience.gamma_measured == 0;
  o.detail = std::string("receivers decode: ") + (run.all_decode ? "yes" : "no") + "; eps=" +
             str(run.resilience.eps_measured) + " gamma=" + str(run.resilience.gamma_measured) + "; leaking edges:" +
             (leaky ? leaky_edges : " none");

  // Every GF(2)-linear outer code E(x, r) = (a x + b r, c x + e r) with decodable output.
  std::size_t decodable = 0, private_views = 0;
  for (unsigned mask = 0; mask < 16; ++mask) {
    const Symbol a = mask & 1, b = (mask >> 1) & 1, c = (mask >> 2) & 1, e = (mask >> 3) & 1;
    wiretap::WiretapProtocol p = additive_pad(2);
    p.encoder = [=](std::span<const Symbol> x, std::uint64_t r) {
      const Symbol rr = static_cast<Symbol>(r);
      return Word{(a & x[0]) ^ (b & rr), (c & x[0]) ^ (e & rr)};
    };
    // the receiver sees (y1, y2); decodable iff x is a function of it
    bool dec = true;
    for (Symbol r1 = 0; r1 < 2; ++r1)
      for (Symbol r2 = 0; r2 < 2; ++r2)
        if (p.encoder(Word{0}, r1) == p.encoder(Word{1}, r2)) dec = false;
    if (!dec) continue;
    ++decodable;
    const auto enc = p.encoder;
    p.decoder = [enc](std::span<const Symbol> y) {
      for (Symbol r = 0; r < 2; ++r)
        if (enc(Word{1}, r) == Word(y.begin(), y.end())) return Word{1};
      return Word{0};
    };
    const auto r = netsim::wiretap_netcode_run(net, code, p, 1, 0);
    if (r.resilience.eps_measured == 0) ++private_views;
  }
  o.notes.push_back("GF(2) linear outer codes (m=1, n=2) over the XOR butterfly: " + std::to_string(decodable) +
                    " decodable, " + std::to_string(private_views) + " with all single-edge views uniform");

  const auto net4 = netsim::butterfly_network(4);
  // s-a, s-b, a-c, b-c, c-d = y1 + alpha y2, a-r1, b-r2, d-r1, d-r2
  const auto code4 = netsim::make_code(net4, 2, {{1, 0}, {0, 1}, {1}, {1}, {1, 2}, {1}, {1}, {1}, {1}});
  const auto run4 = netsim::wiretap_netcode_run(net4, code4, additive_pad(4), 1, 0);
  o.notes.push_back(std::string("GF(4) butterfly with c->d = y1 + alpha*y2 and pad (x + r, r): eps=") +
                    str(run4.resilience.eps_measured) + " gamma=" + str(run4.resilience.gamma_measured) +
                    ", receivers decode: " + (run4.all_decode ? "yes" : "no"));
  return o;
}

Outcome c11_general_adversary() {
  Outcome o;
  const auto e = linext::toeplitz_family(8, 2);
  std::vector<channels::GeneralAdversary> advs;
  auto add = [&](std::string name, std::vector<std::uint32_t> c1, std::size_t bits) {
    advs.push_back({std::move(name), std::move(c1), bits, channels::full_seed_table(e.t()), e.t()});
  };
  add("projection(0,1)", channels::projection_table(8, {0, 1}), 2);
  add("parity(0f,33)", channels::parity_table(8, {0x0f, 0x33}), 2);
  add("probe(seed 0x155, bit 0)", channels::decoder_probe_table(e, 0x155, 0), 1);
  o.pass = true;
  bool nonzero = false;
  std::ostringstream d;
  for (const auto& a : advs) {
    const auto r = channels::general_adversary_report(e, a);
    o.pass = o.pass && r.leakage_bounded();
    nonzero = nonzero || r.leakage > 0;
    d << a.name << ": " << str(r.leakage) << "<=" << str(r.classifier_mass) << "+" << str(r.eps_seed) << "; ";
    o.notes.push_back(a.name + ": threshold " + std::to_string(r.threshold) + " preimages, classifier mass " +
                      str(r.classifier_mass) + " (limit " + std::to_string(r.classifier_limit) + "), max distance " +
                      str(r.max_distance));
  }
  o.pass = o.pass && nonzero;
  o.detail = d.str() + (nonzero ? "nonzero leakage observed" : "NO nonzero leakage");
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome c12_reproducibility() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / ("wtk-accept-" + std::to_string(::getpid()));
  fs::create_directories(root);
  struct Run {
    std::string verb, name, config;
  };
  const std::vector<Run> runs{
      {"verify", "otp", R"({"suite":"resilience","protocol":{"kind":"one-time-pad"}})"},
      {"verify", "identity", R"({"suite":"resilience","protocol":{"kind":"identity","n":3,"t":1}})"},
      {"verify", "sfext", R"({"suite":"resilience","t":3,"protocol":{"kind":"sfext","graph":{"family":"cycle","size":4},"n":8,"k":5}})"},
      {"verify", "iaext", R"({"suite":"resilience","t":3,"protocol":{"kind":"iaext","n_prime":6,"t":2,"m":2,"k":5,"epsilon":"1/4"}})"},
      {"verify", "general", R"({"suite":"general","n":8,"m":2,"t":6,"adversaries":[{"kind":"projection","bits":[0,1]}]})"},
      {"netsim", "butterfly", R"({"topology":{"named":"butterfly","q":2},"code":"xor","protocol":{"kind":"one-time-pad"},"t":1})"},
  };
  std::size_t identical = 0;
  std::string mismatched;
  for (const auto& r : runs) {
    const fs::path cfg = root / (r.name + ".json");
    std::ofstream(cfg) << r.config;
    std::string bodies[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = root / (r.name + "-" + std::to_string(rep));
      std::istringstream in;
      std::ostringstream sout, serr;
      wtk::cli::run({"wtk", r.verb, "--config", cfg.string(), "--seed", "42", "--jobs", rep ? "3" : "1", "--out",
                     out.string()},
                    in, sout, serr);
      bodies[rep] = slurp(out / "report.json") + slurp(out / "report.csv") + sout.str();
    }
    if (bodies[0] == bodies[1] && !bodies[0].empty())
      ++identical;
    else
      mismatched += " " + r.name;
  }
  fs::remove_all(root);
  o.pass = identical == runs.size();
  o.detail = std::to_string(identical) + "/" + std::to_string(runs.size()) +
             " verify/netsim runs byte-identical across two executions (jobs 1 vs 3)" +
             (mismatched.empty() ? "" : "; differ:" + mismatched);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"perfect inversion", c1_perfect_inversion},
      {"zero-error inverters are exactly uniform", c2_zero_inverter},
      {"walk extractor error bound", c3_walk_bound},
      {"invertible extractor to wiretap protocol", c4_lemma_end_to_end},
      {"Mod inverter l-infinity bound", c5_mod_bound},
      {"duality of the two distance averages", c6_duality},
      {"walk contraction", c7_contraction},
      {"desk-size invertible affine extractor", c8_desk_instance},
      {"wiretap then Hamming composition", c9_composition},
      {"butterfly network with a pad outer code", c10_butterfly},
      {"general adversary with a side channel", c11_general_adversary},
      {"CLI reproducibility", c12_reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (only && only != id) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str(), secs);
    for (const auto& n : o.notes) std::printf("      # %s\n", n.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
