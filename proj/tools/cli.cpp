#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <openssl/evp.h>

#include "CLI11.hpp"

#include "wtk/affext.hpp"
#include "wtk/channels.hpp"
#include "wtk/dists.hpp"
#include "wtk/expander.hpp"
#include "wtk/linext.hpp"
#include "wtk/netsim.hpp"
#include "wtk/sfext.hpp"

namespace wtk::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    fail(Errc::DomainError, "SHA-256 failed");
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

std::string params_hash(const nlohmann::json& protocol) { return sha256_hex(protocol.dump()); }

std::string seed_commitment(std::uint64_t seed) { return sha256_hex("wtk-seed:" + std::to_string(seed)); }

namespace {

Rational rational_field(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  fail(Errc::ParseError, std::string(key) + " must be an integer or a \"num/den\" string");
}

expander::LabeledGraph graph_field(const nlohmann::json& j) {
  const auto& g = j.at("graph");
  return expander::family_graph(g.at("family").get<std::string>(), g.at("size").get<std::uint32_t>());
}

affext::InvertibleAffineExtractor iaext_from_config(const nlohmann::json& j) {
  const auto np = j.at("n_prime").get<std::size_t>();
  const auto t = j.at("t").get<std::size_t>();
  const auto m = j.at("m").get<std::size_t>();
  const auto master = j.value("master_seed", std::uint64_t{1});
  return affext::make_iaext(linext::toeplitz_subfamily(np, m, t, master), affext::AffineExtractor::quadratic_bank(np, t));
}

}  // namespace

wiretap::WiretapProtocol protocol_from_config(const nlohmann::json& j, std::uint64_t cap) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "one-time-pad") return wiretap::one_time_pad();
  if (kind == "identity")
    return wiretap::identity_protocol(j.value("q", 2u), j.at("n").get<std::size_t>(), j.value("t", std::size_t{1}));
  if (kind == "sfext") {
    auto g = graph_field(j);
    const unsigned d = g.degree();
    auto sp = sfext::make_sfext(std::move(g), d, j.at("n").get<std::size_t>(), j.at("k").get<std::size_t>());
    const Rational eps = j.contains("epsilon") ? rational_field(j, "epsilon") : sfext::sfext_measured_error(sp, sp.k);
    return wiretap::sfext_protocol(sp, eps);
  }
  if (kind == "rounded") {
    auto g = graph_field(j);
    const unsigned d = g.degree();
    auto rp = sfext::make_rounded(std::move(g), d, j.at("n").get<std::size_t>(), j.at("m").get<std::size_t>(),
                                  j.at("m_prime").get<std::size_t>());
    const auto k = j.at("k").get<std::size_t>();
    Rational eps = 0;
    if (j.contains("epsilon")) {
      eps = rational_field(j, "epsilon");
    } else {
      const std::uint64_t space = checked_pow(d, rp.n, cap);
      std::vector<std::uint64_t> tab(space);
      for (std::uint64_t i = 0; i < space; ++i)
        tab[i] = word_to_index(sfext::rounded_extract(rp, index_to_word(i, d, rp.n)), d);
      eps = dists::symbol_fixing_error(d, rp.n, k, tab, ipow(d, rp.m), cap);
    }
    const Rational inv_err = wiretap::inverter_distance(wiretap::rounded_protocol(rp, k, eps, 0), cap);
    return wiretap::rounded_protocol(rp, k, eps, inv_err);
  }
  if (kind == "iaext") {
    auto ia = iaext_from_config(j);
    const auto k = j.at("k").get<std::size_t>();
    Rational eps;
    if (j.contains("epsilon")) {
      eps = rational_field(j, "epsilon");
    } else {
      const auto tab = affext::iaext_table(ia);
      eps = affext::affine_error(tab, ia.n(), k, ia.m(), cap);
    }
    return wiretap::iaext_protocol(ia, k, eps);
  }
  fail(Errc::UnsupportedFamily, "unknown protocol kind '" + kind + "'");
}

std::vector<Word> pack_payload(const std::string& bytes, unsigned q, std::size_t m, bool pad) {
  require(q >= 2 && std::has_single_bit(q), Errc::DomainError, "payload framing needs q = 2^e");
  require(m >= 1, Errc::DomainError, "needs m >= 1");
  const unsigned e = static_cast<unsigned>(std::countr_zero(q));
  std::vector<Symbol> bits;
  for (unsigned char c : bytes)
    for (int b = 7; b >= 0; --b) bits.push_back((c >> b) & 1);
  const std::size_t per_block = e * m;
  if (bits.size() % per_block != 0) {
    require(pad, Errc::ShapeMismatch, "payload does not fill whole blocks and padding is off");
    bits.resize((bits.size() / per_block + 1) * per_block, 0);
  }
  std::vector<Word> blocks;
  for (std::size_t off = 0; off < bits.size(); off += per_block) {
    Word w(m);
    for (std::size_t s = 0; s < m; ++s)
      for (unsigned b = 0; b < e; ++b) w[s] = (w[s] << 1) | bits[off + s * e + b];
    blocks.push_back(std::move(w));
  }
  return blocks;
}

std::string unpack_payload(const std::vector<Word>& blocks, unsigned q, std::size_t payload_bytes) {
  require(q >= 2 && std::has_single_bit(q), Errc::DomainError, "payload framing needs q = 2^e");
  const unsigned e = static_cast<unsigned>(std::countr_zero(q));
  std::vector<Symbol> bits;
  for (const auto& w : blocks)
    for (Symbol s : w)
      for (unsigned b = e; b-- > 0;) bits.push_back((s >> b) & 1);
  require(bits.size() >= payload_bytes * 8, Errc::ShapeMismatch, "frame holds fewer bits than the payload length");
  std::string out(payload_bytes, '\0');
  for (std::size_t i = 0; i < payload_bytes; ++i) {
    unsigned char c = 0;
    for (std::size_t b = 0; b < 8; ++b) c = static_cast<unsigned char>((c << 1) | bits[8 * i + b]);
    out[i] = static_cast<char>(c);
  }
  return out;
}

namespace {

struct Context {
  nlohmann::json config;
  std::string config_hash;
  std::uint64_t seed = 1;
  std::uint64_t cap = kDefaultEnumerationCap;
  unsigned jobs = 1;
  std::string out_dir;
  std::ostream* out = nullptr;
  std::istream* in = nullptr;
};

ojson report_header(const Context& c, const std::string& command) {
  ojson h;
  h["tool"] = "wtk";
  h["format_version"] = kFormatVersion;
  h["command"] = command;
  h["config_hash"] = c.config_hash;
  h["seed"] = c.seed;
  h["cap"] = c.cap;
  return h;
}

void write_file(const Context& c, const std::string& name, const std::string& body) {
  if (c.out_dir.empty()) return;
  fs::create_directories(c.out_dir);
  std::ofstream f(fs::path(c.out_dir) / name, std::ios::binary);
  require(bool(f), Errc::DomainError, "cannot write " + name + " under " + c.out_dir);
  f << body;
}

std::string read_all(std::istream& is) {
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string read_path_or(const std::string& path, std::istream& fallback) {
  if (path.empty() || path == "-") return read_all(fallback);
  std::ifstream f(path, std::ios::binary);
  require(bool(f), Errc::ParseError, "cannot read " + path);
  return read_all(f);
}

// ---- encode / decode ----

int cmd_encode(const Context& c, const std::string& input, const std::string& output, bool pad) {
  const auto& pj = c.config.at("protocol");
  const auto p = protocol_from_config(pj, c.cap);
  const std::string payload = read_path_or(input, *c.in);
  const auto blocks = pack_payload(payload, p.q, p.m, pad);
  Rng rng(c.seed);
  ojson h;
  h["format"] = "wtk-frame";
  h["version"] = kFormatVersion;
  h["params_hash"] = params_hash(pj);
  h["seed_commitment"] = seed_commitment(c.seed);
  h["pad"] = pad ? "zero" : "none";
  h["payload_bytes"] = payload.size();
  h["q"] = p.q;
  h["m"] = p.m;
  h["n"] = p.n;
  h["blocks"] = blocks.size();
  std::string body = h.dump() + "\n";
  for (const auto& x : blocks) body += dists::word_to_string(wiretap::encode(p, x, rng), p.q) + "\n";
  if (output.empty() || output == "-")
    *c.out << body;
  else
    std::ofstream(output, std::ios::binary) << body;
  return kPass;
}

int cmd_decode(const Context& c, const std::string& input, const std::string& output) {
  const auto& pj = c.config.at("protocol");
  const auto p = protocol_from_config(pj, c.cap);
  std::istringstream frame(read_path_or(input, *c.in));
  std::string line;
  require(bool(std::getline(frame, line)), Errc::BadHeader, "missing frame header");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception&) {
    fail(Errc::BadHeader, "frame header is not JSON");
  }
  require(h.value("format", "") == "wtk-frame" && h.value("version", 0) == kFormatVersion, Errc::BadHeader,
          "unknown frame format or version");
  require(h.value("params_hash", "") == params_hash(pj), Errc::BadHeader,
          "frame was produced under different protocol parameters");
  const auto nblocks = h.at("blocks").get<std::size_t>();
  std::vector<Word> msgs;
  while (std::getline(frame, line)) {
    if (line.empty()) continue;
    msgs.push_back(wiretap::decode(p, dists::word_from_string(line, p.q)));
  }
  require(msgs.size() == nblocks, Errc::ShapeMismatch, "frame block count does not match its header");
  const std::string payload = unpack_payload(msgs, p.q, h.at("payload_bytes").get<std::size_t>());
  if (output.empty() || output == "-")
    *c.out << payload;
  else
    std::ofstream(output, std::ios::binary) << payload;
  return kPass;
}

// ---- verify ----

int verify_resilience_suite(const Context& c, ojson& rep, std::string& csv) {
  const auto& pj = c.config.at("protocol");
  const auto p = protocol_from_config(pj, c.cap);
  const std::size_t t = c.config.value("t", p.declared.t);
  const Rational eps = c.config.contains("epsilon") ? rational_field(c.config, "epsilon") : p.declared.epsilon;
  wiretap::VerifyOptions opts{c.cap, c.jobs, std::nullopt};
  if (c.config.contains("gamma")) opts.gamma_target = rational_field(c.config, "gamma");
  const auto r = wiretap::verify_resilience(p, t, eps, opts);
  const auto a = wiretap::aont_error(p, t, eps, opts);
  const auto e = wiretap::equivocation(p, t, eps, opts);
  rep["result"] = wiretap::to_json(p, r);
  ojson aj;
  aj["error"] = to_string(a.error);
  aj["bound"] = to_string(a.bound);
  aj["holds"] = a.holds;
  rep["aont"] = aj;
  ojson ej;
  ej["delta"] = e.delta;
  ej["floor"] = e.floor;
  ej["applicable"] = e.applicable;
  ej["holds"] = e.holds;
  rep["equivocation_check"] = ej;
  const bool pass = r.decodable && r.gamma_measured <= r.gamma_target && r.eps_measured <= eps && a.holds &&
                    (!e.applicable || e.holds);
  csv = "subset,bad_mass,eps_at_gamma,aont_side,message_side,entropy\n";
  for (const auto& s : r.subsets) {
    std::string name;
    for (std::size_t i = 0; i < s.subset.size(); ++i) name += (i ? "-" : "") + std::to_string(s.subset[i]);
    std::ostringstream row;
    row << (name.empty() ? "empty" : name) << ',' << to_string(s.bad_mass) << ',' << to_string(s.eps_at_gamma) << ','
        << to_string(s.aont_side) << ',' << to_string(s.message_side) << ',' << std::setprecision(12) << s.entropy
        << '\n';
    csv += row.str();
  }
  *c.out << p.name << ": t=" << t << " gamma=" << to_string(r.gamma_measured) << " (target "
         << to_string(r.gamma_target) << ") eps=" << to_string(r.eps_measured) << " (target " << to_string(eps)
         << ") decodable=" << (r.decodable ? "yes" : "no") << '\n';
  return pass ? kPass : kViolation;
}

int verify_affine_suite(const Context& c, ojson& rep, std::string& csv) {
  const auto& j = c.config;
  const auto n = j.at("n").get<std::size_t>();
  const auto l = j.at("l").get<std::size_t>();
  const auto k = j.at("k").get<std::size_t>();
  const auto a = affext::AffineExtractor::quadratic_bank(n, l);
  const Rational err = affext::affine_error(a, k, c.cap);
  const Rational eps = rational_field(j, "epsilon");
  ojson r;
  r["n"] = n;
  r["l"] = l;
  r["k"] = k;
  r["affine_error"] = to_string(err);
  r["epsilon_target"] = to_string(eps);
  rep["result"] = r;
  csv = "n,l,k,affine_error,epsilon_target\n" + std::to_string(n) + "," + std::to_string(l) + "," +
        std::to_string(k) + "," + to_string(err) + "," + to_string(eps) + "\n";
  *c.out << "quadratic bank n=" << n << " l=" << l << " k=" << k << ": error " << to_string(err) << '\n';
  return err <= eps ? kPass : kViolation;
}

channels::GeneralAdversary adversary_entry(const nlohmann::json& a, const linext::LinearSeededExtractor& e,
                                           bool public_side) {
  const std::string kind = a.at("kind").get<std::string>();
  channels::GeneralAdversary adv;
  if (kind == "table") {
    adv = channels::adversary_from_json(a, e.n(), e.t());
  } else {
    adv.name = a.value("name", kind);
    if (kind == "projection") {
      const auto bits = a.at("bits").get<std::vector<std::size_t>>();
      adv.c1 = channels::projection_table(e.n(), bits);
      adv.c1_bits = bits.size();
    } else if (kind == "parity") {
      const auto masks = a.at("masks").get<std::vector<gf2::BitVec>>();
      adv.c1 = channels::parity_table(e.n(), masks);
      adv.c1_bits = masks.size();
    } else if (kind == "probe") {
      adv.c1 = channels::decoder_probe_table(e, a.value("guess", std::uint64_t{0}), a.value("bit", std::size_t{0}));
      adv.c1_bits = 1;
    } else {
      fail(Errc::UnsupportedFamily, "unknown adversary kind '" + kind + "'");
    }
    adv.c2 = channels::full_seed_table(e.t());
    adv.c2_bits = e.t();
  }
  if (!public_side) adv.c2_bits = 0;
  return adv;
}

int verify_general_suite(const Context& c, ojson& rep, std::string& csv) {
  const auto& j = c.config;
  const auto n = j.at("n").get<std::size_t>();
  const auto m = j.at("m").get<std::size_t>();
  const auto e = j.contains("t") ? linext::toeplitz_subfamily(n, m, j.at("t").get<std::size_t>(),
                                                              j.value("master_seed", std::uint64_t{1}))
                                 : linext::toeplitz_family(n, m);
  const double alpha = j.value("alpha", 0.125);
  const bool public_side = j.value("side", std::string("public")) == "public";
  const auto mode = public_side ? channels::SideChannel::Public : channels::SideChannel::Private;
  auto list = ojson::array();
  csv = "adversary,classifier_mass,eps_seed,leakage,max_distance,bounded\n";
  bool pass = true;
  for (const auto& aj : j.at("adversaries")) {
    const auto adv = adversary_entry(aj, e, public_side);
    const auto r = channels::general_adversary_report(e, adv, alpha, mode, c.cap);
    ojson o;
    o["adversary"] = adv.name;
    o["t"] = adv.c1_bits + (public_side ? adv.c2_bits : 0);
    o["threshold"] = r.threshold;
    o["classifier_mass"] = to_string(r.classifier_mass);
    o["classifier_limit"] = r.classifier_limit;
    o["eps_seed"] = to_string(r.eps_seed);
    o["leakage"] = to_string(r.leakage);
    o["max_distance"] = to_string(r.max_distance);
    o["bounded"] = r.leakage_bounded();
    list.push_back(o);
    csv += adv.name + "," + to_string(r.classifier_mass) + "," + to_string(r.eps_seed) + "," + to_string(r.leakage) +
           "," + to_string(r.max_distance) + "," + (r.leakage_bounded() ? "1" : "0") + "\n";
    *c.out << adv.name << ": leakage " << to_string(r.leakage) << " <= " << to_string(r.classifier_mass) << " + "
           << to_string(r.eps_seed) << (r.leakage_bounded() ? "" : "  VIOLATED") << '\n';
    pass = pass && r.leakage_bounded();
  }
  ojson r;
  r["n"] = n;
  r["m"] = m;
  r["seed_bits"] = e.t();
  r["alpha"] = alpha;
  r["side"] = public_side ? "public" : "private";
  r["adversaries"] = list;
  rep["result"] = r;
  return pass ? kPass : kViolation;
}

int cmd_verify(const Context& c) {
  ojson rep = report_header(c, "verify");
  std::string csv;
  const std::string suite = c.config.value("suite", std::string("resilience"));
  rep["suite"] = suite;
  int code = kPass;
  try {
    if (suite == "resilience")
      code = verify_resilience_suite(c, rep, csv);
    else if (suite == "affine")
      code = verify_affine_suite(c, rep, csv);
    else if (suite == "general")
      code = verify_general_suite(c, rep, csv);
    else
      fail(Errc::UnsupportedFamily, "unknown verify suite '" + suite + "'");
  } catch (const Error& e) {
    if (e.code() != Errc::EnumerationCapExceeded) throw;
    rep["partial"] = true;
    rep["error"] = e.what();
    write_file(c, "report.json", rep.dump(2) + "\n");
    throw;
  }
  rep["pass"] = code == kPass;
  write_file(c, "report.json", rep.dump(2) + "\n");
  write_file(c, "report.csv", csv);
  return code;
}

// ---- netsim ----

int cmd_netsim(const Context& c) {
  const auto& j = c.config;
  const auto net = netsim::network_from_json(j.at("topology"));
  const auto p = protocol_from_config(j.at("protocol"), c.cap);
  const std::string code_kind = j.value("code", std::string("random"));
  Rng rng(c.seed);
  const netsim::NetworkCode code =
      code_kind == "xor" ? netsim::butterfly_xor_code(net) : netsim::assign_random_code(net, p.n, rng);
  const std::size_t t = j.value("t", std::size_t{1});
  const Rational eps = j.contains("epsilon") ? rational_field(j, "epsilon") : Rational(0);
  wiretap::VerifyOptions opts{c.cap, c.jobs, std::nullopt};
  if (j.contains("gamma")) opts.gamma_target = rational_field(j, "gamma");
  ojson rep = report_header(c, "netsim");
  rep["topology"] = netsim::to_json(net);
  auto mc = ojson::array();
  for (auto r : net.receivers) mc.push_back(netsim::min_cut(net, r));
  rep["min_cut"] = mc;
  auto globals = ojson::array();
  for (const auto& g : code.global) globals.push_back(g);
  rep["global_vectors"] = globals;
  const auto run = netsim::wiretap_netcode_run(net, code, p, t, eps, opts);
  rep["receiver_decodes"] = run.receiver_decodes;
  const auto np = netsim::network_protocol(net, code, p, net.receivers.front());
  rep["result"] = wiretap::to_json(np, run.resilience);
  const bool pass = run.all_decode && run.resilience.gamma_measured <= run.resilience.gamma_target &&
                    run.resilience.eps_measured <= eps;
  rep["pass"] = pass;
  std::string csv = "edges,bad_mass,eps_at_gamma,message_side\n";
  for (const auto& s : run.resilience.subsets) {
    std::string name;
    for (std::size_t i = 0; i < s.subset.size(); ++i) name += (i ? "-" : "") + std::to_string(s.subset[i]);
    csv += (name.empty() ? "empty" : name) + "," + to_string(s.bad_mass) + "," + to_string(s.eps_at_gamma) + "," +
           to_string(s.message_side) + "\n";
  }
  write_file(c, "report.json", rep.dump(2) + "\n");
  write_file(c, "report.csv", csv);
  *c.out << net.name << " over GF(" << net.q << "), t=" << t << ": gamma=" << to_string(run.resilience.gamma_measured)
         << " eps=" << to_string(run.resilience.eps_measured) << " receivers decode="
         << (run.all_decode ? "yes" : "no") << '\n';
  return pass ? kPass : kViolation;
}

// ---- spectra ----

int cmd_spectra(const Context& c) {
  const double tol = c.config.value("tol", 1e-9);
  ojson rep = report_header(c, "spectra");
  auto list = ojson::array();
  std::ostringstream csv;
  csv << "family,size,N,d,lambda,iterations,residual\n" << std::setprecision(12);
  for (const auto& gj : c.config.at("graphs")) {
    const auto fam = gj.at("family").get<std::string>();
    const auto size = gj.at("size").get<std::uint32_t>();
    const auto g = expander::family_graph(fam, size);
    const auto s = expander::second_eigenvalue(g, tol);
    ojson o;
    o["family"] = fam;
    o["size"] = size;
    o["N"] = g.vertices();
    o["d"] = g.degree();
    o["lambda"] = s.lambda;
    o["iterations"] = s.iterations;
    o["residual"] = s.residual;
    list.push_back(o);
    csv << fam << ',' << size << ',' << g.vertices() << ',' << g.degree() << ',' << s.lambda << ',' << s.iterations
        << ',' << s.residual << '\n';
    *c.out << fam << "(" << size << "): lambda = " << std::setprecision(9) << s.lambda << '\n';
  }
  rep["graphs"] = list;
  write_file(c, "spectra.json", rep.dump(2) + "\n");
  write_file(c, "spectra.csv", csv.str());
  return kPass;
}

// ---- curves ----

int cmd_curves(const Context& c) {
  const auto& j = c.config;
  const unsigned q = j.value("q", 2u);
  const unsigned d = j.value("d", 64u);
  const double gamma = j.value("gamma", 0.0);
  const double delta_max = j.value("delta_max", 0.5);
  const std::size_t steps = j.value("steps", std::size_t{50});
  require(steps >= 1, Errc::DomainError, "needs at least one grid step");
  require(delta_max > 0 && delta_max < 1, Errc::DomainError, "delta_max must lie in (0, 1)");
  double lambda;
  if (j.contains("lambda"))
    lambda = j.at("lambda").get<double>();
  else
    lambda = expander::second_eigenvalue(graph_field(j)).lambda;
  std::ostringstream csv;
  csv << "delta,curve,rate\n" << std::setprecision(12);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double delta = delta_max * double(i) / double(steps);
    csv << delta << ",info_bound," << 1 - delta << '\n';
    csv << delta << ",kjs," << 1 - 2 * delta << '\n';
    if (lambda > 0 && lambda < 1) csv << delta << ",walk," << sfext::walk_rate(delta, d, lambda, gamma).rate << '\n';
    if (delta <= 1 - 1.0 / q) csv << delta << ",hq," << 1 - dists::hq(delta, q) << '\n';
  }
  write_file(c, "curves.csv", csv.str());
  if (c.out_dir.empty()) *c.out << csv.str();
  else *c.out << "wrote " << (steps + 1) << " grid points to " << (fs::path(c.out_dir) / "curves.csv").string() << '\n';
  return kPass;
}

// ---- vectors ----

ojson make_vectors(const Context& c) {
  const auto& pj = c.config.at("protocol");
  const auto p = protocol_from_config(pj, c.cap);
  const std::size_t count = c.config.value("count", std::size_t{16});
  Rng rng(c.seed);
  const std::uint64_t msgs = ipow(p.q, p.m);
  ojson v;
  v["protocol"] = pj;
  v["seed"] = c.seed;
  auto entries = ojson::array();
  for (std::size_t i = 0; i < count; ++i) {
    const Word x = index_to_word(rng.below(msgs), p.q, p.m);
    const std::uint64_t coin = rng.below(p.coins);
    ojson e;
    e["x"] = dists::word_to_string(x, p.q);
    e["coin"] = coin;
    e["y"] = dists::word_to_string(wiretap::encode_with_coin(p, x, coin), p.q);
    entries.push_back(e);
  }
  v["entries"] = entries;
  return v;
}

int check_vectors(const Context& c, const std::string& path) {
  const auto v = nlohmann::json::parse(read_path_or(path, *c.in));
  const auto p = protocol_from_config(v.at("protocol"), c.cap);
  std::size_t bad = 0, total = 0;
  for (const auto& e : v.at("entries")) {
    ++total;
    const Word x = dists::word_from_string(e.at("x").get<std::string>(), p.q);
    const Word y = dists::word_from_string(e.at("y").get<std::string>(), p.q);
    const Word enc = wiretap::encode_with_coin(p, x, e.at("coin").get<std::uint64_t>());
    if (enc != y || wiretap::decode(p, y) != x) ++bad;
  }
  *c.out << total - bad << "/" << total << " vectors match\n";
  return bad == 0 ? kPass : kViolation;
}

int cmd_vectors(const Context& c, const std::string& check) {
  if (!check.empty()) return check_vectors(c, check);
  const auto v = make_vectors(c);
  if (c.out_dir.empty())
    *c.out << v.dump(2) << '\n';
  else {
    write_file(c, "vectors.json", v.dump(2) + "\n");
    *c.out << "wrote " << v.at("entries").size() << " vectors\n";
  }
  return kPass;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wiretap protocols from invertible extractors"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  std::uint64_t cap = 0;
  unsigned jobs = 1;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--seed", seed, "Master RNG seed");
  app.add_option("--jobs", jobs, "Parallel verification workers")->check(CLI::PositiveNumber);
  app.add_option("--cap", cap, "Enumeration cap (entries)")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "Output directory for reports");

  std::string input, output, check;
  bool no_pad = false;
  auto* enc = app.add_subcommand("encode", "Encode a payload");
  enc->add_option("--in", input, "Payload file (default stdin)");
  enc->add_option("-o,--output", output, "Frame file (default stdout)");
  enc->add_flag("--no-pad", no_pad, "Reject payloads that do not fill whole blocks");
  auto* dec = app.add_subcommand("decode", "Decode a frame");
  dec->add_option("--in", input, "Frame file (default stdin)");
  dec->add_option("-o,--output", output, "Payload file (default stdout)");
  app.add_subcommand("verify", "Exact verification suite");
  app.add_subcommand("netsim", "Network-coding wiretap run");
  app.add_subcommand("spectra", "Second eigenvalues of graph families");
  app.add_subcommand("curves", "Rate versus resilience curves");
  auto* vec = app.add_subcommand("vectors", "Emit or check encoder test vectors");
  vec->add_option("--check", check, "Vector file to check");
  // subcommand options may also appear after the verb
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? kPass : kInputError;
  }

  Context c;
  c.out = &out;
  c.in = &in;
  c.jobs = jobs;
  c.out_dir = out_dir;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      require(bool(f), Errc::ParseError, "cannot read config " + config_path);
      try {
        c.config = nlohmann::json::parse(f);
      } catch (const nlohmann::json::exception& e) {
        fail(Errc::ParseError, std::string("config: ") + e.what());
      }
    } else {
      c.config = nlohmann::json::object();
    }
    c.config_hash = sha256_hex(c.config.dump());
    c.seed = app.count("--seed") ? seed : c.config.value("seed", std::uint64_t{1});
    c.cap = c.config.value("cap", kDefaultEnumerationCap);
    if (const char* env = std::getenv("WIRETAP_KIT_CAP")) {
      try {
        c.cap = std::stoull(env);
      } catch (const std::exception&) {
        fail(Errc::ParseError, "WIRETAP_KIT_CAP is not an integer");
      }
    }
    if (app.count("--cap")) c.cap = cap;
    require(c.cap > 0, Errc::DomainError, "the enumeration cap must be positive");

    const std::string verb = app.get_subcommands().front()->get_name();
    if (verb == "encode") return cmd_encode(c, input, output, !no_pad);
    if (verb == "decode") return cmd_decode(c, input, output);
    if (verb == "verify") return cmd_verify(c);
    if (verb == "netsim") return cmd_netsim(c);
    if (verb == "spectra") return cmd_spectra(c);
    if (verb == "curves") return cmd_curves(c);
    return cmd_vectors(c, check);
  } catch (const Error& e) {
    err << "error [" << errc_name(e.code()) << "]: " << e.what() << '\n';
    return e.code() == Errc::EnumerationCapExceeded ? kCapExceeded : kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error [ParseError]: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace wtk::cli
