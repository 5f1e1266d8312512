#include "wtk/dists.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace wtk::dists {

ExactDist::ExactDist(unsigned d, std::size_t n, std::map<std::uint64_t, Rational> probs, std::uint64_t cap)
    : d_(d), n_(n), space_(0), cap_(cap) {
  require(d >= 2, Errc::DomainError, "alphabet needs at least two symbols");
  space_ = checked_pow(d, n, cap);
  Rational total = 0;
  for (auto it = probs.begin(); it != probs.end();) {
    require(it->first < space_, Errc::OutOfRange, "probability entry outside Σ^n");
    require(it->second >= 0, Errc::DomainError, "negative probability");
    total += it->second;
    if (it->second == 0)
      it = probs.erase(it);
    else
      ++it;
  }
  require(total == 1, Errc::DomainError, "probabilities sum to " + to_string(total) + ", not 1");
  probs_ = std::move(probs);
}

ExactDist ExactDist::uniform(unsigned d, std::size_t n, std::uint64_t cap) {
  std::uint64_t size = checked_pow(d, n, cap);
  std::map<std::uint64_t, Rational> p;
  Rational each(1, size);
  for (std::uint64_t i = 0; i < size; ++i) p.emplace_hint(p.end(), i, each);
  return ExactDist(d, n, std::move(p), cap);
}

ExactDist ExactDist::point_mass(unsigned d, std::span<const Symbol> w, std::uint64_t cap) {
  return ExactDist(d, w.size(), {{word_to_index(w, d), Rational(1)}}, cap);
}

ExactDist ExactDist::flat(unsigned d, std::size_t n, std::span<const std::uint64_t> support, std::uint64_t cap) {
  require(!support.empty(), Errc::DomainError, "flat distribution needs a nonempty support");
  std::map<std::uint64_t, std::uint64_t> counts;
  for (auto s : support) ++counts[s];
  return from_counts(d, n, counts, cap);
}

ExactDist ExactDist::from_counts(unsigned d, std::size_t n, const std::map<std::uint64_t, std::uint64_t>& counts,
                                 std::uint64_t cap) {
  std::uint64_t total = 0;
  for (auto& [k, c] : counts) total += c;
  require(total > 0, Errc::DomainError, "all weights are zero");
  std::map<std::uint64_t, Rational> p;
  for (auto& [k, c] : counts)
    if (c) p.emplace_hint(p.end(), k, Rational(c, total));
  return ExactDist(d, n, std::move(p), cap);
}

Rational ExactDist::prob(std::uint64_t index) const {
  auto it = probs_.find(index);
  return it == probs_.end() ? Rational(0) : it->second;
}

Rational ExactDist::prob(std::span<const Symbol> w) const {
  require(w.size() == n_, Errc::ShapeMismatch, "word length differs from distribution length");
  return prob(word_to_index(w, d_));
}

namespace {

void require_same_shape(const ExactDist& a, const ExactDist& b) {
  require(a.alphabet() == b.alphabet() && a.length() == b.length(), Errc::ShapeMismatch,
          "distributions live on different spaces");
}

double log_base(const ExactDist& a, double base) { return std::log(base > 0 ? base : double(a.alphabet())); }

}  // namespace

Rational statistical_distance(const ExactDist& a, const ExactDist& b) {
  require_same_shape(a, b);
  Rational sum = 0;
  auto ia = a.support().begin(), ea = a.support().end();
  auto ib = b.support().begin(), eb = b.support().end();
  while (ia != ea || ib != eb) {
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      sum += ia->second;
      ++ia;
    } else if (ia == ea || ib->first < ia->first) {
      sum += ib->second;
      ++ib;
    } else {
      sum += abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return sum / 2;
}

Rational distance_from_uniform(const ExactDist& a) {
  Rational u(1, a.space_size());
  Rational sum = 0;
  for (auto& [k, p] : a.support()) sum += abs(p - u);
  sum += u * (a.space_size() - a.support().size());
  return sum / 2;
}

Rational linf_from_uniform(const ExactDist& a) {
  Rational u(1, a.space_size());
  Rational worst = a.support().size() < a.space_size() ? u : Rational(0);
  for (auto& [k, p] : a.support()) worst = std::max(worst, Rational(abs(p - u)));
  return worst;
}

double min_entropy(const ExactDist& a, double base) {
  Rational top = 0;
  for (auto& [k, p] : a.support()) top = std::max(top, p);
  return -std::log(to_double(top)) / log_base(a, base);
}

double shannon_entropy(const ExactDist& a, double base) {
  double h = 0;
  for (auto& [k, p] : a.support()) {
    double x = to_double(p);
    h -= x * std::log(x);
  }
  return std::max(0.0, h / log_base(a, base));
}

ExactDist condition(const ExactDist& a, std::span<const std::size_t> positions, std::span<const Symbol> w) {
  require(positions.size() == w.size(), Errc::ShapeMismatch, "one observed symbol per position");
  for (auto p : positions) require(p < a.length(), Errc::OutOfRange, "position outside the string");
  Rational mass = 0;
  std::map<std::uint64_t, Rational> kept;
  for (auto& [k, p] : a.support()) {
    Word x = index_to_word(k, a.alphabet(), a.length());
    bool match = true;
    for (std::size_t i = 0; i < positions.size() && match; ++i) match = x[positions[i]] == w[i];
    if (!match) continue;
    mass += p;
    kept.emplace_hint(kept.end(), k, p);
  }
  require(mass > 0, Errc::ZeroProbabilityEvent, "conditioning event has probability zero");
  for (auto& [k, p] : kept) p /= mass;
  return ExactDist(a.alphabet(), a.length(), std::move(kept), a.cap());
}

ExactDist pushforward(const ExactDist& a, unsigned d_out, std::size_t m_out, const WordMap& f) {
  std::map<std::uint64_t, Rational> out;
  for (auto& [k, p] : a.support()) {
    Word y = f(index_to_word(k, a.alphabet(), a.length()));
    require(y.size() == m_out, Errc::ShapeMismatch, "map returned a word of the wrong length");
    out[word_to_index(y, d_out)] += p;
  }
  return ExactDist(d_out, m_out, std::move(out), a.cap());
}

std::pair<Rational, Rational> duality_gap(const ExactDist& joint, std::size_t split) {
  require(split <= joint.length(), Errc::ShapeMismatch, "split beyond the joint length");
  const unsigned d = joint.alphabet();
  const std::uint64_t y_size = ipow(d, joint.length() - split);
  std::map<std::uint64_t, Rational> px, py;
  std::map<std::uint64_t, std::map<std::uint64_t, Rational>> by_x, by_y;
  for (auto& [k, p] : joint.support()) {
    std::uint64_t x = k / y_size, y = k % y_size;
    px[x] += p;
    py[y] += p;
    by_x[x][y] += p;
    by_y[y][x] += p;
  }
  // E_V[δ(U|V=v, U)] computed from the conditional tables
  auto expected = [](const std::map<std::uint64_t, Rational>& pv,
                     const std::map<std::uint64_t, std::map<std::uint64_t, Rational>>& rows,
                     const std::map<std::uint64_t, Rational>& pu) {
    Rational total = 0;
    for (auto& [v, mass] : pv) {
      const auto& row = rows.at(v);
      Rational dist = 0;
      for (auto& [u, q] : pu) {
        auto it = row.find(u);
        Rational cond = it == row.end() ? Rational(0) : Rational(it->second / mass);
        dist += abs(cond - q);
      }
      total += mass * dist / 2;
    }
    return total;
  };
  return {expected(py, by_y, px), expected(px, by_x, py)};
}

MassBound conditioning_mass_bound(const ExactDist& a, const std::vector<std::vector<std::uint64_t>>& blocks) {
  std::vector<bool> seen(a.space_size(), false);
  std::uint64_t covered = 0;
  for (const auto& b : blocks) {
    require(!b.empty(), Errc::NotAPartition, "empty block");
    for (auto s : b) {
      require(s < a.space_size(), Errc::NotAPartition, "block element outside the sample space");
      require(!seen[s], Errc::NotAPartition, "blocks overlap");
      seen[s] = true;
      ++covered;
    }
  }
  require(covered == a.space_size(), Errc::NotAPartition, "blocks do not cover the sample space");

  MassBound out;
  out.gamma = distance_from_uniform(a);
  for (const auto& b : blocks) {
    Rational pi = 0;
    for (auto s : b) pi += a.prob(s);
    if (pi == 0) continue;
    Rational u(1, b.size());
    Rational dist = 0;
    for (auto s : b) dist += abs(a.prob(s) / pi - u);
    out.value += pi * dist / 2;
  }
  return out;
}

bool shannon_floor_check(const ExactDist& a) {
  require(a.space_size() > 4, Errc::PreconditionViolated, "needs |S| > 4");
  Rational eps = distance_from_uniform(a);
  require(eps <= Rational(1, 4), Errc::PreconditionViolated, "needs ε <= 1/4, got " + to_string(eps));
  double h = shannon_entropy(a, 2.0);
  double floor = std::log2(double(a.space_size())) * (1.0 - to_double(eps));
  return h >= floor - 1e-12;
}

double hq(double x, unsigned q) {
  require(q >= 2, Errc::DomainError, "h_q needs q >= 2");
  require(x >= 0.0 && x <= 1.0, Errc::DomainError, "h_q is defined on [0, 1]");
  const double lq = std::log(double(q));
  auto term = [&](double p) { return p > 0 ? -p * std::log(p) / lq : 0.0; };
  return x * std::log(double(q - 1)) / lq + term(x) + term(1.0 - x);
}

std::string word_to_string(std::span<const Symbol> w, unsigned d) {
  static constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string s;
  if (d <= 36) {
    for (Symbol c : w) s.push_back(kDigits[c]);
    return s;
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s.push_back('.');
    s += std::to_string(w[i]);
  }
  return s;
}

Word word_from_string(const std::string& s, unsigned d) {
  Word w;
  if (d <= 36) {
    for (char c : s) {
      Symbol v;
      if (c >= '0' && c <= '9')
        v = Symbol(c - '0');
      else if (c >= 'a' && c <= 'z')
        v = Symbol(c - 'a' + 10);
      else
        fail(Errc::ParseError, "bad symbol character in '" + s + "'");
      require(v < d, Errc::OutOfRange, "symbol outside alphabet in '" + s + "'");
      w.push_back(v);
    }
    return w;
  }
  std::size_t pos = 0;
  while (pos <= s.size() && !s.empty()) {
    std::size_t dot = s.find('.', pos);
    std::string part = s.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    Symbol v = static_cast<Symbol>(std::stoul(part));
    require(v < d, Errc::OutOfRange, "symbol outside alphabet in '" + s + "'");
    w.push_back(v);
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  return w;
}

nlohmann::ordered_json to_json(const ExactDist& a) {
  nlohmann::ordered_json j;
  j["d"] = a.alphabet();
  j["n"] = a.length();
  auto entries = nlohmann::ordered_json::array();
  for (auto& [k, p] : a.support())
    entries.push_back({word_to_string(index_to_word(k, a.alphabet(), a.length()), a.alphabet()), to_string(p)});
  j["entries"] = std::move(entries);
  return j;
}

ExactDist dist_from_json(const nlohmann::json& j, std::uint64_t cap) {
  try {
    unsigned d = j.at("d").get<unsigned>();
    std::size_t n = j.at("n").get<std::size_t>();
    std::map<std::uint64_t, Rational> probs;
    for (const auto& e : j.at("entries")) {
      Word w = word_from_string(e.at(0).get<std::string>(), d);
      require(w.size() == n, Errc::ShapeMismatch, "entry string has the wrong length");
      auto [it, fresh] = probs.emplace(word_to_index(w, d), parse_rational(e.at(1).get<std::string>()));
      require(fresh, Errc::ParseError, "duplicate entry");
    }
    return ExactDist(d, n, std::move(probs), cap);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, e.what());
  }
}

}  // namespace wtk::dists
