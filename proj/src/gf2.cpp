#include "wtk/gf2.hpp"

#include <algorithm>

namespace wtk::gf2 {

BitMatrix::BitMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), row(r, 0) {
  require(c <= 64, Errc::DomainError, "packed GF(2) matrices have at most 64 columns");
}

BitMatrix BitMatrix::identity_block(std::size_t m, std::size_t n) {
  require(m <= n, Errc::DomainError, "projection needs m <= n");
  BitMatrix p(m, n);
  for (std::size_t i = 0; i < m; ++i) p.row[i] = BitVec{1} << i;
  return p;
}

BitMatrix BitMatrix::random(std::size_t m, std::size_t n, Rng& rng) {
  BitMatrix p(m, n);
  for (auto& r : p.row) r = rng() & low_mask(n);
  return p;
}

void BitMatrix::set(std::size_t r, std::size_t c, bool v) {
  if (v)
    row[r] |= BitVec{1} << c;
  else
    row[r] &= ~(BitVec{1} << c);
}

BitVec mul(const BitMatrix& m, BitVec x) {
  BitVec y = 0;
  for (std::size_t r = 0; r < m.rows; ++r) y |= BitVec{parity(m.row[r] & x)} << r;
  return y;
}

std::size_t rank(std::span<const BitVec> vectors) {
  // xor basis keyed by highest set bit
  std::array<BitVec, 64> basis{};
  std::size_t r = 0;
  for (BitVec v : vectors) {
    while (v) {
      int hb = 63 - std::countl_zero(v);
      if (!basis[hb]) {
        basis[hb] = v;
        ++r;
        break;
      }
      v ^= basis[hb];
    }
  }
  return r;
}

std::size_t rank(const BitMatrix& m) { return rank(std::span<const BitVec>(m.row)); }

namespace {

// Row-reduces [m | y] in place with first-nonzero pivoting; returns pivot columns.
std::vector<std::size_t> reduce(std::vector<BitVec>& rows, std::vector<unsigned>& rhs, std::size_t cols) {
  std::vector<std::size_t> piv;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < cols && lead < rows.size(); ++c) {
    std::size_t sel = lead;
    while (sel < rows.size() && !((rows[sel] >> c) & 1)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[lead]);
    std::swap(rhs[sel], rhs[lead]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != lead && ((rows[r] >> c) & 1)) {
        rows[r] ^= rows[lead];
        rhs[r] ^= rhs[lead];
      }
    }
    piv.push_back(c);
    ++lead;
  }
  return piv;
}

}  // namespace

std::vector<BitVec> kernel_basis(const BitMatrix& m) {
  std::vector<BitVec> rows = m.row;
  std::vector<unsigned> rhs(rows.size(), 0);
  auto piv = reduce(rows, rhs, m.cols);
  std::vector<bool> is_pivot(m.cols, false);
  for (auto p : piv) is_pivot[p] = true;
  std::vector<BitVec> basis;
  for (std::size_t free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    BitVec v = BitVec{1} << free;
    for (std::size_t i = 0; i < piv.size(); ++i)
      if ((rows[i] >> free) & 1) v |= BitVec{1} << piv[i];
    basis.push_back(v);
  }
  return basis;
}

std::optional<AffineSolutionSet> solve_affine(const BitMatrix& m, BitVec y) {
  require(m.rows <= 64 && (m.rows == 64 || (y >> m.rows) == 0), Errc::DimensionMismatch,
          "right-hand side has bits beyond the row count");
  std::vector<BitVec> rows = m.row;
  std::vector<unsigned> rhs(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) rhs[r] = (y >> r) & 1;
  auto piv = reduce(rows, rhs, m.cols);
  for (std::size_t r = piv.size(); r < rows.size(); ++r)
    if (rhs[r]) return std::nullopt;
  AffineSolutionSet sol;
  for (std::size_t i = 0; i < piv.size(); ++i)
    if (rhs[i]) sol.particular |= BitVec{1} << piv[i];
  sol.kernel = kernel_basis(m);
  return sol;
}

BitVec AffineSolutionSet::member(std::uint64_t coeffs) const {
  BitVec x = particular;
  for (std::size_t i = 0; i < kernel.size(); ++i)
    if ((coeffs >> i) & 1) x ^= kernel[i];
  return x;
}

bool is_affine_subspace(std::span<const BitVec> points) {
  if (points.empty()) return false;
  const BitVec origin = points[0];
  std::vector<BitVec> diffs;
  diffs.reserve(points.size());
  for (BitVec p : points) diffs.push_back(p ^ origin);
  std::size_t r = rank(diffs);
  if (r >= 64 || points.size() != (std::size_t{1} << r)) return false;
  // distinctness: with |points| = 2^r and all inside origin + span, equality holds iff distinct
  std::vector<BitVec> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

gf::Matrix to_matrix(const BitMatrix& m) {
  gf::Matrix out(m.rows, m.cols);
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) out.at(r, c) = m.get(r, c) ? 1 : 0;
  return out;
}

BitMatrix from_matrix(const gf::Matrix& m) {
  BitMatrix out(m.rows, m.cols);
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) {
      require(m.at(r, c) <= 1, Errc::DomainError, "entry is not a bit");
      out.set(r, c, m.at(r, c) == 1);
    }
  return out;
}

BitVec pack(std::span<const Symbol> bits) {
  require(bits.size() <= 64, Errc::ShapeMismatch, "more than 64 bits");
  BitVec v = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    require(bits[i] <= 1, Errc::OutOfRange, "symbol is not a bit");
    v |= BitVec{bits[i]} << i;
  }
  return v;
}

Word unpack(BitVec v, std::size_t n) {
  Word w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = (v >> i) & 1;
  return w;
}

}  // namespace wtk::gf2
