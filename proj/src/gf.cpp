#include "wtk/gf.hpp"

#include <array>
#include <bit>

namespace wtk::gf {

namespace {

// Primitive polynomials over GF(2), index = degree.
constexpr std::array<std::uint32_t, 17> kPrimitive = {
    0,      0x3,    0x7,    0xB,    0x13,   0x25,   0x43,   0x89,   0x11D,
    0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
};

}  // namespace

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Field Field::prime(std::uint32_t p) {
  require(p < (1u << 31) && is_prime(p), Errc::DomainError, "field order " + std::to_string(p) + " is not a prime < 2^31");
  return Field(p, Kind::Prime, 1, 0);
}

Field Field::binary(unsigned e) {
  require(e >= 1 && e <= 16, Errc::DomainError, "GF(2^e) supports 1 <= e <= 16");
  return Field(1u << e, Kind::Binary, e, kPrimitive[e]);
}

Field Field::of_order(std::uint32_t q) {
  if (q >= 2 && std::has_single_bit(q)) return binary(static_cast<unsigned>(std::countr_zero(q)));
  return prime(q);
}

Elem Field::mul(Elem a, Elem b) const {
  if (kind_ == Kind::Prime) return static_cast<Elem>((std::uint64_t{a} * b) % q_);
  std::uint32_t acc = 0;
  std::uint32_t x = a;
  for (std::uint32_t y = b; y != 0; y >>= 1) {
    if (y & 1) acc ^= x;
    x <<= 1;
    if (x & q_) x ^= poly_;
  }
  return acc;
}

Elem Field::pow(Elem a, std::uint64_t k) const {
  Elem r = 1;
  while (k) {
    if (k & 1) r = mul(r, a);
    a = mul(a, a);
    k >>= 1;
  }
  return r;
}

Elem Field::inv(Elem a) const {
  require(a != 0 && a < q_, Errc::DomainError, "zero has no inverse");
  return pow(a, q_ - 2);
}

Matrix Matrix::from_rows(const std::vector<std::vector<Elem>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require(rows[r].size() == m.cols, Errc::DimensionMismatch, "ragged matrix rows");
    for (std::size_t c = 0; c < m.cols; ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Vector mul(const Field& f, const Matrix& m, std::span<const Elem> x) {
  require(x.size() == m.cols, Errc::DimensionMismatch, "matrix-vector shape mismatch");
  Vector out(m.rows, 0);
  for (std::size_t r = 0; r < m.rows; ++r) {
    Elem acc = 0;
    for (std::size_t c = 0; c < m.cols; ++c) acc = f.add(acc, f.mul(m.at(r, c), x[c]));
    out[r] = acc;
  }
  return out;
}

Matrix mul(const Field& f, const Matrix& a, const Matrix& b) {
  require(a.cols == b.rows, Errc::DimensionMismatch, "matrix-matrix shape mismatch");
  Matrix out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      Elem aik = a.at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) out.at(i, j) = f.add(out.at(i, j), f.mul(aik, b.at(k, j)));
    }
  return out;
}

Vector add(const Field& f, std::span<const Elem> a, std::span<const Elem> b) {
  require(a.size() == b.size(), Errc::DimensionMismatch, "vector length mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f.add(a[i], b[i]);
  return out;
}

Vector scale(const Field& f, Elem c, std::span<const Elem> a) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f.mul(c, a[i]);
  return out;
}

Matrix rref(const Field& f, Matrix m, std::vector<std::size_t>* pivots) {
  if (pivots) pivots->clear();
  std::size_t lead_row = 0;
  for (std::size_t col = 0; col < m.cols && lead_row < m.rows; ++col) {
    std::size_t sel = lead_row;
    while (sel < m.rows && m.at(sel, col) == 0) ++sel;
    if (sel == m.rows) continue;
    if (sel != lead_row)
      for (std::size_t c = 0; c < m.cols; ++c) std::swap(m.at(sel, c), m.at(lead_row, c));
    Elem inv = f.inv(m.at(lead_row, col));
    for (std::size_t c = 0; c < m.cols; ++c) m.at(lead_row, c) = f.mul(inv, m.at(lead_row, c));
    for (std::size_t r = 0; r < m.rows; ++r) {
      if (r == lead_row) continue;
      Elem factor = m.at(r, col);
      if (factor == 0) continue;
      for (std::size_t c = 0; c < m.cols; ++c)
        m.at(r, c) = f.sub(m.at(r, c), f.mul(factor, m.at(lead_row, c)));
    }
    if (pivots) pivots->push_back(col);
    ++lead_row;
  }
  return m;
}

std::size_t rank(const Field& f, const Matrix& m) {
  std::vector<std::size_t> piv;
  rref(f, m, &piv);
  return piv.size();
}

std::vector<Vector> kernel_basis(const Field& f, const Matrix& m) {
  std::vector<std::size_t> piv;
  Matrix r = rref(f, m, &piv);
  std::vector<bool> is_pivot(m.cols, false);
  for (auto p : piv) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = f.neg(r.at(i, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<AffineSolutionSet> solve_affine(const Field& f, const Matrix& m, std::span<const Elem> y) {
  require(y.size() == m.rows, Errc::DimensionMismatch, "right-hand side length differs from row count");
  for (Elem e : m.data) require(f.contains(e), Errc::DomainError, "matrix entry outside the field");
  for (Elem e : y) require(f.contains(e), Errc::DomainError, "vector entry outside the field");

  Matrix aug(m.rows, m.cols + 1);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) aug.at(r, c) = m.at(r, c);
    aug.at(r, m.cols) = y[r];
  }
  std::vector<std::size_t> piv;
  Matrix red = rref(f, aug, &piv);
  if (!piv.empty() && piv.back() == m.cols) return std::nullopt;

  AffineSolutionSet sol;
  sol.particular.assign(m.cols, 0);
  for (std::size_t i = 0; i < piv.size(); ++i) sol.particular[piv[i]] = red.at(i, m.cols);
  sol.kernel = kernel_basis(f, m);
  return sol;
}

Vector affine_member(const Field& f, const AffineSolutionSet& sol, std::span<const Elem> coeffs) {
  require(coeffs.size() == sol.kernel.size(), Errc::DimensionMismatch, "one coefficient per kernel vector");
  Vector x = sol.particular;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    for (std::size_t c = 0; c < x.size(); ++c) x[c] = f.add(x[c], f.mul(coeffs[i], sol.kernel[i][c]));
  }
  return x;
}

Vector sample_affine(const Field& f, const AffineSolutionSet& sol, Rng& rng) {
  Vector coeffs(sol.kernel.size());
  for (auto& c : coeffs) c = static_cast<Elem>(rng.below(f.order()));
  return affine_member(f, sol, coeffs);
}

BigInt cardinality(const Field& f, const AffineSolutionSet& sol) {
  BigInt r = 1;
  for (std::size_t i = 0; i < sol.dimension(); ++i) r *= f.order();
  return r;
}

}  // namespace wtk::gf
