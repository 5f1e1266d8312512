#pragma once

// Finite-field arithmetic and dense linear algebra over prime fields and
// GF(2^e), e <= 16.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wtk/common.hpp"
#include "wtk/rng.hpp"

namespace wtk::gf {

using Elem = std::uint32_t;

class Field {
 public:
  enum class Kind { Prime, Binary };

  /// GF(p) for prime p < 2^31.
  static Field prime(std::uint32_t p);
  /// GF(2^e), 1 <= e <= 16, reduced modulo a fixed primitive polynomial.
  static Field binary(unsigned e);
  /// Picks the representation from the order: prime, or a power of two.
  static Field of_order(std::uint32_t q);

  std::uint32_t order() const { return q_; }
  std::uint32_t characteristic() const { return kind_ == Kind::Prime ? q_ : 2; }
  Kind kind() const { return kind_; }
  unsigned degree() const { return e_; }
  std::uint32_t modulus() const { return poly_; }

  Elem add(Elem a, Elem b) const {
    if (kind_ == Kind::Binary) return a ^ b;
    std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<Elem>(s >= q_ ? s - q_ : s);
  }
  Elem neg(Elem a) const {
    if (kind_ == Kind::Binary || a == 0) return a;
    return q_ - a;
  }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const;
  /// Multiplicative inverse; DomainError for zero.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t k) const;

  bool contains(Elem a) const { return a < q_; }
  bool operator==(const Field& o) const { return q_ == o.q_ && kind_ == o.kind_; }

 private:
  Field(std::uint32_t q, Kind kind, unsigned e, std::uint32_t poly) : q_(q), kind_(kind), e_(e), poly_(poly) {}

  std::uint32_t q_;
  Kind kind_;
  unsigned e_;
  std::uint32_t poly_;
};

bool is_prime(std::uint32_t n);

/// Dense row-major matrix of field elements.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Elem> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
  static Matrix from_rows(const std::vector<std::vector<Elem>>& rows);
  static Matrix identity(std::size_t n);

  Elem& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  Elem at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const Elem> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

  bool operator==(const Matrix&) const = default;
};

using Vector = std::vector<Elem>;

/// x = particular + span(kernel); every member solves the defining system.
struct AffineSolutionSet {
  Vector particular;
  std::vector<Vector> kernel;

  std::size_t dimension() const { return kernel.size(); }
};

Vector mul(const Field& f, const Matrix& m, std::span<const Elem> x);
Matrix mul(const Field& f, const Matrix& a, const Matrix& b);
Vector add(const Field& f, std::span<const Elem> a, std::span<const Elem> b);
Vector scale(const Field& f, Elem c, std::span<const Elem> a);

/// Reduced row echelon form, first-nonzero pivoting, deterministic.
Matrix rref(const Field& f, Matrix m, std::vector<std::size_t>* pivots = nullptr);
std::size_t rank(const Field& f, const Matrix& m);
/// Basis of {x : Mx = 0}, one vector per free column, in column order.
std::vector<Vector> kernel_basis(const Field& f, const Matrix& m);

/// All solutions of Mx = y, or nullopt when the system is inconsistent.
std::optional<AffineSolutionSet> solve_affine(const Field& f, const Matrix& m, std::span<const Elem> y);

/// Member of `sol` selected by explicit kernel coefficients.
Vector affine_member(const Field& f, const AffineSolutionSet& sol, std::span<const Elem> coeffs);
/// Uniform member of `sol`: one uniform coefficient per kernel basis vector.
Vector sample_affine(const Field& f, const AffineSolutionSet& sol, Rng& rng);

/// q^dim as an exact integer.
BigInt cardinality(const Field& f, const AffineSolutionSet& sol);

}  // namespace wtk::gf
