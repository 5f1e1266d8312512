#pragma once

// Packed GF(2) linear algebra for vectors of at most 64 coordinates.
// Coordinate i of a vector lives in bit i.

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wtk/common.hpp"
#include "wtk/gf.hpp"
#include "wtk/rng.hpp"

namespace wtk::gf2 {

using BitVec = std::uint64_t;

inline unsigned parity(BitVec v) { return static_cast<unsigned>(std::popcount(v) & 1); }
inline BitVec low_mask(std::size_t n) { return n >= 64 ? ~BitVec{0} : ((BitVec{1} << n) - 1); }

struct BitMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<BitVec> row;  // row[r] holds the r-th row

  BitMatrix() = default;
  BitMatrix(std::size_t r, std::size_t c);

  static BitMatrix identity_block(std::size_t m, std::size_t n);  // projection onto the first m coordinates
  static BitMatrix random(std::size_t m, std::size_t n, Rng& rng);

  bool get(std::size_t r, std::size_t c) const { return (row[r] >> c) & 1; }
  void set(std::size_t r, std::size_t c, bool v);

  bool operator==(const BitMatrix&) const = default;
};

/// y_r = <row_r, x>.
BitVec mul(const BitMatrix& m, BitVec x);

std::size_t rank(const BitMatrix& m);
std::size_t rank(std::span<const BitVec> vectors);

struct AffineSolutionSet {
  BitVec particular = 0;
  std::vector<BitVec> kernel;

  std::size_t dimension() const { return kernel.size(); }
  /// particular XOR the kernel vectors selected by the low bits of `coeffs`.
  BitVec member(std::uint64_t coeffs) const;
};

std::optional<AffineSolutionSet> solve_affine(const BitMatrix& m, BitVec y);
std::vector<BitVec> kernel_basis(const BitMatrix& m);

/// True iff `points` (distinct) is exactly an affine subspace of GF(2)^n.
bool is_affine_subspace(std::span<const BitVec> points);

gf::Matrix to_matrix(const BitMatrix& m);
BitMatrix from_matrix(const gf::Matrix& m);

/// Symbol word (values 0/1) <-> packed vector.
BitVec pack(std::span<const Symbol> bits);
Word unpack(BitVec v, std::size_t n);

}  // namespace wtk::gf2
