#pragma once

// Weak-source descriptors and exhaustive enumerators over desk-scale families.

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "wtk/common.hpp"
#include "wtk/dists.hpp"
#include "wtk/gf2.hpp"

namespace wtk::dists {

/// Free coordinates are uniform; the rest take the value in `fixed`.
struct SymbolFixingSource {
  unsigned d = 2;
  std::size_t n = 0;
  std::vector<std::size_t> free;  // sorted, distinct
  Word fixed;                     // length n; entries at free positions are ignored
};

/// Uniform on offset + span(basis) inside GF(2)^n. Coordinate i is bit i.
struct AffineSource {
  std::size_t n = 0;
  std::vector<gf2::BitVec> basis;
  gf2::BitVec offset = 0;
};

/// Explicit distribution with a declared min-entropy floor (d-ary symbols).
struct GeneralSource {
  ExactDist dist;
  double k = 0;
};

using SourceDescriptor = std::variant<SymbolFixingSource, AffineSource, GeneralSource>;

/// Checks the descriptor invariants; throws DomainError / ShapeMismatch.
void validate(const SourceDescriptor& s);

/// Number of uniform coordinates (symbol-fixing), dimension (affine), or the floor (general).
double entropy_k(const SourceDescriptor& s);

unsigned alphabet(const SourceDescriptor& s);
std::size_t length(const SourceDescriptor& s);

/// Support as big-endian string indices; each point has equal mass except for GeneralSource.
std::vector<std::uint64_t> support_indices(const SymbolFixingSource& s);
/// Support as packed bit vectors (bit i = coordinate i).
std::vector<gf2::BitVec> support_points(const AffineSource& s);

ExactDist to_dist(const SourceDescriptor& s, std::uint64_t cap = kDefaultEnumerationCap);

/// Packed GF(2) vector <-> big-endian string index over {0,1}^n.
std::uint64_t bits_to_index(gf2::BitVec v, std::size_t n);
gf2::BitVec index_to_bits(std::uint64_t index, std::size_t n);

/// Visits every (n,k)_d symbol-fixing source: C(n,k) * d^(n-k) of them.
void for_each_symbol_fixing(unsigned d, std::size_t n, std::size_t k,
                            const std::function<void(const SymbolFixingSource&)>& visit);

/// Visits every k-dimensional linear subspace of GF(2)^n once, as an RREF basis,
/// together with the coordinates that are not pivots (coset representatives live there).
void for_each_subspace(std::size_t n, std::size_t k,
                       const std::function<void(const std::vector<gf2::BitVec>& basis,
                                                const std::vector<std::size_t>& non_pivots)>& visit);

/// Visits every k-dimensional affine subspace of GF(2)^n exactly once.
void for_each_affine(std::size_t n, std::size_t k, const std::function<void(const AffineSource&)>& visit);

/// Exact max over every (n,k)_d symbol-fixing source of delta(f(X), U), where f is
/// given as a table over all d^n inputs with values in [out_size).
Rational symbol_fixing_error(unsigned d, std::size_t n, std::size_t k, std::span<const std::uint64_t> table,
                             std::uint64_t out_size, std::uint64_t cap = kDefaultEnumerationCap);

/// Gaussian binomial [n choose k]_2 times 2^(n-k).
std::uint64_t affine_family_size(std::size_t n, std::size_t k);

}  // namespace wtk::dists
