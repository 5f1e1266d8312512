#pragma once

// Linear seeded extractors over GF(2): for each seed z the extractor is the
// matrix M_z. Non-surjective seeds fall back to a fixed projection.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wtk/common.hpp"
#include "wtk/gf2.hpp"
#include "wtk/rng.hpp"
#include "wtk/sources.hpp"

namespace wtk::linext {

using gf2::BitMatrix;
using gf2::BitVec;

class LinearSeededExtractor {
 public:
  /// One m x n matrix per seed; the seed space has 2^t elements.
  LinearSeededExtractor(std::size_t n, std::size_t t, std::size_t m, std::vector<BitMatrix> matrices,
                        std::string provenance);

  std::size_t n() const { return n_; }
  std::size_t t() const { return t_; }
  std::size_t m() const { return m_; }
  std::uint64_t seeds() const { return std::uint64_t{1} << t_; }
  const std::string& provenance() const { return provenance_; }

  const BitMatrix& raw_matrix(std::uint64_t z) const;
  const BitMatrix& effective_matrix(std::uint64_t z) const;
  bool uses_fallback(std::uint64_t z) const;
  /// Fraction of seeds whose raw matrix is not surjective.
  Rational fallback_fraction() const;

 private:
  std::size_t n_, t_, m_;
  std::string provenance_;
  std::vector<BitMatrix> raw_;
  std::vector<BitMatrix> eff_;
  std::vector<bool> fallback_;
};

/// Full Toeplitz family: seed bits s_0..s_{n+m-2}, M[i][j] = s_{i-j+n-1}.
LinearSeededExtractor toeplitz_family(std::size_t n, std::size_t m);
/// 2^t Toeplitz matrices whose diagonal strings are drawn from Rng(master_seed).
LinearSeededExtractor toeplitz_subfamily(std::size_t n, std::size_t m, std::size_t t, std::uint64_t master_seed);
/// 2^t uniformly random matrices drawn from Rng(master_seed).
LinearSeededExtractor random_family(std::size_t n, std::size_t m, std::size_t t, std::uint64_t master_seed);
/// Every seed maps to the projection onto the first m coordinates.
LinearSeededExtractor projection_family(std::size_t n, std::size_t m, std::size_t t);

/// Toeplitz matrix for the diagonal string `diag` (bit k = s_k).
BitMatrix toeplitz_matrix(std::size_t n, std::size_t m, std::uint64_t diag);

BitVec lse_extract(const LinearSeededExtractor& e, BitVec x, std::uint64_t z);

/// Coins: seed z in the low t bits, then kernel coefficients. 2^(t + n - m) in total.
std::uint64_t lse_coin_count(const LinearSeededExtractor& e);
std::pair<std::uint64_t, BitVec> lse_invert_coin(const LinearSeededExtractor& e, BitVec y, std::uint64_t coin);
std::pair<std::uint64_t, BitVec> lse_invert(const LinearSeededExtractor& e, BitVec y, Rng& rng);

/// delta((E(X, Z), Z), U) = average over seeds of delta(E(X, z), U_m), for X uniform on `points`.
Rational strong_error(const LinearSeededExtractor& e, std::span<const BitVec> points);
/// Per-seed distances delta(E(X, z), U_m).
std::vector<Rational> seed_errors(const LinearSeededExtractor& e, std::span<const BitVec> points);
/// Max of strong_error over the sources (symbol-fixing with d = 2, affine, or general over {0,1}^n).
Rational strongness_measure(const LinearSeededExtractor& e, const std::vector<dists::SourceDescriptor>& sources,
                            std::uint64_t cap = kDefaultEnumerationCap);

/// delta of the uniform distribution over `points` pushed through x -> f(x) in m bits,
/// from integer counts.
Rational distance_of_counts(std::span<const std::uint64_t> counts, std::uint64_t total);

}  // namespace wtk::linext
