#pragma once

// Wiretap-then-ECC composition, linear intruder observations, and the general
// wiretap protocol with a side channel against arbitrary Boolean observations.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "wtk/common.hpp"
#include "wtk/gf.hpp"
#include "wtk/gf2.hpp"
#include "wtk/linext.hpp"
#include "wtk/rng.hpp"
#include "wtk/wiretap.hpp"

namespace wtk::channels {

enum class CodeKind { Hamming, ReedSolomon };

struct LinearCode {
  CodeKind kind = CodeKind::Hamming;
  gf::Field field = gf::Field::prime(2);
  std::size_t N = 0;
  std::size_t K = 0;
  gf::Matrix generator;            // K x N, codeword = message * generator
  std::size_t blocks = 1;          // Hamming: direct sum of this many (7,4) blocks
  std::vector<gf::Elem> points;    // Reed-Solomon evaluation points
  std::size_t d_min = 0;
  std::size_t radius = 0;          // floor((d_min - 1) / 2)

  double rate() const { return double(K) / double(N); }
};

/// Systematic Hamming(7,4); blocks > 1 gives the direct sum (7b, 4b).
LinearCode hamming74(std::size_t blocks = 1);
/// Systematic Reed-Solomon over GF(q) at points 0, 1, ..., N-1 (as field elements); N <= q.
LinearCode reed_solomon(std::uint32_t q, std::size_t N, std::size_t K);
/// {kind: "hamming" | "reed-solomon", N, K, q}
LinearCode code_from_json(const nlohmann::json& j);

Word code_encode(const LinearCode& c, std::span<const Symbol> msg);
/// Unique decoding up to the radius; TooManyErrors when the received word is not within it.
Word code_decode(const LinearCode& c, std::span<const Symbol> received);

/// Wiretap encoder followed by the code; decoding runs the code decoder first.
wiretap::WiretapProtocol compose(const wiretap::WiretapProtocol& p, const LinearCode& c);
Word compose_encode(const wiretap::WiretapProtocol& p, const LinearCode& c, std::span<const Symbol> x, Rng& rng);
Word compose_decode(const LinearCode& c, const wiretap::WiretapProtocol& p, std::span<const Symbol> y);

struct LinearObservationReport {
  std::size_t rank = 0;
  std::vector<wiretap::Observation> observations;  // over w = L * codeword
  Rational max_distance;
  bool affine_checked = false;    // GF(2) only
  bool conditional_affine = true; // every (protocol output | w) is flat on an affine subspace
  std::size_t min_conditional_dim = 0;
};

/// L is an r x N matrix over the code's field.
LinearObservationReport linear_observation_report(const wiretap::WiretapProtocol& p, const LinearCode& c,
                                                  const gf::Matrix& L, std::uint64_t cap = kDefaultEnumerationCap);

// ---- general wiretap with a side channel ----

struct GeneralEncoding {
  gf2::BitVec main = 0;
  std::uint64_t side = 0;
};

std::uint64_t general_coin_count(const linext::LinearSeededExtractor& e);
GeneralEncoding general_encode_coin(const linext::LinearSeededExtractor& e, gf2::BitVec x, std::uint64_t coin);
GeneralEncoding general_encode(const linext::LinearSeededExtractor& e, gf2::BitVec x, Rng& rng);
gf2::BitVec general_decode(const linext::LinearSeededExtractor& e, gf2::BitVec main, std::uint64_t side);

/// Truth tables: c1 over the 2^n main strings, c2 over the 2^t seeds.
struct GeneralAdversary {
  std::string name;
  std::vector<std::uint32_t> c1;
  std::size_t c1_bits = 0;
  std::vector<std::uint32_t> c2;
  std::size_t c2_bits = 0;

  std::size_t t() const { return c1_bits + c2_bits; }
};

/// C1 reads the listed main-channel bits.
std::vector<std::uint32_t> projection_table(std::size_t n, const std::vector<std::size_t>& bits);
/// C1 outputs <mask_j, main> for each mask.
std::vector<std::uint32_t> parity_table(std::size_t n, const std::vector<gf2::BitVec>& masks);
/// C1 outputs bit `bit` of the decoder run with a fixed guessed seed.
std::vector<std::uint32_t> decoder_probe_table(const linext::LinearSeededExtractor& e, std::uint64_t guess,
                                               std::size_t bit);
/// C2 reveals the seed.
std::vector<std::uint32_t> full_seed_table(std::size_t t);

/// {c1: hex, c2: hex, t, c1_bits?, c2_bits?}; entries are fixed-width hex digits.
GeneralAdversary adversary_from_json(const nlohmann::json& j, std::size_t n, std::size_t seed_bits);
nlohmann::ordered_json to_json(const GeneralAdversary& a);

enum class SideChannel { Private, Public };

struct GeneralReport {
  double alpha = 0;
  double delta = 0;                 // c1_bits / n
  double threshold = 0;             // 2^(n (1 - delta - alpha))
  Rational classifier_mass;         // Pr[C1(main) has fewer preimages than the threshold]
  double classifier_limit = 0;      // 2^(-alpha n)
  Rational eps_seed;                // max over good preimage sets of min{eps : Pr_z[delta_z > eps] <= eps}
  Rational leakage;                 // Pr[delta(X | observation, U) > eps_seed]
  Rational max_distance;
  std::vector<wiretap::Observation> observations;

  bool classifier_ok() const { return to_double(classifier_mass) <= classifier_limit; }
  bool leakage_bounded() const { return leakage <= classifier_mass + eps_seed; }
};

GeneralReport general_adversary_report(const linext::LinearSeededExtractor& e, const GeneralAdversary& a,
                                       double alpha = 0.125, SideChannel mode = SideChannel::Public,
                                       std::uint64_t cap = kDefaultEnumerationCap);

/// Smallest eps with Pr_z[delta_z > eps] <= eps, for per-seed distances.
Rational seed_good_epsilon(const std::vector<Rational>& per_seed);

}  // namespace wtk::channels
