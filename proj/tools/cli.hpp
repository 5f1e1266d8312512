#pragma once

// Command-line verbs. Kept in a library so tests can drive them in-process.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "wtk/wiretap.hpp"

namespace wtk::cli {

enum ExitCode : int { kPass = 0, kViolation = 1, kInputError = 2, kCapExceeded = 3 };

/// argv[0] is the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

std::string sha256_hex(std::string_view data);
/// SHA-256 of the canonical (sorted-key) dump of the protocol description.
std::string params_hash(const nlohmann::json& protocol);
std::string seed_commitment(std::uint64_t seed);

/// {kind: one-time-pad | identity | sfext | rounded | iaext, ...}
wiretap::WiretapProtocol protocol_from_config(const nlohmann::json& j, std::uint64_t cap);

/// Bytes to q-ary symbols (q = 2^e, most significant bit first), zero-padded to whole blocks of m.
std::vector<Word> pack_payload(const std::string& bytes, unsigned q, std::size_t m, bool pad);
std::string unpack_payload(const std::vector<Word>& blocks, unsigned q, std::size_t payload_bytes);

}  // namespace wtk::cli
