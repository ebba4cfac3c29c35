#pragma once

#include <cstdint>
#include <string>

namespace fracmatch {

/// SHA-256 of a byte string, as lowercase hex. Self-contained implementation
/// (FIPS 180-4); test vectors live in the unit suite.
std::string sha256_hex(const std::string& data);

}  // namespace fracmatch
