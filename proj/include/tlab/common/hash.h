#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace tlab {

// 64-bit FNV-1a. Used for content and config fingerprints, not security.
std::uint64_t fnv1a64(std::string_view data);
// 16 lowercase hex digits.
std::string hex64(std::uint64_t value);
inline std::string fingerprint(std::string_view data) { return hex64(fnv1a64(data)); }

}  // namespace tlab
