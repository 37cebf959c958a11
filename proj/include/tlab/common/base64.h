#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tlab::base64 {

// Standard alphabet with '=' padding.
std::string encode(std::span<const std::uint8_t> bytes);
// Throws MalformedFile on characters outside the alphabet or bad padding.
std::vector<std::uint8_t> decode(std::string_view text);

// Little-endian float32 packing used by the embedding and checkpoint formats.
std::vector<std::uint8_t> pack_f32_le(std::span<const float> values);
std::vector<float> unpack_f32_le(std::span<const std::uint8_t> bytes);

}  // namespace tlab::base64
