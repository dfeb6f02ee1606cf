#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scenesmith {

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// Little-endian float32 packing used by the asset catalog.
std::string encode_f32_base64(std::span<const double> values);
std::vector<double> decode_f32_base64(std::string_view text);

}  // namespace scenesmith
