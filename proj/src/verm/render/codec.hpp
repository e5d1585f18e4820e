#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "verm/render/raster.hpp"

namespace verm {

/// RGBA8, non-interlaced. Bytes depend on the zlib build, so never hash
/// PNG output; compare RasterImage::content_hash instead.
std::vector<std::uint8_t> encode_png(const RasterImage& image);
/// Throws DataError on undecodable input.
RasterImage decode_png(std::span<const std::uint8_t> bytes);

void write_png(const std::filesystem::path& path, const RasterImage& image);
RasterImage read_png(const std::filesystem::path& path);

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws DataError on invalid input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace verm
