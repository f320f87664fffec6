#pragma once

#include <png.h>

#include <cstdint>
#include <string>
#include <vector>

#include "fractrans/error.hpp"
#include "fractrans/picture.hpp"

namespace fractrans {

/// Reads any PNG as 8-bit RGBA.
inline Picture read_png(const std::string& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw IoError("cannot read " + path + ": " + image.message);
  image.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError("cannot decode " + path + ": " + image.message);
  }
  Picture pic(static_cast<int>(image.width), static_cast<int>(image.height));
  for (std::size_t i = 0; i < pic.pixel_count(); ++i)
    pic.pixels()[i] = {buffer[4 * i], buffer[4 * i + 1], buffer[4 * i + 2], buffer[4 * i + 3]};
  return pic;
}

/// Writes 8-bit RGBA.
inline void write_png(const std::string& path, const Picture& pic) {
  std::vector<std::uint8_t> buffer(pic.pixel_count() * 4);
  for (std::size_t i = 0; i < pic.pixel_count(); ++i) {
    const Rgba& p = pic.pixels()[i];
    buffer[4 * i] = p.r;
    buffer[4 * i + 1] = p.g;
    buffer[4 * i + 2] = p.b;
    buffer[4 * i + 3] = p.a;
  }
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(pic.width());
  image.height = static_cast<png_uint_32>(pic.height());
  image.format = PNG_FORMAT_RGBA;
  if (!png_image_write_to_file(&image, path.c_str(), 0, buffer.data(), 0, nullptr))
    throw IoError("cannot write " + path + ": " + image.message);
}

/// Writes 8-bit grayscale from the red channel.
inline void write_png_gray(const std::string& path, const Picture& pic) {
  std::vector<std::uint8_t> buffer(pic.pixel_count());
  for (std::size_t i = 0; i < pic.pixel_count(); ++i) buffer[i] = pic.pixels()[i].r;
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(pic.width());
  image.height = static_cast<png_uint_32>(pic.height());
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, buffer.data(), 0, nullptr))
    throw IoError("cannot write " + path + ": " + image.message);
}

}  // namespace fractrans
