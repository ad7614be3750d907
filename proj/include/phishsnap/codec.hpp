/*
 * Copyright 2026 The PhishSnap Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// PNG and baseline JPEG decoding (plus the encoders the corpus generator and
// tests need), backed by libpng and libjpeg. Not available in the
// WebAssembly core, where the browser decodes captures itself.

#include <png.h>
#include <stdio.h>  // jpeglib.h needs FILE
#include <jpeglib.h>
#include <jerror.h>

#include <csetjmp>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "phishsnap/error.hpp"
#include "phishsnap/image.hpp"

namespace phishsnap {

using Bytes = std::vector<std::uint8_t>;

inline Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return data;
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

namespace detail {

inline bool has_png_signature(std::span<const std::uint8_t> b) {
  static constexpr std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  return b.size() >= 8 && std::memcmp(b.data(), sig, 8) == 0;
}

inline bool has_jpeg_signature(std::span<const std::uint8_t> b) {
  return b.size() >= 3 && b[0] == 0xff && b[1] == 0xd8 && b[2] == 0xff;
}

inline std::uint32_t read_be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) | p[3];
}

inline RawImage decode_png(std::span<const std::uint8_t> bytes) {
  // IHDR is always the first chunk: signature(8) length(4) type(4) width(4) height(4).
  if (bytes.size() >= 24 && std::memcmp(bytes.data() + 12, "IHDR", 4) == 0 &&
      (read_be32(bytes.data() + 16) == 0 || read_be32(bytes.data() + 20) == 0)) {
    throw InvalidInputError("png: zero-dimension image");
  }
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw DecodeError("png: header: " + msg);
  }
  if (image.width == 0 || image.height == 0) {
    png_image_free(&image);
    throw InvalidInputError("png: zero-dimension image");
  }
  image.format = PNG_FORMAT_RGBA;
  std::vector<Rgba> pixels(static_cast<std::size_t>(image.width) * image.height);
  static_assert(sizeof(Rgba) == 4);
  if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw DecodeError("png: image data: " + msg);
  }
  return RawImage(image.width, image.height, std::move(pixels));
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  const char* stage;
  char message[JMSG_LENGTH_MAX];
};

extern "C" inline void jpeg_error_exit_to_jump(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// Corrupt-data warnings (level -1) abort the decode instead of yielding
// filler pixels.
extern "C" inline void jpeg_warning_is_fatal(j_common_ptr cinfo, int level) {
  if (level < 0) (*cinfo->err->error_exit)(cinfo);
}

// No objects with non-trivial destructors may be created between setjmp
// and the last libjpeg call.
inline RawImage decode_jpeg(std::span<const std::uint8_t> bytes) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  std::vector<std::uint8_t> rgb;
  std::size_t width = 0;
  std::size_t height = 0;

  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit_to_jump;
  err.base.emit_message = jpeg_warning_is_fatal;
  err.stage = "header";
  err.message[0] = '\0';
  if (setjmp(err.jump)) {
    const bool empty = err.base.msg_code == JERR_EMPTY_IMAGE;
    jpeg_destroy_decompress(&cinfo);
    if (empty) throw InvalidInputError("jpeg: zero-dimension image");
    throw DecodeError(std::string("jpeg: ") + err.stage + ": " + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  if (cinfo.image_width == 0 || cinfo.image_height == 0) {
    jpeg_destroy_decompress(&cinfo);
    throw InvalidInputError("jpeg: zero-dimension image");
  }
  cinfo.out_color_space = JCS_RGB;
  err.stage = "decompress";
  jpeg_start_decompress(&cinfo);
  width = cinfo.output_width;
  height = cinfo.output_height;
  rgb.resize(width * height * 3);
  err.stage = "scanlines";
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = rgb.data() + static_cast<std::size_t>(cinfo.output_scanline) * width * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  err.stage = "finish";
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);

  std::vector<Rgba> pixels(width * height);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    pixels[i] = Rgba{rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2], 255};
  }
  return RawImage(width, height, std::move(pixels));
}

extern "C" inline void png_write_to_vector(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<Bytes*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

extern "C" inline void png_flush_noop(png_structp) {}

}  // namespace detail

// Decodes a PNG or baseline JPEG byte stream, sniffing the format from its
// signature. Alpha is 255 for formats without an alpha channel.
inline RawImage decode_image(std::span<const std::uint8_t> bytes) {
  if (detail::has_png_signature(bytes)) return detail::decode_png(bytes);
  if (detail::has_jpeg_signature(bytes)) return detail::decode_jpeg(bytes);
  throw DecodeError("signature: not a PNG or JPEG stream");
}

inline RawImage decode_image_file(const std::filesystem::path& path) {
  const Bytes bytes = read_file(path);
  try {
    return decode_image(bytes);
  } catch (const DecodeError& e) {
    throw DecodeError(path.string() + ": " + e.what());
  }
}

// 8-bit PNG. Writes RGB when every pixel is opaque, RGBA otherwise.
// compression_level follows zlib (0-9).
inline Bytes encode_png(const RawImage& img, int compression_level = 6) {
  bool opaque = true;
  for (const Rgba& p : img.pixels()) opaque = opaque && p.a == 255;
  const int channels = opaque ? 3 : 4;

  std::vector<std::uint8_t> raster(img.width() * img.height() * channels);
  std::size_t k = 0;
  for (const Rgba& p : img.pixels()) {
    raster[k++] = p.r;
    raster[k++] = p.g;
    raster[k++] = p.b;
    if (!opaque) raster[k++] = p.a;
  }
  std::vector<png_bytep> rows(img.height());
  for (std::size_t y = 0; y < img.height(); ++y) rows[y] = raster.data() + y * img.width() * channels;

  Bytes out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw Error("png: cannot allocate writer");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("png: cannot allocate info");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("png: encode failed");
  }
  png_set_write_fn(png, &out, detail::png_write_to_vector, detail::png_flush_noop);
  png_set_compression_level(png, compression_level);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()), static_cast<png_uint_32>(img.height()), 8,
               opaque ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_RGBA, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_rows(png, info, rows.data());
  png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

// Baseline JPEG with 4:2:0 chroma subsampling at the given quality (1-100).
inline Bytes encode_jpeg(const RawImage& img, int quality) {
  std::vector<std::uint8_t> rgb(img.width() * img.height() * 3);
  std::size_t k = 0;
  for (const Rgba& p : img.pixels()) {
    rgb[k++] = p.r;
    rgb[k++] = p.g;
    rgb[k++] = p.b;
  }

  jpeg_compress_struct cinfo;
  detail::JpegErrorManager err;
  unsigned char* buffer = nullptr;
  unsigned long size = 0;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = detail::jpeg_error_exit_to_jump;
  err.stage = "encode";
  err.message[0] = '\0';
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    std::free(buffer);
    throw Error(std::string("jpeg: encode: ") + err.message);
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &buffer, &size);
  cinfo.image_width = static_cast<JDIMENSION>(img.width());
  cinfo.image_height = static_cast<JDIMENSION>(img.height());
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = rgb.data() + static_cast<std::size_t>(cinfo.next_scanline) * img.width() * 3;
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  Bytes out(buffer, buffer + size);
  std::free(buffer);
  return out;
}

}  // namespace phishsnap
