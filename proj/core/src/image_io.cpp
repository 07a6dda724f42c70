// Copyright 2026 The Flowgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flowgate/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <string>

#include "flowgate/error.hpp"

namespace flowgate {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

Image read_png(const std::filesystem::path& path, int channels) {
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw Error(Errc::kIo, "cannot decode PNG " + path.string() + ": " + png.message);
  }
  png.format = channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  Image image{static_cast<int>(png.width), static_cast<int>(png.height), channels, {}};
  image.data.resize(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, image.data.data(), 0, nullptr)) {
    std::string message = png.message;
    png_image_free(&png);
    throw Error(Errc::kIo, "cannot decode PNG " + path.string() + ": " + message);
  }
  return image;
}

// Skips whitespace and '#' comments between PNM header tokens.
int read_pnm_int(std::istream& in) {
  int c = in.peek();
  while (c != EOF && (std::isspace(c) || c == '#')) {
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else {
      in.get();
    }
    c = in.peek();
  }
  int value = -1;
  in >> value;
  return value;
}

Image read_pnm(const std::filesystem::path& path, int channels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  std::string magic(2, '\0');
  in.read(magic.data(), 2);
  const int file_channels = magic == "P6" ? 3 : magic == "P5" ? 1 : 0;
  if (file_channels == 0) throw Error(Errc::kIo, path.string() + " is not a binary PNM (P5/P6)");
  const int width = read_pnm_int(in);
  const int height = read_pnm_int(in);
  const int maxval = read_pnm_int(in);
  if (width <= 0 || height <= 0 || maxval != 255) {
    throw Error(Errc::kIo, path.string() + ": unsupported PNM header");
  }
  in.get();
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(width) * height * file_channels);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw Error(Errc::kIo, path.string() + ": truncated pixel data");
  }

  Image image{width, height, channels, {}};
  if (channels == file_channels) {
    image.data = std::move(raw);
  } else if (channels == 3) {
    image.data.resize(raw.size() * 3);
    for (std::size_t i = 0; i < raw.size(); ++i) std::fill_n(image.data.begin() + 3 * i, 3, raw[i]);
  } else {
    image.data.resize(raw.size() / 3);
    for (std::size_t i = 0; i < image.data.size(); ++i) {
      image.data[i] = static_cast<std::uint8_t>(
          (299 * raw[3 * i] + 587 * raw[3 * i + 1] + 114 * raw[3 * i + 2] + 500) / 1000);
    }
  }
  return image;
}

bool is_frame_file(const std::filesystem::path& path) {
  const auto ext = lower_extension(path);
  return ext == ".png" || ext == ".ppm" || ext == ".pgm" || ext == ".pnm";
}

}  // namespace

ImageInfo probe_image(const std::filesystem::path& path) {
  if (lower_extension(path) != ".png") {
    const Image image = read_pnm(path, 3);
    return {image.width, image.height, 3, 8};
  }
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw Error(Errc::kIo, "cannot decode PNG " + path.string() + ": " + png.message);
  }
  ImageInfo info{static_cast<int>(png.width), static_cast<int>(png.height), 0, 8};
  info.channels = ((png.format & PNG_FORMAT_FLAG_COLOR) ? 3 : 1) + ((png.format & PNG_FORMAT_FLAG_ALPHA) ? 1 : 0);
  info.bit_depth = (png.format & PNG_FORMAT_FLAG_LINEAR) ? 16 : 8;
  png_image_free(&png);
  return info;
}

Image read_image(const std::filesystem::path& path, int channels) {
  if (channels != 1 && channels != 3) throw Error(Errc::kInvalidArgument, "channels must be 1 or 3");
  if (lower_extension(path) == ".png") return read_png(path, channels);
  return read_pnm(path, channels);
}

void write_png(const std::filesystem::path& path, const Image& image) {
  if (image.channels != 1 && image.channels != 3) {
    throw Error(Errc::kInvalidArgument, "PNG output supports 1 or 3 channels");
  }
  if (image.data.size() != static_cast<std::size_t>(image.width) * image.height * image.channels) {
    throw Error(Errc::kDimensionMismatch, "image buffer does not match its dimensions");
  }
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = image.channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png, path.c_str(), 0, image.data.data(), 0, nullptr)) {
    throw Error(Errc::kIo, "cannot write PNG " + path.string() + ": " + png.message);
  }
}

std::vector<std::filesystem::path> list_frame_files(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw Error(Errc::kIo, dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_frame_file(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<Frame> load_frames(const std::filesystem::path& dir) {
  std::vector<Frame> frames;
  for (const auto& path : list_frame_files(dir)) {
    Image image = read_image(path, 3);
    if (!frames.empty() && (image.width != frames.front().width() || image.height != frames.front().height())) {
      throw Error(Errc::kDimensionMismatch, path.filename().string() + " is " + std::to_string(image.width) + "x" +
                                                std::to_string(image.height) + ", expected " +
                                                std::to_string(frames.front().width()) + "x" +
                                                std::to_string(frames.front().height()));
    }
    frames.emplace_back(frames.size(), image.width, image.height, std::move(image.data));
  }
  return frames;
}

void save_frame_png(const std::filesystem::path& path, const Frame& frame) {
  write_png(path, {frame.width(), frame.height(), 3, {frame.pixels().begin(), frame.pixels().end()}});
}

}  // namespace flowgate
