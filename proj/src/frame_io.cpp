#include "pwot/frame_io.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <memory>

#include <png.h>

#include "pwot/errors.hpp"

namespace pwot {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void unreadable(const fs::path& path, const std::string& why) {
  throw IoError(IoError::Kind::Unreadable, "cannot read " + path.string() + ": " + why);
}

// Next whitespace-separated header token, skipping '#' comments.
std::string ppm_token(std::istream& in) {
  std::string tok;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(c);
  }
  return tok;
}

}  // namespace

FramePixels read_ppm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) unreadable(path, "cannot open");
  if (ppm_token(in) != "P6") unreadable(path, "not a binary P6 PPM");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(ppm_token(in));
    h = std::stoi(ppm_token(in));
    maxval = std::stoi(ppm_token(in));
  } catch (const std::exception&) {
    unreadable(path, "malformed header");
  }
  if (w <= 0 || h <= 0) unreadable(path, "bad dimensions");
  if (maxval != 255) unreadable(path, "only 8-bit PPM (maxval 255) is supported");
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h * 3);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (in.gcount() != static_cast<std::streamsize>(data.size())) unreadable(path, "truncated data");
  return FramePixels(w, h, std::move(data));
}

void write_ppm(const fs::path& path, const FramePixels& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(IoError::Kind::WriteFailed, "cannot write " + path.string());
  out << "P6\n" << frame.width() << " " << frame.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.data().data()),
            static_cast<std::streamsize>(frame.data().size()));
  if (!out) throw IoError(IoError::Kind::WriteFailed, "cannot write " + path.string());
}

FramePixels read_png(const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    unreadable(path, image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, data.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    unreadable(path, msg);
  }
  return FramePixels(static_cast<int>(image.width), static_cast<int>(image.height),
                     std::move(data));
}

FramePixels read_frame(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) unreadable(path, "cannot open");
  std::array<char, 8> sig{};
  in.read(sig.data(), sig.size());
  static constexpr std::array<unsigned char, 8> kPngSig{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (in.gcount() == 8 && std::equal(kPngSig.begin(), kPngSig.end(), sig.begin(),
                                     [](unsigned char a, char b) {
                                       return a == static_cast<unsigned char>(b);
                                     })) {
    return read_png(path);
  }
  return read_ppm(path);
}

FrameSequence load_frame_sequence(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IoError(IoError::Kind::Unreadable, "not a directory: " + dir.string());
  }
  FrameSequence seq;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".ppm" || ext == ".png") seq.files.push_back(entry.path());
  }
  if (seq.files.empty()) {
    throw IoError(IoError::Kind::EmptyInput, "no .ppm or .png frames in " + dir.string());
  }
  std::sort(seq.files.begin(), seq.files.end());
  for (const auto& f : seq.files) {
    FramePixels frame = read_frame(f);
    if (!seq.frames.empty() && frame.shape() != seq.frames.front().shape()) {
      const auto& a = seq.frames.front();
      throw IoError(IoError::Kind::DimensionMismatch,
                    "frame size mismatch: " + seq.files.front().filename().string() + " is " +
                        std::to_string(a.width()) + "x" + std::to_string(a.height()) + ", " +
                        f.filename().string() + " is " + std::to_string(frame.width()) + "x" +
                        std::to_string(frame.height()));
    }
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

void draw_box(FramePixels& frame, const Rect& box, Pixel3 color) {
  auto put = [&](int x, int y) {
    if (x >= 0 && y >= 0 && x < frame.width() && y < frame.height()) frame.set(x, y, color);
  };
  for (int x = box.x; x < box.right(); ++x) {
    put(x, box.y);
    put(x, box.bottom() - 1);
  }
  for (int y = box.y; y < box.bottom(); ++y) {
    put(box.x, y);
    put(box.right() - 1, y);
  }
}

}  // namespace pwot
