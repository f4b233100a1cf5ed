#include "cleanwords/image.hpp"

#include <png.h>

#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "cleanwords/atomic_file.hpp"
#include "cleanwords/error.hpp"

namespace cleanwords {

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height), pixels_(static_cast<std::size_t>(width) * height, fill) {
  if (width < 0 || height < 0) throw UsageError("negative image dimensions");
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 0 || height < 0 || pixels_.size() != static_cast<std::size_t>(width) * height)
    throw UsageError("pixel count does not match image dimensions");
}

GrayImage GrayImage::crop(const Box& b) const {
  if (!contains(b)) throw UsageError("crop box outside image");
  GrayImage out(b.width(), b.height());
  for (int y = 0; y < b.height(); ++y) {
    std::memcpy(&out.at(0, y), pixels_.data() + static_cast<std::size_t>(b.top + y) * width_ + b.left,
                static_cast<std::size_t>(b.width()));
  }
  return out;
}

namespace {

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read image " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Reads one PNM header integer, skipping whitespace and comments.
int pnm_int(const std::string& bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
  if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos])))
    throw FormatError("malformed PGM header");
  long v = 0;
  while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
    v = v * 10 + (bytes[pos] - '0');
    if (v > (1 << 24)) throw FormatError("PGM header value too large");
    ++pos;
  }
  return static_cast<int>(v);
}

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReader() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

struct PngSource {
  const std::string* bytes;
  std::size_t pos;
};

void png_read_from_string(png_structp png, png_bytep out, png_size_t n) {
  auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
  if (src->pos + n > src->bytes->size()) png_error(png, "truncated PNG");
  std::memcpy(out, src->bytes->data() + src->pos, n);
  src->pos += n;
}

// The libpng calls live in functions whose locals are all trivially
// destructible, since errors unwind through longjmp.
bool png_read_header(PngReader& r, PngSource& src, png_uint_32& w, png_uint_32& h,
                     int& depth, int& color) {
  if (setjmp(png_jmpbuf(r.png))) return false;
  png_set_read_fn(r.png, &src, png_read_from_string);
  png_read_info(r.png, r.info);
  png_get_IHDR(r.png, r.info, &w, &h, &depth, &color, nullptr, nullptr, nullptr);
  return true;
}

bool png_read_rows(PngReader& r, png_bytep* rows) {
  if (setjmp(png_jmpbuf(r.png))) return false;
  png_read_image(r.png, rows);
  return true;
}

GrayImage decode_png(const std::string& bytes) {
  PngReader r;
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!r.png) throw FormatError("libpng initialization failed");
  r.info = png_create_info_struct(r.png);
  if (!r.info) throw FormatError("libpng initialization failed");

  PngSource src{&bytes, 0};
  png_uint_32 w = 0, h = 0;
  int depth = 0, color = 0;
  if (!png_read_header(r, src, w, h, depth, color)) throw FormatError("corrupt or truncated PNG");
  if (color != PNG_COLOR_TYPE_GRAY) throw FormatError("PNG is not single-channel grayscale");
  if (depth != 8) throw FormatError("PNG must be 8-bit");

  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(w) * h);
  std::vector<png_bytep> rows(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = pixels.data() + static_cast<std::size_t>(y) * w;
  if (!png_read_rows(r, rows.data())) throw FormatError("corrupt or truncated PNG");
  return GrayImage(static_cast<int>(w), static_cast<int>(h), std::move(pixels));
}

}  // namespace

GrayImage decode_pgm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') throw FormatError("not a PGM file");
  if (bytes[1] != '5') throw FormatError("only binary grayscale PGM (P5) is supported");
  std::size_t pos = 2;
  const int w = pnm_int(bytes, pos);
  const int h = pnm_int(bytes, pos);
  const int maxval = pnm_int(bytes, pos);
  if (maxval != 255) throw FormatError("PGM maxval must be 255");
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
    throw FormatError("malformed PGM header");
  ++pos;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if (bytes.size() - pos < n) throw FormatError("truncated PGM raster");
  std::vector<std::uint8_t> pixels(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                   bytes.begin() + static_cast<std::ptrdiff_t>(pos + n));
  return GrayImage(w, h, std::move(pixels));
}

GrayImage load_image(const std::filesystem::path& path) {
  const std::string bytes = read_all(path);
  static const unsigned char kPngSig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSig, 8) == 0) return decode_png(bytes);
  if (!bytes.empty() && bytes[0] == 'P') return decode_pgm(bytes);
  throw FormatError("unsupported image format: " + path.string());
}

std::string encode_pgm(const GrayImage& img) {
  std::string out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  out.append(img.pixels().begin(), img.pixels().end());
  return out;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  write_file_atomic(path, encode_pgm(img));
}

}  // namespace cleanwords
