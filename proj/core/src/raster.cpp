#include "pcgeval/raster.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

#include <fmt/format.h>

namespace pcgeval {

std::size_t Bitmap::black_count() const {
  return static_cast<std::size_t>(std::count(pixels.begin(), pixels.end(), kBlack));
}

Bitmap rasterize(const Level& level, const RasterOptions& options) {
  if (options.cell_px < 1) throw ConfigError(fmt::format("cell_px must be >= 1, got {}", options.cell_px));
  if (options.pad_cells < 0) throw ConfigError(fmt::format("pad_cells must be >= 0, got {}", options.pad_cells));
  const int px = options.cell_px;
  const int pad = options.pad_cells;

  if (level.blocks.empty()) {
    const int side = px * (1 + 2 * pad);
    return Bitmap(side, side);
  }

  int min_col = std::numeric_limits<int>::max(), max_col = std::numeric_limits<int>::min();
  int min_row = std::numeric_limits<int>::max(), max_row = std::numeric_limits<int>::min();
  for (const auto& b : level.blocks) {
    min_col = std::min(min_col, b.left_col);
    max_col = std::max(max_col, b.right_col());
    min_row = std::min(min_row, b.bottom_row);
    max_row = std::max(max_row, b.top_row());
  }
  const int box_w = (max_col - min_col + 1 + 2 * pad) * px;
  const int box_h = (max_row - min_row + 1 + 2 * pad) * px;
  const int side = std::max(box_w, box_h);
  const int off_x = (side - box_w) / 2;
  const int off_y = (side - box_h) / 2;

  Bitmap image(side, side);
  for (const auto& b : level.blocks) {
    for (int c = b.left_col; c <= b.right_col(); ++c) {
      for (int r = b.bottom_row; r <= b.top_row(); ++r) {
        const int x0 = off_x + (c - min_col + pad) * px;
        const int y0 = off_y + (max_row - r + pad) * px;
        for (int y = y0; y < y0 + px; ++y) {
          std::fill_n(image.pixels.begin() + static_cast<std::ptrdiff_t>(y) * side + x0, px, kBlack);
        }
      }
    }
  }
  return image;
}

std::string encode_pgm(const Bitmap& bitmap) {
  std::string out = fmt::format("P5\n{} {}\n255\n", bitmap.width_px, bitmap.height_px);
  out.append(bitmap.pixels.begin(), bitmap.pixels.end());
  return out;
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  int next_int(std::string_view what) {
    skip_space_and_comments();
    int value = 0;
    auto [ptr, ec] = std::from_chars(bytes_.data() + pos_, bytes_.data() + bytes_.size(), value);
    if (ec != std::errc{} || value < 0) throw ParseError(fmt::format("PGM header: bad {}", what));
    pos_ = static_cast<std::size_t>(ptr - bytes_.data());
    return value;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto ch = static_cast<unsigned char>(bytes_[pos_]);
      if (std::isspace(ch)) {
        ++pos_;
      } else if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

Bitmap decode_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes.substr(0, 2) != "P5") throw ParseError("not a binary PGM (missing P5 magic)");
  HeaderReader header(bytes);
  const int w = header.next_int("width");
  const int h = header.next_int("height");
  const int maxval = header.next_int("maxval");
  if (maxval != 255) throw ParseError(fmt::format("PGM maxval {} unsupported (expected 255)", maxval));
  if (header.pos() >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[header.pos()]))) {
    throw ParseError("PGM header not terminated by whitespace");
  }
  header.advance(1);

  const auto expected = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() - header.pos() != expected) {
    throw ParseError(fmt::format("PGM payload has {} bytes, expected {}", bytes.size() - header.pos(), expected));
  }
  Bitmap image(w, h);
  std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(header.pos()), bytes.end(), image.pixels.begin());
  return image;
}

}  // namespace pcgeval
