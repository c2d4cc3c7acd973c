#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pcgeval/core_model.hpp"

namespace pcgeval {

inline constexpr std::uint8_t kBlack = 0;
inline constexpr std::uint8_t kWhite = 255;

struct Bitmap {
  int width_px = 0;
  int height_px = 0;
  std::vector<std::uint8_t> pixels;  // row-major, row 0 at the top

  Bitmap() = default;
  Bitmap(int w, int h, std::uint8_t fill = kWhite)
      : width_px(w), height_px(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  std::uint8_t at(int x, int y) const { return pixels[index(x, y)]; }
  std::uint8_t& at(int x, int y) { return pixels[index(x, y)]; }
  std::size_t black_count() const;

  friend bool operator==(const Bitmap&, const Bitmap&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_px) + static_cast<std::size_t>(x);
  }
};

struct RasterOptions {
  int cell_px = 16;
  int pad_cells = 1;
};

// Black blocks on white, cropped to the occupied bounding box plus padding and
// centred on a square canvas. Ground (row 0) is at the bottom of the image.
Bitmap rasterize(const Level& level, const RasterOptions& options = {});

// Binary PGM: "P5\n<w> <h>\n255\n" followed by raw row-major bytes.
std::string encode_pgm(const Bitmap& bitmap);

// Reads binary P5 (maxval 255). Header comments are accepted. Throws ParseError.
Bitmap decode_pgm(std::string_view bytes);

}  // namespace pcgeval
