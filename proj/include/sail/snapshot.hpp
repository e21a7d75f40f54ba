#pragma once
// Search-frontier snapshots as binary PPM (P6) images.
//
// The blue channel alone identifies a cell's list status, so start/goal
// markers (red 255, green 0) and the status stay recoverable from pixels:
//   unexpanded  (255, 255, 255)      open     (150, 200, 250)
//   closed      ( 30,  80, 200)      invalid  (  0,   0,   0)
// A marked cell keeps its blue channel and gets R = 255, G = 0. The optional
// path overlay paints (255, 210, 90) and does not preserve status.

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sail/gridworld.hpp"
#include "sail/search.hpp"

namespace sail {

struct Rgb {
  std::uint8_t r, g, b;
  friend constexpr bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kUnexpandedColor{255, 255, 255};
inline constexpr Rgb kOpenColor{150, 200, 250};
inline constexpr Rgb kClosedColor{30, 80, 200};
inline constexpr Rgb kInvalidColor{0, 0, 0};
inline constexpr Rgb kPathColor{255, 210, 90};

inline Rgb status_color(CellStatus s) {
  switch (s) {
    case CellStatus::open: return kOpenColor;
    case CellStatus::closed: return kClosedColor;
    case CellStatus::invalid: return kInvalidColor;
    case CellStatus::unexpanded: break;
  }
  return kUnexpandedColor;
}

/// Inverse of the palette; nullopt for path-overlay pixels.
inline std::optional<CellStatus> classify_pixel(Rgb px) {
  if (px == kPathColor) return std::nullopt;
  switch (px.b) {
    case 255: return CellStatus::unexpanded;
    case 250: return CellStatus::open;
    case 200: return CellStatus::closed;
    case 0: return CellStatus::invalid;
    default: return std::nullopt;
  }
}

struct Image {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;

  Rgb at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

struct RenderOptions {
  bool markers = true;
  /// Only drawn on the final frame of a solved episode.
  std::optional<std::vector<Vertex>> path;
};

/// Renders trace frame `frame` of an episode.
inline Image render_snapshot(const Trace& trace, std::size_t frame, const EpisodeSpec& spec,
                             const RenderOptions& options = {}) {
  const auto grid = trace.frame(frame);
  const Dims d = trace.dims();
  require(d == spec.map().dims(), "render: trace and world dimensions differ");
  Image img{d.width, d.height, std::vector<Rgb>(d.cell_count())};
  for (std::size_t i = 0; i < grid.size(); ++i) img.pixels[i] = status_color(grid[i]);
  if (options.path && frame + 1 == trace.frame_count())
    for (Vertex v : *options.path) img.pixels[d.index(v)] = kPathColor;
  if (options.markers)
    for (Vertex v : {spec.start, spec.goal}) {
      auto& px = img.pixels[d.index(v)];
      if (px != kPathColor) px = {255, 0, px.b};
    }
  return img;
}

inline std::string encode_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                    "\n255\n";
  out.reserve(out.size() + img.pixels.size() * 3);
  for (const Rgb& p : img.pixels) {
    out.push_back(static_cast<char>(p.r));
    out.push_back(static_cast<char>(p.g));
    out.push_back(static_cast<char>(p.b));
  }
  return out;
}

inline void write_ppm(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << encode_ppm(img);
}

inline std::size_t count_pixels(const Image& img, CellStatus status) {
  std::size_t n = 0;
  for (const Rgb& p : img.pixels)
    if (classify_pixel(p) == status) ++n;
  return n;
}

/// Text form of a frame: one row per line, '.' unexpanded, 'o' open,
/// 'x' closed, '#' invalid.
inline std::string frame_to_text(const Trace& trace, std::size_t frame) {
  static constexpr std::array<char, 4> glyph{'.', 'o', 'x', '#'};
  const auto grid = trace.frame(frame);
  const Dims d = trace.dims();
  std::string out;
  out.reserve(grid.size() + static_cast<std::size_t>(d.height));
  for (int y = 0; y < d.height; ++y) {
    for (int x = 0; x < d.width; ++x)
      out.push_back(glyph[static_cast<std::size_t>(grid[d.index({x, y})])]);
    out.push_back('\n');
  }
  return out;
}

/// Serializes the selected frames as "t <index>" followed by the frame text.
inline void write_trace(const Trace& trace, std::span<const std::size_t> frames,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "trace " << trace.dims().width << ' ' << trace.dims().height << ' ' << frames.size()
      << '\n';
  for (std::size_t t : frames) out << "t " << t << '\n' << frame_to_text(trace, t);
}

}  // namespace sail
