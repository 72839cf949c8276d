#pragma once

// Deterministic scatter rendering of plot points to 8-bit RGB PNG files.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gp/periods.hpp"

namespace gp {

struct RGB {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const RGB&, const RGB&) = default;
};

// Hue (index mod c) / c on an HSV wheel at fixed saturation and value.
RGB palette_color(std::uint64_t index, std::uint32_t c);

struct RenderStyle {
  int width = 1024;
  int height = 1024;
  double margin = 0.04;  // fraction of each side left blank
  std::uint32_t color_modulus = 1;
  double point_radius = 1.0;  // pixels, multiplied by PlotPoint::size
  double opacity = 1.0;
  RGB background{255, 255, 255};
  bool axis_equal = true;

  void validate() const;
};

struct ViewBox {
  double re_min = -1, re_max = 1, im_min = -1, im_max = 1;
};

// Bounding box grown by pad * extent on each side. A zero-extent axis is
// widened to unit width around its value. Throws EmptyPointSet.
ViewBox auto_viewbox(std::span<const PlotPoint> points, double pad = 0.05);

// Widens one axis so the box has the pixel aspect ratio of the drawable area.
ViewBox fit_aspect(const ViewBox& box, const RenderStyle& style);

struct Image {
  int width = 0, height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel
};

// Double-precision accumulation buffer. Points are drawn in call order as
// anti-aliased discs; drawing more points later continues the same picture.
class Canvas {
 public:
  Canvas(const RenderStyle& style, const ViewBox& box);

  void draw(std::span<const PlotPoint> points);
  Image image() const;

 private:
  RenderStyle style_;
  ViewBox box_;
  std::vector<double> buf_;
  std::vector<RGB> palette_;
};

Image render_scatter(std::span<const PlotPoint> points, const RenderStyle& style, const ViewBox& box);

// Throws IoError.
void write_png(const std::filesystem::path& path, const Image& image);

// frame_00001.png ... one per batch, frame e showing batches 1..e. When
// `only` is given, just those 1-based frame numbers are written (all frames
// are still drawn so each one matches the full sequence).
std::vector<std::filesystem::path> write_frames(std::span<const PlotPoint> points,
                                                const std::vector<std::pair<std::uint64_t, std::uint64_t>>& batches,
                                                const RenderStyle& style, const ViewBox& box,
                                                const std::filesystem::path& dir,
                                                const std::optional<std::vector<std::uint64_t>>& only = std::nullopt);

std::string frame_name(std::uint64_t frame);

}  // namespace gp
