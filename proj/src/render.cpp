#include "gp/render.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "gp/error.hpp"
#include "gp/parallel.hpp"

namespace gp {

namespace {

constexpr int kBandRows = 32;

RGB hsv(double h, double s, double v) {
  h = (h - std::floor(h)) * 6.0;
  const int sector = static_cast<int>(h) % 6;
  const double f = h - std::floor(h);
  const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
  double r = 0, g = 0, b = 0;
  switch (sector) {
    case 0: r = v, g = t, b = p; break;
    case 1: r = q, g = v, b = p; break;
    case 2: r = p, g = v, b = t; break;
    case 3: r = p, g = q, b = v; break;
    case 4: r = t, g = p, b = v; break;
    default: r = v, g = p, b = q; break;
  }
  auto byte = [](double x) { return static_cast<std::uint8_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0)); };
  return {byte(r), byte(g), byte(b)};
}

}  // namespace

RGB palette_color(std::uint64_t index, std::uint32_t c) {
  if (c < 1) throw Error(Errc::InvalidArgument, "color modulus must be >= 1");
  // Offset so that c = 1 gives a blue rather than pure red.
  return hsv(0.6 + static_cast<double>(index % c) / static_cast<double>(c), 0.85, 0.8);
}

void RenderStyle::validate() const {
  if (width < 64 || height < 64) throw Error(Errc::InvalidArgument, "image must be at least 64x64 pixels");
  if (!(margin >= 0 && margin < 0.5)) throw Error(Errc::InvalidArgument, "margin must lie in [0, 0.5)");
  if (color_modulus < 1) throw Error(Errc::InvalidArgument, "color modulus must be >= 1");
  if (!(point_radius > 0)) throw Error(Errc::InvalidArgument, "point radius must be positive");
  if (!(opacity > 0 && opacity <= 1)) throw Error(Errc::InvalidArgument, "opacity must lie in (0, 1]");
}

ViewBox auto_viewbox(std::span<const PlotPoint> points, double pad) {
  if (points.empty()) throw Error(Errc::EmptyPointSet, "cannot frame an empty point set");
  ViewBox b{INFINITY, -INFINITY, INFINITY, -INFINITY};
  for (const PlotPoint& p : points) {
    b.re_min = std::min(b.re_min, p.value.real());
    b.re_max = std::max(b.re_max, p.value.real());
    b.im_min = std::min(b.im_min, p.value.imag());
    b.im_max = std::max(b.im_max, p.value.imag());
  }
  auto grow = [pad](double& lo, double& hi) {
    if (hi - lo <= 0) {
      lo -= 0.5;
      hi += 0.5;
      return;
    }
    const double extent = hi - lo;
    lo -= pad * extent;
    hi += pad * extent;
  };
  grow(b.re_min, b.re_max);
  grow(b.im_min, b.im_max);
  return b;
}

ViewBox fit_aspect(const ViewBox& box, const RenderStyle& style) {
  const double w = style.width * (1 - 2 * style.margin), h = style.height * (1 - 2 * style.margin);
  const double bw = box.re_max - box.re_min, bh = box.im_max - box.im_min;
  ViewBox out = box;
  if (bw / bh > w / h) {
    const double want = bw * h / w, mid = 0.5 * (box.im_min + box.im_max);
    out.im_min = mid - want / 2;
    out.im_max = mid + want / 2;
  } else {
    const double want = bh * w / h, mid = 0.5 * (box.re_min + box.re_max);
    out.re_min = mid - want / 2;
    out.re_max = mid + want / 2;
  }
  return out;
}

Canvas::Canvas(const RenderStyle& style, const ViewBox& box) : style_(style), box_(box) {
  style_.validate();
  if (!(box.re_min < box.re_max && box.im_min < box.im_max)) throw Error(Errc::InvalidArgument, "empty viewbox");
  if (style_.axis_equal) box_ = fit_aspect(box_, style_);
  buf_.resize(static_cast<std::size_t>(style_.width) * style_.height * 3);
  for (std::size_t i = 0; i < buf_.size(); i += 3) {
    buf_[i] = style_.background.r;
    buf_[i + 1] = style_.background.g;
    buf_[i + 2] = style_.background.b;
  }
  for (std::uint32_t c = 0; c < style_.color_modulus; ++c) palette_.push_back(palette_color(c, style_.color_modulus));
}

void Canvas::draw(std::span<const PlotPoint> points) {
  const int W = style_.width, H = style_.height;
  const double mx = W * style_.margin, my = H * style_.margin;
  const double sx = (W - 2 * mx) / (box_.re_max - box_.re_min);
  const double sy = (H - 2 * my) / (box_.im_max - box_.im_min);
  const std::size_t bands = (H + kBandRows - 1) / kBandRows;

  // Each band sees every point in order and only touches its own rows, so
  // the result does not depend on how bands are scheduled.
  parallel_chunks(bands, 1, [&](std::size_t band, std::size_t, std::size_t) {
    const int row_lo = static_cast<int>(band) * kBandRows;
    const int row_hi = std::min(H, row_lo + kBandRows);
    for (const PlotPoint& p : points) {
      const double re = p.value.real(), im = p.value.imag();
      if (!(re >= box_.re_min && re <= box_.re_max && im >= box_.im_min && im <= box_.im_max)) continue;
      const double cx = mx + (re - box_.re_min) * sx;
      const double cy = my + (box_.im_max - im) * sy;
      const double r = style_.point_radius * p.size;
      const int y0 = std::max(row_lo, static_cast<int>(std::floor(cy - r - 1)));
      const int y1 = std::min(row_hi - 1, static_cast<int>(std::ceil(cy + r + 1)));
      if (y0 > y1) continue;
      const int x0 = std::max(0, static_cast<int>(std::floor(cx - r - 1)));
      const int x1 = std::min(W - 1, static_cast<int>(std::ceil(cx + r + 1)));
      const RGB col = palette_[p.color % style_.color_modulus];
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const double dist = std::hypot(x + 0.5 - cx, y + 0.5 - cy);
          double cover = std::clamp(r + 0.5 - dist, 0.0, 1.0);
          // Discs smaller than a pixel keep their area as coverage.
          if (r < 0.5) cover *= 2 * r;
          if (cover <= 0) continue;
          const double a = cover * style_.opacity;
          double* px = &buf_[(static_cast<std::size_t>(y) * W + x) * 3];
          px[0] += a * (col.r - px[0]);
          px[1] += a * (col.g - px[1]);
          px[2] += a * (col.b - px[2]);
        }
      }
    }
  });
}

Image Canvas::image() const {
  Image img{style_.width, style_.height, std::vector<std::uint8_t>(buf_.size())};
  for (std::size_t i = 0; i < buf_.size(); ++i)
    img.rgb[i] = static_cast<std::uint8_t>(std::lround(std::clamp(buf_[i], 0.0, 255.0)));
  return img;
}

Image render_scatter(std::span<const PlotPoint> points, const RenderStyle& style, const ViewBox& box) {
  Canvas canvas(style, box);
  canvas.draw(points);
  return canvas.image();
}

void write_png(const std::filesystem::path& path, const Image& image) {
  std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!file) throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(Errc::IoError, "libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(Errc::IoError, "libpng failed writing " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_set_sRGB(png, info, PNG_sRGB_INTENT_PERCEPTUAL);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y)
    png_write_row(png, image.rgb.data() + static_cast<std::size_t>(y) * image.width * 3);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) throw Error(Errc::IoError, "flush failed for " + path.string());
}

std::string frame_name(std::uint64_t frame) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%05llu.png", static_cast<unsigned long long>(frame));
  return buf;
}

std::vector<std::filesystem::path> write_frames(std::span<const PlotPoint> points,
                                                const std::vector<std::pair<std::uint64_t, std::uint64_t>>& batches,
                                                const RenderStyle& style, const ViewBox& box,
                                                const std::filesystem::path& dir,
                                                const std::optional<std::vector<std::uint64_t>>& only) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());

  Canvas canvas(style, box);
  std::vector<std::filesystem::path> written;
  for (std::size_t e = 0; e < batches.size(); ++e) {
    const auto [begin, end] = batches[e];
    if (begin > end || end > points.size()) throw Error(Errc::InvalidArgument, "frame batch out of range");
    canvas.draw(points.subspan(begin, end - begin));
    const std::uint64_t frame = e + 1;
    if (only && std::find(only->begin(), only->end(), frame) == only->end()) continue;
    const auto path = dir / frame_name(frame);
    write_png(path, canvas.image());
    written.push_back(path);
  }
  return written;
}

}  // namespace gp
