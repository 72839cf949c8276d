#include <doctest.h>

#include <png.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>

#include "gp/error.hpp"
#include "gp/laurent.hpp"
#include "gp/parallel.hpp"
#include "gp/render.hpp"

using namespace gp;
namespace fs = std::filesystem;

namespace {

double hue_degrees(RGB c) {
  const double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
  return std::fmod(std::atan2(std::sqrt(3.0) * (g - b), 2 * r - g - b) * 180 / M_PI + 360, 360);
}

std::vector<PlotPoint> points_of(const std::vector<cplx>& values, std::uint32_t c = 1) {
  std::vector<PlotPoint> out;
  for (std::size_t i = 0; i < values.size(); ++i)
    out.push_back(PlotPoint{i, values[i], static_cast<std::uint32_t>(i % c), 1.0});
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("gp_render_" + std::to_string(std::random_device{}()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("palette") {
  CHECK(palette_color(0, 1) == palette_color(17, 1));
  CHECK(palette_color(4, 7) == palette_color(11, 7));
  const double h0 = hue_degrees(palette_color(0, 3)), h1 = hue_degrees(palette_color(1, 3)),
               h2 = hue_degrees(palette_color(2, 3));
  auto gap = [](double a, double b) { return std::fmod(b - a + 360, 360); };
  CHECK(gap(h0, h1) == doctest::Approx(120).epsilon(0.01));
  CHECK(gap(h1, h2) == doctest::Approx(120).epsilon(0.01));
  CHECK_THROWS_AS(palette_color(0, 0), Error);
}

TEST_CASE("auto viewbox") {
  const auto one = auto_viewbox(points_of({0.0}));
  CHECK(one.re_min == -0.5);
  CHECK(one.re_max == 0.5);
  CHECK(one.im_min == -0.5);
  CHECK(one.im_max == 0.5);
  const auto two = auto_viewbox(points_of({-2.0, 2.0}), 0.1);
  CHECK(two.re_min == doctest::Approx(-2.4));
  CHECK(two.re_max == doctest::Approx(2.4));
  CHECK_THROWS_AS(auto_viewbox(std::vector<PlotPoint>{}), Error);

  const auto pts = sample_image(ReductionTable(cyclotomic(3), 3), 300, 1);
  const auto box = auto_viewbox(points_of(pts), 0.05);
  for (double t = 0; t < 2 * M_PI; t += 0.01) {
    const cplx z = hypocycloid_boundary(3, t);
    CHECK(z.real() >= box.re_min);
    CHECK(z.real() <= box.re_max);
    CHECK(z.imag() >= box.im_min);
    CHECK(z.imag() <= box.im_max);
  }
}

TEST_CASE("style validation") {
  RenderStyle s;
  s.width = 32;
  CHECK_THROWS_AS(s.validate(), Error);
  s = RenderStyle{};
  s.opacity = 0;
  CHECK_THROWS_AS(s.validate(), Error);
  s = RenderStyle{};
  s.color_modulus = 0;
  CHECK_THROWS_AS(s.validate(), Error);
  CHECK_NOTHROW(RenderStyle{}.validate());
}

TEST_CASE("empty and centered renders") {
  RenderStyle style;
  style.width = 128;
  style.height = 96;
  const ViewBox box{-1, 1, -1, 1};
  const auto empty = render_scatter({}, style, box);
  CHECK(empty.width == 128);
  CHECK(empty.height == 96);
  CHECK(std::all_of(empty.rgb.begin(), empty.rgb.end(), [](std::uint8_t v) { return v == 255; }));

  style.point_radius = 4;
  const auto centered = render_scatter(points_of({0.0}), style, box);
  const RGB ink = palette_color(0, 1);
  std::size_t inked = 0;
  double sx = 0, sy = 0;
  for (int y = 0; y < 96; ++y)
    for (int x = 0; x < 128; ++x) {
      const auto* px = &centered.rgb[(static_cast<std::size_t>(y) * 128 + x) * 3];
      if (px[0] == ink.r && px[1] == ink.g && px[2] == ink.b) {
        ++inked;
        sx += x + 0.5;
        sy += y + 0.5;
      }
    }
  REQUIRE(inked > 20);
  CHECK(sx / inked == doctest::Approx(64).epsilon(0.01));
  CHECK(sy / inked == doctest::Approx(48).epsilon(0.01));
}

TEST_CASE("points outside the box are clipped") {
  RenderStyle style;
  style.width = style.height = 64;
  const auto img = render_scatter(points_of({5.0, cplx(0, -9)}), style, ViewBox{-1, 1, -1, 1});
  CHECK(std::all_of(img.rgb.begin(), img.rgb.end(), [](std::uint8_t v) { return v == 255; }));
}

TEST_CASE("rendering is deterministic across runs and worker counts") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  std::vector<cplx> v(20000);
  for (auto& z : v) z = cplx(g(rng), g(rng));
  const auto pts = points_of(v, 5);
  RenderStyle style;
  style.width = 300;
  style.height = 200;
  style.color_modulus = 5;
  style.opacity = 0.6;
  style.point_radius = 0.7;
  const auto box = auto_viewbox(pts);
  set_worker_count(1);
  const auto a = render_scatter(pts, style, box);
  set_worker_count(4);
  const auto b = render_scatter(pts, style, box);
  set_worker_count(0);
  CHECK(a.rgb == b.rgb);

  TempDir tmp;
  write_png(tmp.path / "a.png", a);
  write_png(tmp.path / "b.png", render_scatter(pts, style, box));
  CHECK(slurp(tmp.path / "a.png") == slurp(tmp.path / "b.png"));

  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  REQUIRE(png_image_begin_read_from_file(&image, (tmp.path / "a.png").c_str()));
  CHECK(image.width == 300);
  CHECK(image.height == 200);
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> back(PNG_IMAGE_SIZE(image));
  REQUIRE(png_image_finish_read(&image, nullptr, back.data(), 0, nullptr));
  CHECK(back == a.rgb);

  CHECK_THROWS_AS(write_png(tmp.path / "missing" / "x.png", a), Error);
}

TEST_CASE("frames accumulate") {
  std::vector<cplx> v;
  for (int k = 0; k < 10; ++k) v.push_back(std::polar(1.0, k * 0.6));
  const auto pts = points_of(v);
  RenderStyle style;
  style.width = style.height = 64;
  const auto box = auto_viewbox(pts);
  const auto batches = frame_batches(10, 3);
  TempDir tmp;
  const auto files = write_frames(pts, batches, style, box, tmp.path / "frames");
  REQUIRE(files.size() == 4);
  CHECK(files[0].filename() == "frame_00001.png");
  CHECK(files[3].filename() == "frame_00004.png");

  // Frame e equals a direct render of the first e batches.
  for (std::size_t e = 0; e < 4; ++e) {
    const auto direct = render_scatter(std::span(pts).first(batches[e].second), style, box);
    write_png(tmp.path / "direct.png", direct);
    CHECK(slurp(files[e]) == slurp(tmp.path / "direct.png"));
  }
  write_png(tmp.path / "full.png", render_scatter(pts, style, box));
  CHECK(slurp(files[3]) == slurp(tmp.path / "full.png"));

  const auto some = write_frames(pts, batches, style, box, tmp.path / "some", std::vector<std::uint64_t>{2, 4});
  REQUIRE(some.size() == 2);
  CHECK(slurp(some[0]) == slurp(files[1]));
  CHECK(slurp(some[1]) == slurp(files[3]));
  CHECK(frame_name(123) == "frame_00123.png");
}
