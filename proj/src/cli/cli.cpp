#include "gp/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gp/cm.hpp"
#include "gp/error.hpp"
#include "gp/laurent.hpp"
#include "gp/modring.hpp"
#include "gp/periods.hpp"
#include "gp/polynomial.hpp"
#include "gp/render.hpp"
#include "gp/weyl.hpp"

namespace gp::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kProgram = "gperiods";

// ---------------------------------------------------------------------------
// Option values are kept as strings so the resolved configuration can be
// written to meta.json and replayed verbatim.

struct Command {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
  std::function<int(Command&, std::ostream&)> action;

  void option(const std::string& name, const std::string& def, const std::string& help, bool required = false) {
    values[name] = def;
    auto* opt = app->add_option("--" + name, values[name], help);
    if (required) opt->required();
  }
  void flag(const std::string& name, const std::string& help) {
    flags[name] = false;
    app->add_flag("--" + name, flags[name], help);
  }
  const std::string& str(const std::string& name) const { return values.at(name); }
  bool has(const std::string& name) const { return !values.at(name).empty(); }
  bool on(const std::string& name) const { return flags.at(name); }
};

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::InvalidArgument, what); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

i64 to_i64(const std::string& name, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (...) {
    bad("--" + name + ": expected an integer, got '" + text + "'");
  }
  if (used != t.size()) bad("--" + name + ": expected an integer, got '" + text + "'");
  return v;
}

u64 to_u64(const std::string& name, const std::string& text, u64 min = 0) {
  const i64 v = to_i64(name, text);
  if (v < 0 || static_cast<u64>(v) < min) bad("--" + name + " must be >= " + std::to_string(min));
  return static_cast<u64>(v);
}

double to_double(const std::string& name, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(t, &used);
  } catch (...) {
    bad("--" + name + ": expected a number, got '" + text + "'");
  }
  if (used != t.size() || !std::isfinite(v)) bad("--" + name + ": expected a number, got '" + text + "'");
  return v;
}

std::vector<i64> to_list(const std::string& name, const std::string& text) {
  std::vector<i64> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_i64(name, item));
  if (out.empty()) bad("--" + name + ": expected a comma-separated integer list");
  return out;
}

u64 opt_u64(const Command& c, const std::string& name, u64 min = 0) { return to_u64(name, c.str(name), min); }
double opt_double(const Command& c, const std::string& name) { return to_double(name, c.str(name)); }

// ---------------------------------------------------------------------------
// Staged output: everything is written to temporary names first and renamed
// into place only after all writes succeeded.

class Stage {
 public:
  explicit Stage(fs::path dir) : dir_(std::move(dir)) {}
  ~Stage() {
    std::error_code ec;
    for (const auto& [tmp, final_path] : files_) fs::remove(tmp, ec);
    if (!frames_tmp_.empty()) fs::remove_all(frames_tmp_, ec);
  }

  void text(const std::string& name, const std::string& content) {
    const fs::path tmp = prepare(name);
    std::ofstream f(tmp, std::ios::binary);
    f << content;
    f.close();
    if (!f) throw Error(Errc::IoError, "cannot write " + tmp.string());
  }

  template <class Writer>
  void stream(const std::string& name, Writer writer) {
    const fs::path tmp = prepare(name);
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw Error(Errc::IoError, "cannot open " + tmp.string());
    writer(f);
    f.close();
    if (!f) throw Error(Errc::IoError, "cannot write " + tmp.string());
  }

  void png(const std::string& name, const Image& img) { write_png(prepare(name), img); }

  fs::path frames_dir() {
    ensure_dir();
    frames_tmp_ = dir_ / ".frames.tmp";
    std::error_code ec;
    fs::remove_all(frames_tmp_, ec);
    return frames_tmp_;
  }

  std::vector<std::string> commit() {
    std::vector<std::string> names;
    for (const auto& [tmp, final_path] : files_) {
      std::error_code ec;
      fs::rename(tmp, final_path, ec);
      if (ec) throw Error(Errc::IoError, "cannot move " + final_path.string() + " into place: " + ec.message());
      names.push_back(final_path.filename().string());
    }
    files_.clear();
    if (!frames_tmp_.empty()) {
      std::error_code ec;
      fs::remove_all(dir_ / "frames", ec);
      fs::rename(frames_tmp_, dir_ / "frames", ec);
      if (ec) throw Error(Errc::IoError, "cannot move frames into place: " + ec.message());
      frames_tmp_.clear();
      names.push_back("frames/");
    }
    return names;
  }

 private:
  void ensure_dir() {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(Errc::IoError, "cannot create " + dir_.string() + ": " + ec.message());
  }
  fs::path prepare(const std::string& name) {
    ensure_dir();
    const fs::path tmp = dir_ / ("." + name + ".tmp");
    files_.emplace_back(tmp, dir_ / name);
    return tmp;
  }

  fs::path dir_;
  std::vector<std::pair<fs::path, fs::path>> files_;
  fs::path frames_tmp_;
};

ordered_json meta_json(const Command& c, const ordered_json& derived) {
  ordered_json j;
  j["program"] = kProgram;
  j["subcommand"] = c.app->get_name();
  ordered_json opts = ordered_json::object();
  for (const auto& [k, v] : c.values) opts[k] = v;
  j["options"] = opts;
  ordered_json flags = ordered_json::object();
  for (const auto& [k, v] : c.flags) flags[k] = v;
  j["flags"] = flags;
  j["derived"] = derived;
  return j;
}

// ---------------------------------------------------------------------------
// Shared plotting options.

void add_output_options(Command& c) {
  c.option("out", "out", "output directory");
}

void add_plot_options(Command& c) {
  add_output_options(c);
  c.option("color-mod", "1", "color modulus c");
  c.option("formats", "csv,png", "comma-separated subset of csv,png (meta.json is always written)");
  c.option("width", "1024", "image width in pixels");
  c.option("height", "1024", "image height in pixels");
  c.option("radius", "1", "point radius in pixels");
  c.option("opacity", "1", "point opacity in (0, 1]");
  c.option("margin", "0.04", "blank margin as a fraction of the image size");
  c.option("pad", "0.05", "viewbox padding as a fraction of the data extent");
  c.option("viewbox", "", "fixed viewbox re_min,re_max,im_min,im_max");
  c.option("frames", "", "write cumulative animation frames in batches of this many points");
  c.option("frame-list", "", "only write these 1-based frame numbers");
}

struct PlotFormats {
  bool csv = false, png = false;
};

PlotFormats parse_formats(const std::string& text) {
  PlotFormats f;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item == "csv") f.csv = true;
    else if (item == "png") f.png = true;
    else if (item == "json" || item.empty()) continue;
    else bad("--formats: unknown format '" + item + "'");
  }
  return f;
}

RenderStyle parse_style(const Command& c) {
  RenderStyle s;
  s.width = static_cast<int>(opt_u64(c, "width", 64));
  s.height = static_cast<int>(opt_u64(c, "height", 64));
  if (s.width > 16384 || s.height > 16384) bad("image dimensions are limited to 16384 pixels");
  s.point_radius = opt_double(c, "radius");
  s.opacity = opt_double(c, "opacity");
  s.margin = opt_double(c, "margin");
  s.color_modulus = static_cast<std::uint32_t>(opt_u64(c, "color-mod", 1));
  s.validate();
  return s;
}

std::optional<ViewBox> parse_viewbox(const Command& c) {
  if (!c.has("viewbox")) return std::nullopt;
  std::vector<double> v;
  std::stringstream ss(c.str("viewbox"));
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(to_double("viewbox", item));
  if (v.size() != 4 || !(v[0] < v[1] && v[2] < v[3])) bad("--viewbox needs re_min,re_max,im_min,im_max with min < max");
  return ViewBox{v[0], v[1], v[2], v[3]};
}

// All plot options are validated here, before any computation.
struct PlotSettings {
  PlotFormats formats;
  RenderStyle style;
  std::optional<ViewBox> viewbox;
  double pad = 0.05;
  std::optional<u64> frame_batch;
  std::optional<std::vector<u64>> frame_list;
};

PlotSettings parse_plot_settings(const Command& c) {
  PlotSettings s;
  s.formats = parse_formats(c.str("formats"));
  s.style = parse_style(c);
  s.viewbox = parse_viewbox(c);
  s.pad = opt_double(c, "pad");
  if (s.pad < 0) bad("--pad must be >= 0");
  if (c.has("frames")) s.frame_batch = opt_u64(c, "frames", 1);
  if (c.has("frame-list")) {
    if (!s.frame_batch) bad("--frame-list needs --frames");
    std::vector<u64> frames;
    for (i64 f : to_list("frame-list", c.str("frame-list"))) {
      if (f < 1) bad("--frame-list entries are 1-based");
      frames.push_back(static_cast<u64>(f));
    }
    s.frame_list = frames;
  }
  return s;
}

int emit_plot(const Command& c, const PlotSettings& s, const Plot& plot, ordered_json derived, std::ostream& out) {
  derived["points"] = plot.points.size();
  Stage stage(c.str("out"));
  std::optional<ViewBox> box = s.viewbox;
  if (!box && !plot.points.empty()) box = auto_viewbox(plot.points, s.pad);
  if (!box) box = ViewBox{};
  derived["viewbox"] = {box->re_min, box->re_max, box->im_min, box->im_max};

  if (s.formats.csv) stage.stream("points.csv", [&](std::ostream& f) { write_points_csv(f, plot); });
  if (s.formats.png) stage.png("plot.png", render_scatter(plot.points, s.style, *box));
  if (s.frame_batch) {
    const auto batches = frame_batches(plot.points.size(), *s.frame_batch);
    derived["frames"] = batches.size();
    write_frames(plot.points, batches, s.style, *box, stage.frames_dir(), s.frame_list);
  }
  stage.text("meta.json", meta_json(c, derived).dump(2) + "\n");
  const auto names = stage.commit();
  out << "wrote";
  for (const auto& n : names) out << ' ' << (fs::path(c.str("out")) / n).string();
  out << '\n';
  return kOk;
}

MatrixModN parse_matrix(const Command& c, u64 n, std::size_t m) {
  const auto entries = to_list("matrix", c.str("matrix"));
  if (entries.size() != m * m)
    throw Error(Errc::DimensionMismatch,
                "--matrix has " + std::to_string(entries.size()) + " entries, expected " + std::to_string(m * m));
  return MatrixModN(m, n, entries);
}

// ---------------------------------------------------------------------------
// Subcommands.

int run_gauss(Command& c, std::ostream& out) {
  const u64 n = opt_u64(c, "n", 2);
  const u64 omega = opt_u64(c, "omega");
  const auto settings = parse_plot_settings(c);
  const PeriodSpec spec(n, omega, settings.style.color_modulus);
  const Plot plot = gaussian_plot(spec);
  return emit_plot(c, settings, plot, {{"d", spec.d()}, {"omega_reduced", spec.omega()}}, out);
}

int run_superchar(Command& c, std::ostream& out) {
  const u64 n = opt_u64(c, "n", 2);
  const u64 m = opt_u64(c, "m", 1);
  const u64 budget = opt_u64(c, "budget", 1);
  const auto settings = parse_plot_settings(c);
  const MatrixModN a = parse_matrix(c, n, m);
  if (!a.det_unit()) throw Error(Errc::NotInvertible, "matrix is not invertible mod " + std::to_string(n));
  const SupercharSpec spec(a, settings.style.color_modulus);
  const Plot plot = supercharacter_plot(spec, budget);
  return emit_plot(c, settings, plot, {{"d", spec.d()}}, out);
}

int run_gd(Command& c, std::ostream& out) {
  const u64 d = opt_u64(c, "d", 1);
  const u64 samples = opt_u64(c, "samples", 1);
  const u64 seed = opt_u64(c, "seed");
  const u64 max_points = opt_u64(c, "max-points", 1);
  const auto settings = parse_plot_settings(c);
  const IntPolynomial poly = c.has("poly") ? IntPolynomial(to_list("poly", c.str("poly"))) : cyclotomic(d);
  const ReductionTable table(poly, d);
  const auto values = sample_image(table, samples, seed, SampleOptions{max_points});
  Plot plot;
  plot.base = values.size();
  plot.index_dims = 1;
  plot.points.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    plot.points.push_back(PlotPoint{i, values[i], static_cast<std::uint32_t>(i % settings.style.color_modulus), 1.0});
  return emit_plot(c, settings, plot, {{"poly", poly.to_string()}, {"s", table.degree()}}, out);
}

int run_weyl(Command& c, std::ostream& out) {
  const u64 n = opt_u64(c, "n", 1);
  const u64 m = opt_u64(c, "m", 1);
  const u64 budget = opt_u64(c, "budget", 1);
  const auto entries = to_list("matrix", c.str("matrix"));
  const auto v = to_list("v", c.str("v"));
  const WeylInstance inst(n, m, entries, v);
  const auto alpha = alpha_vector(inst);
  const u64 exact = weyl_sum_exact(inst);
  const auto numeric = weyl_sum_numeric(inst, budget);
  const u64 order = mat_order(inst.matrix());
  const double total = std::pow(static_cast<double>(n), static_cast<double>(m));
  const bool agree = std::abs(numeric - std::complex<double>(static_cast<double>(exact), 0.0)) <= 1e-4 * total;

  ordered_json report;
  report["n"] = n;
  report["m"] = m;
  report["d"] = order;
  report["v"] = v;
  report["alpha"] = alpha;
  report["exact"] = exact;
  report["numeric_re"] = numeric.real();
  report["numeric_im"] = numeric.imag();
  report["agree"] = agree;

  Stage stage(c.str("out"));
  stage.text("report.json", report.dump(2) + "\n");
  stage.text("meta.json", meta_json(c, report).dump(2) + "\n");
  stage.commit();
  out << report.dump() << '\n';
  return agree ? kOk : kNumeric;
}

struct FieldSetup {
  FieldData field;
  LatticeContext ctx;
};

FieldSetup field_setup(const Command& c) {
  const FieldData field = field_data(opt_u64(c, "field", 1), c.on("any-class-number"));
  const LatticeContext ctx = lattice_context(field, opt_double(c, "tol"));
  if (ctx.recursion_residual() > ctx.tol())
    throw Error(Errc::ToleranceOutOfRange, "Laurent recursion self-check exceeds the tolerance");
  return {field, ctx};
}

int run_rcfp(Command& c, std::ostream& out) {
  const u64 m = opt_u64(c, "modulus", 2);
  const auto element = to_list("element", c.str("element"));
  if (element.size() != 2) bad("--element expects x,y for x + y*alpha");
  const double root = opt_double(c, "rescale-root");
  if (!(root > 0)) bad("--rescale-root must be positive");
  RcfpOptions options;
  options.budget = opt_u64(c, "budget", 1);
  options.use_weber = c.on("weber");
  const auto settings = parse_plot_settings(c);
  options.color_modulus = settings.style.color_modulus;
  const auto [field, ctx] = field_setup(c);
  const OkElement a(field, element[0], element[1], m);
  if (!a.is_unit()) throw Error(Errc::NotAUnit, "element is not a unit mod " + std::to_string(m));

  Plot plot = rcfp_plot(field, a, ctx, options);
  if (c.on("rescale"))
    for (auto& p : plot.points) p.value = rescale_to_disc(p.value, m, root);
  for (const auto& p : plot.points)
    if (!std::isfinite(p.value.real()) || !std::isfinite(p.value.imag()))
      throw Error(Errc::PoleAtLattice, "non-finite RCFP value");
  return emit_plot(c, settings, plot,
                   {{"r", quotient_order(field, a)}, {"g2_re", ctx.g2().real()}, {"g3_re", ctx.g3().real()}}, out);
}

int run_torsion(Command& c, std::ostream& out) {
  const u64 m = opt_u64(c, "modulus", 2);
  TorsionPlotOptions options;
  options.s_max = opt_double(c, "s-max");
  options.gamma = opt_double(c, "gamma");
  options.budget = opt_u64(c, "budget", 1);
  const std::string coord = c.str("coordinate");
  if (coord != "x" && coord != "y") bad("--coordinate must be x or y");
  if (!(options.s_max > 0)) bad("--s-max must be positive");
  const auto settings = parse_plot_settings(c);
  options.color_modulus = settings.style.color_modulus;
  const auto [field, ctx] = field_setup(c);
  const Plot plot =
      torsion_coordinate_plot(field, m, coord == "x" ? Coordinate::X : Coordinate::Y, ctx, options);
  return emit_plot(c, settings, plot, {{"coordinate", coord}}, out);
}

ordered_json matrix_json(const MatrixModN& a) {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < a.dim(); ++r) {
    ordered_json row = ordered_json::array();
    for (std::size_t col = 0; col < a.dim(); ++col) row.push_back(a(r, col));
    rows.push_back(row);
  }
  return rows;
}

int run_find_element(Command& c, std::ostream& out) {
  const std::string kind = c.str("kind");
  const u64 seed = opt_u64(c, "seed");
  const u64 budget = opt_u64(c, "budget", 1);
  ordered_json result;
  result["kind"] = kind;

  if (kind == "matrix") {
    const u64 n = opt_u64(c, "n", 2);
    const u64 m = opt_u64(c, "m", 1);
    const u64 d = opt_u64(c, "d", 1);
    const MatrixModN a = find_matrix(n, m, d, c.on("vanishing"), seed, FindMatrixOptions{budget});
    const MatrixModN residue = eval_poly(cyclotomic(d), a);
    result["n"] = n;
    result["d"] = d;
    result["matrix"] = matrix_json(a);
    result["order"] = mat_order(a);
    result["phi_d_residue"] = matrix_json(residue);
    result["phi_d_vanishes"] = residue == MatrixModN::zero(m, n);
  } else if (kind == "ok") {
    const u64 m = opt_u64(c, "n", 2);
    const u64 d = opt_u64(c, "d", 1);
    const FieldData field = field_data(opt_u64(c, "field", 1), c.on("any-class-number"));
    const OkElement a = find_ok_element(field, m, d, seed, budget);
    result["field"] = field.d;
    result["modulus"] = m;
    result["element"] = {a.x(), a.y()};
    result["quotient_order"] = quotient_order(field, a);
    result["matrix_order"] = mat_order(a.matrix());
  } else if (kind == "ppower") {
    const u64 p = opt_u64(c, "p", 2);
    const u64 e = opt_u64(c, "e", 1);
    const u64 a = opt_u64(c, "a", 1);
    const i64 beta = to_i64("beta", c.str("beta"));
    u64 pe = 1;
    for (u64 i = 0; i < e && pe <= UINT64_MAX / p; ++i) pe *= p;
    const Residue omega = order_p_power_element(p, static_cast<unsigned>(e), static_cast<unsigned>(a), Residue(beta, pe));
    result["modulus"] = omega.modulus();
    result["omega"] = omega.value();
    result["order"] = mul_order(omega);
  } else {
    bad("--kind must be matrix, ok or ppower");
  }

  Stage stage(c.str("out"));
  stage.text("element.json", result.dump(2) + "\n");
  stage.text("meta.json", meta_json(c, result).dump(2) + "\n");
  stage.commit();
  out << result.dump() << '\n';
  return kOk;
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::BudgetExceeded:
    case Errc::NotFound: return kBudget;
    case Errc::PoleAtLattice:
    case Errc::ToleranceOutOfRange:
    case Errc::Overflow: return kNumeric;
    case Errc::IoError: return kIo;
    default: return kUsage;
  }
}

int run_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth);

std::vector<std::string> replay_args(const fs::path& meta_path, const std::string& out_override) {
  std::ifstream f(meta_path);
  if (!f) throw Error(Errc::IoError, "cannot read " + meta_path.string());
  ordered_json meta;
  try {
    meta = ordered_json::parse(f);
  } catch (const std::exception& e) {
    throw Error(Errc::InvalidArgument, "malformed meta.json: " + std::string(e.what()));
  }
  if (!meta.contains("subcommand") || !meta["subcommand"].is_string()) bad("meta.json has no subcommand");
  std::vector<std::string> args = {meta["subcommand"].get<std::string>()};
  if (args[0] == "replay") bad("meta.json cannot describe a replay");
  const ordered_json options = meta.value("options", ordered_json::object());
  const ordered_json flags = meta.value("flags", ordered_json::object());
  for (const auto& [k, v] : options.items()) {
    std::string value = v.get<std::string>();
    if (k == "out" && !out_override.empty()) value = out_override;
    if (value.empty()) continue;
    args.push_back("--" + k);
    args.push_back(value);
  }
  for (const auto& [k, v] : flags.items())
    if (v.get<bool>()) args.push_back("--" + k);
  return args;
}

int run_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth) {
  CLI::App app{"Gaussian periods, supercharacters and ray class field periods", kProgram};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for all subcommands");

  std::vector<std::unique_ptr<Command>> commands;
  auto make = [&](const std::string& name, const std::string& help, std::function<int(Command&, std::ostream&)> fn) {
    commands.push_back(std::make_unique<Command>());
    Command& c = *commands.back();
    c.app = app.add_subcommand(name, help);
    c.action = std::move(fn);
    return &c;
  };

  Command* c = make("gauss", "Gaussian period plot eta_{n,omega}", run_gauss);
  c->option("n", "", "modulus n", true);
  c->option("omega", "", "unit omega mod n", true);
  add_plot_options(*c);

  c = make("superchar", "cyclic supercharacter plot theta_{n,m,A}", run_superchar);
  c->option("n", "", "modulus n", true);
  c->option("m", "1", "dimension m");
  c->option("matrix", "", "row-major m*m integer entries, comma-separated", true);
  c->option("budget", std::to_string(kDefaultPlotBudget), "maximum number of points n^m");
  add_plot_options(*c);

  c = make("gd", "sampled image of the Laurent envelope g_d", run_gd);
  c->option("d", "", "order d", true);
  c->option("poly", "", "monic divisor of x^d - 1, ascending coefficients (default Phi_d)");
  c->option("samples", "300", "samples per torus axis");
  c->option("seed", "0", "sampling seed");
  c->option("max-points", "2000000", "cap on sample count");
  add_plot_options(*c);

  c = make("weyl", "exact and numeric Weyl sums for Lambda_n", run_weyl);
  c->app->alias("weyl-check");
  c->option("n", "", "modulus n", true);
  c->option("m", "1", "dimension m");
  c->option("matrix", "", "row-major integer matrix, used unreduced for alpha", true);
  c->option("v", "", "coefficients v_0,...,v_{s-1}", true);
  c->option("budget", std::to_string(kWeylBudget), "maximum number of terms n^m");
  add_output_options(*c);

  c = make("rcfp", "ray class field period plot", run_rcfp);
  c->option("field", "", "squarefree d for K = Q(sqrt(-d))", true);
  c->option("modulus", "", "m for the modulus (m)", true);
  c->option("element", "", "x,y for A = x + y*alpha", true);
  c->option("tol", "1e-12", "numerical tolerance for p");
  c->option("budget", std::to_string(kTorsionBudget), "maximum number of torsion points m^2");
  c->option("rescale-root", "4", "root r in w / (|w| + (m^2)^(1/r))");
  c->flag("rescale", "map values into the unit disc");
  c->flag("weber", "apply the Weber power to each term");
  c->flag("any-class-number", "allow fields of class number > 1");
  add_plot_options(*c);

  c = make("torsion", "p or p' at the m-torsion points", run_torsion);
  c->option("field", "", "squarefree d for K = Q(sqrt(-d))", true);
  c->option("modulus", "", "torsion level m", true);
  c->option("coordinate", "x", "x for p, y for p'");
  c->option("s-max", "8", "size of the largest points");
  c->option("gamma", "0.5", "size decay exponent in the additive order");
  c->option("tol", "1e-12", "numerical tolerance for p");
  c->option("budget", std::to_string(kTorsionBudget), "maximum number of torsion points m^2");
  c->flag("any-class-number", "allow fields of class number > 1");
  add_plot_options(*c);

  c = make("find-element", "search for elements of a given order", run_find_element);
  c->option("kind", "matrix", "matrix, ok, or ppower");
  c->option("n", "", "modulus");
  c->option("m", "1", "matrix dimension");
  c->option("d", "", "target order");
  c->option("field", "", "field d for --kind ok");
  c->option("p", "", "prime for --kind ppower");
  c->option("e", "", "exponent for --kind ppower");
  c->option("a", "", "order exponent a for --kind ppower");
  c->option("beta", "1", "beta for --kind ppower");
  c->option("seed", "0", "search seed");
  c->option("budget", "1000000", "candidate budget");
  c->flag("vanishing", "also require Phi_d(A) = 0");
  c->flag("any-class-number", "allow fields of class number > 1");
  add_output_options(*c);

  std::string replay_meta, replay_out;
  CLI::App* replay = app.add_subcommand("replay", "re-run the invocation recorded in a meta.json");
  replay->add_option("meta", replay_meta, "path to meta.json")->required();
  replay->add_option("--out", replay_out, "output directory (default: the recorded one)");

  std::vector<const char*> argv = {kProgram};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (replay->parsed()) {
      if (depth > 0) bad("nested replay");
      return run_args(replay_args(replay_meta, replay_out), out, err, depth + 1);
    }
    for (auto& cmd : commands)
      if (cmd->app->parsed()) return cmd->action(*cmd, out);
  } catch (const Error& e) {
    err << kProgram << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::bad_alloc&) {
    err << kProgram << ": out of memory\n";
    return kBudget;
  } catch (const fs::filesystem_error& e) {
    err << kProgram << ": " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return run_args(args, out, err, 0);
}

}  // namespace gp::cli
