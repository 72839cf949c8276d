#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include "gp/cli.hpp"

namespace fs = std::filesystem;
using gp::cli::run;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("gp_cli_" + std::to_string(std::random_device{}()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Result {
  int code;
  std::string out, err;
};

Result gperiods(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("gauss writes points, image and metadata") {
  TempDir tmp;
  const auto r = gperiods({"gauss", "--n", "10", "--omega", "3", "--out", tmp / "g", "--width", "128", "--height", "128"});
  REQUIRE(r.code == 0);
  const auto rows = lines(tmp.path / "g" / "points.csv");
  REQUIRE(rows.size() == 11);
  CHECK(rows[0] == "index,re,im,color");
  CHECK(fs::exists(tmp.path / "g" / "plot.png"));
  const auto meta = nlohmann::json::parse(slurp(tmp.path / "g" / "meta.json"));
  CHECK(meta["subcommand"] == "gauss");
  CHECK(meta["options"]["n"] == "10");
  CHECK(meta["derived"]["d"] == 4);
  CHECK(meta["derived"]["points"] == 10);
  for (const auto& e : fs::directory_iterator(tmp.path / "g")) CHECK(e.path().filename().string()[0] != '.');
}

TEST_CASE("gauss with omega 1 lies on the unit circle") {
  TempDir tmp;
  REQUIRE(gperiods({"gauss", "--n", "7", "--omega", "1", "--color-mod", "1", "--out", tmp / "g", "--formats", "csv"})
              .code == 0);
  const auto rows = lines(tmp.path / "g" / "points.csv");
  REQUIRE(rows.size() == 8);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::stringstream ss(rows[i]);
    std::string idx, re, im;
    std::getline(ss, idx, ',');
    std::getline(ss, re, ',');
    std::getline(ss, im, ',');
    CHECK(std::hypot(std::stod(re), std::stod(im)) == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_FALSE(fs::exists(tmp.path / "g" / "plot.png"));
}

TEST_CASE("invalid parameters leave no output") {
  TempDir tmp;
  struct Case {
    std::vector<std::string> args;
    int code;
  };
  const std::string out = tmp / "bad";
  const Case cases[] = {
      {{"gauss", "--n", "10", "--omega", "5", "--out", out}, 2},
      {{"gauss", "--n", "10", "--omega", "x", "--out", out}, 2},
      {{"gauss", "--n", "10", "--out", out}, 2},
      {{"gauss", "--n", "10", "--omega", "3", "--width", "10", "--out", out}, 2},
      {{"gauss", "--n", "10", "--omega", "3", "--formats", "gif", "--out", out}, 2},
      {{"gauss", "--n", "10", "--omega", "3", "--frame-list", "1", "--out", out}, 2},
      {{"superchar", "--n", "6", "--m", "2", "--matrix", "2,0,0,1", "--out", out}, 2},
      {{"superchar", "--n", "6", "--m", "2", "--matrix", "1,0,0", "--out", out}, 2},
      {{"superchar", "--n", "455", "--m", "2", "--matrix", "0,1,454,454", "--budget", "1000", "--out", out}, 3},
      {{"rcfp", "--field", "5", "--modulus", "25", "--element", "1,1", "--out", out}, 2},
      {{"rcfp", "--field", "7", "--modulus", "25", "--element", "5,0", "--out", out}, 2},
      {{"rcfp", "--field", "7", "--modulus", "25", "--element", "1,1", "--tol", "1e-3", "--out", out}, 4},
      {{"rcfp", "--field", "7", "--modulus", "2000", "--element", "3,0", "--out", out}, 3},
      {{"torsion", "--field", "7", "--modulus", "5", "--coordinate", "z", "--out", out}, 2},
      {{"weyl", "--n", "7", "--matrix", "2", "--v", "0,0", "--out", out}, 2},
      {{"weyl", "--n", "7", "--m", "4", "--matrix", "1,0,0,0,0,1,0,0,0,0,1,0,0,0,0,1", "--v", "1", "--budget", "100",
        "--out", out},
       3},
      {{"find-element", "--kind", "matrix", "--n", "25", "--d", "5", "--vanishing", "--budget", "500", "--out", out}, 2},
      {{"find-element", "--kind", "ok", "--field", "7", "--n", "625", "--d", "7", "--budget", "200", "--out", out}, 2},
      {{"find-element", "--kind", "ppower", "--p", "7", "--e", "1", "--a", "2", "--out", out}, 2},
      {{"find-element", "--kind", "nope", "--out", out}, 2},
      {{"nosuch"}, 2},
      {{}, 2},
  };
  for (const auto& c : cases) {
    CAPTURE(c.args.empty() ? std::string() : c.args[0]);
    const auto r = gperiods(c.args);
    CHECK(r.code == c.code);
    CHECK_FALSE(fs::exists(out));
  }
}

TEST_CASE("io failures exit with 5") {
  TempDir tmp;
  std::ofstream(tmp.path / "file") << "x";
  const auto r = gperiods({"gauss", "--n", "7", "--omega", "2", "--out", tmp / "file/sub"});
  CHECK(r.code == 5);
  CHECK(gperiods({"replay", tmp / "missing.json"}).code == 5);
}

TEST_CASE("superchar and gd") {
  TempDir tmp;
  REQUIRE(gperiods({"superchar", "--n", "3", "--m", "1", "--matrix", "1", "--out", tmp / "s", "--formats", "csv"}).code ==
          0);
  CHECK(lines(tmp.path / "s" / "points.csv").size() == 4);

  REQUIRE(gperiods({"superchar", "--n", "35", "--m", "2", "--matrix", "0,1,34,34", "--color-mod", "5", "--out",
                    tmp / "s2", "--width", "64", "--height", "64"})
              .code == 0);
  const auto rows = lines(tmp.path / "s2" / "points.csv");
  REQUIRE(rows.size() == 35 * 35 + 1);
  CHECK(rows[0] == "i0,i1,re,im,color");
  CHECK(rows[1] == "0,0,3,0,0");

  REQUIRE(gperiods({"gd", "--d", "3", "--samples", "300", "--out", tmp / "gd", "--formats", "csv"}).code == 0);
  CHECK(lines(tmp.path / "gd" / "points.csv").size() == 90001);
}

TEST_CASE("weyl report") {
  TempDir tmp;
  const auto r = gperiods({"weyl", "--n", "7", "--m", "1", "--matrix", "2", "--v", "0,1", "--out", tmp / "w"});
  REQUIRE(r.code == 0);
  const auto report = nlohmann::json::parse(slurp(tmp.path / "w" / "report.json"));
  CHECK(report["exact"] == 0);
  CHECK(report["agree"] == true);
  CHECK(report["alpha"] == nlohmann::json::array({2}));
  CHECK(nlohmann::json::parse(r.out) == report);

  const auto mu = gperiods({"weyl-check", "--n", "4", "--m", "6", "--matrix",
                            "0,0,0,0,0,-1,1,0,0,0,0,-2,0,1,0,0,0,-3,0,0,1,0,0,-3,0,0,0,1,0,-3,0,0,0,0,1,-2", "--v",
                            "1,1,1,1,1,0", "--out", tmp / "mu"});
  REQUIRE(mu.code == 0);
  const auto j = nlohmann::json::parse(mu.out);
  CHECK(j["exact"] == 4096);
  CHECK(j["alpha"] == nlohmann::json::array({0, 0, 0, 0, 0, 0}));
}

TEST_CASE("rcfp, torsion and find-element") {
  TempDir tmp;
  REQUIRE(gperiods({"rcfp", "--field", "7", "--modulus", "25", "--element", "6,5", "--color-mod", "5", "--rescale",
                    "--out", tmp / "r", "--width", "64", "--height", "64"})
              .code == 0);
  const auto rows = lines(tmp.path / "r" / "points.csv");
  REQUIRE(rows.size() == 25 * 25);
  CHECK(rows[0] == "i0,i1,re,im,color");
  CHECK(rows[1].rfind("0,1,", 0) == 0);

  REQUIRE(gperiods({"torsion", "--field", "1", "--modulus", "2", "--coordinate", "y", "--out", tmp / "t", "--formats",
                    "csv"})
              .code == 0);
  CHECK(lines(tmp.path / "t" / "points.csv").size() == 4);

  auto r = gperiods({"find-element", "--kind", "matrix", "--n", "455", "--m", "2", "--d", "3", "--vanishing", "--out",
                     tmp / "f1"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["order"] == 3);
  CHECK(j["phi_d_vanishes"] == true);
  CHECK(nlohmann::json::parse(slurp(tmp.path / "f1" / "element.json")) == j);

  r = gperiods({"find-element", "--kind", "ok", "--field", "7", "--n", "625", "--d", "5", "--out", tmp / "f2"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["quotient_order"] == 5);

  r = gperiods({"find-element", "--kind", "ppower", "--p", "5", "--e", "4", "--a", "1", "--out", tmp / "f3"});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["omega"] == 126);
  CHECK(j["order"] == 5);

  CHECK(gperiods({"find-element", "--kind", "matrix", "--n", "25", "--d", "5", "--vanishing", "--budget", "500",
                  "--out", tmp / "f4"})
            .code != 0);
}

TEST_CASE("frames") {
  TempDir tmp;
  REQUIRE(gperiods({"gauss", "--n", "10", "--omega", "3", "--frames", "3", "--out", tmp / "g", "--width", "64",
                    "--height", "64"})
              .code == 0);
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(tmp.path / "g" / "frames")) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  CHECK(names == std::vector<std::string>{"frame_00001.png", "frame_00002.png", "frame_00003.png", "frame_00004.png"});
  CHECK(slurp(tmp.path / "g" / "frames" / "frame_00004.png") == slurp(tmp.path / "g" / "plot.png"));

  REQUIRE(gperiods({"gauss", "--n", "10", "--omega", "3", "--frames", "3", "--frame-list", "2", "--out", tmp / "h",
                    "--width", "64", "--height", "64"})
              .code == 0);
  CHECK(fs::exists(tmp.path / "h" / "frames" / "frame_00002.png"));
  CHECK_FALSE(fs::exists(tmp.path / "h" / "frames" / "frame_00001.png"));
}

TEST_CASE("runs are reproducible and replayable") {
  TempDir tmp;
  const std::vector<std::string> base = {"gauss", "--n", "2021", "--omega", "45", "--color-mod", "7", "--width", "200",
                                         "--height", "150", "--radius", "0.8", "--opacity", "0.5"};
  auto with_out = [&](const std::string& dir) {
    auto a = base;
    a.push_back("--out");
    a.push_back(dir);
    return a;
  };
  REQUIRE(gperiods(with_out(tmp / "a")).code == 0);
  REQUIRE(gperiods(with_out(tmp / "b")).code == 0);
  for (const char* f : {"points.csv", "plot.png"}) CHECK(slurp(tmp.path / "a" / f) == slurp(tmp.path / "b" / f));

  REQUIRE(gperiods({"replay", tmp / "a/meta.json", "--out", tmp / "c"}).code == 0);
  for (const char* f : {"points.csv", "plot.png", "meta.json"})
    CHECK(slurp(tmp.path / "a" / f) ==
          (std::string(f) == "meta.json"
               ? [&] {
                   auto m = nlohmann::ordered_json::parse(slurp(tmp.path / "c" / f));
                   m["options"]["out"] = tmp / "a";
                   return m.dump(2) + "\n";
                 }()
               : slurp(tmp.path / "c" / f)));

  REQUIRE(gperiods({"rcfp", "--field", "3", "--modulus", "13", "--element", "2,1", "--weber", "--out", tmp / "r",
                    "--width", "64", "--height", "64"})
              .code == 0);
  REQUIRE(gperiods({"replay", tmp / "r/meta.json", "--out", tmp / "r2"}).code == 0);
  CHECK(slurp(tmp.path / "r" / "points.csv") == slurp(tmp.path / "r2" / "points.csv"));
  CHECK(nlohmann::json::parse(slurp(tmp.path / "r2" / "meta.json"))["flags"]["weber"] == true);

  std::ofstream(tmp.path / "junk.json") << "{not json";
  CHECK(gperiods({"replay", tmp / "junk.json"}).code == 2);
}
