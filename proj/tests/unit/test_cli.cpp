#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "ribaucour/cli.hpp"
#include "ribaucour/io.hpp"
#include "ribaucour/smooth.hpp"
#include "support/generators.hpp"

using namespace ribaucour;
using namespace ribaucour::testing;
namespace fs = std::filesystem;
using io::Json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("ribaucour-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ribaucour");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

void write(const std::string& path, const std::string& text) { io::write_atomic(path, text); }

std::vector<Point> quarter_circle(std::size_t count) {
  std::vector<Point> pts;
  for (std::size_t k = 0; k < count; ++k) {
    const double u = 0.5 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count - 1);
    pts.push_back(Eigen::Vector3d(3.0 * std::cos(u), 3.0 * std::sin(u), 0.5 * u));
  }
  return pts;
}

std::string curve_text(const std::vector<Point>& pts) {
  return io::dump(io::to_json(io::CurveFile{3, pts, {}}));
}

const std::string kUnitSphere = R"({"kind":"sphere","center":[0,0,0],"radius":1})";

std::vector<Point> points_of(const std::string& path) {
  return std::get<io::CurveFile>(io::parse_artifact(io::read_json_file(path))).points;
}

}  // namespace

TEST_CASE("transform writes a curve on the target sphere") {
  TempDir dir;
  write(dir / "x.json", curve_text(quarter_circle(12)));
  const Run r = run({"transform", "--input", dir / "x.json", "--sphere", kUnitSphere, "--initial",
                     "1,0,0", "--output", dir / "y.json", "--report", dir / "r.json"});
  REQUIRE(r.code == cli::kExitOk);
  const std::vector<Point> y = points_of(dir / "y.json");
  REQUIRE(y.size() == 12);
  CHECK(y.front() == Point(Eigen::Vector3d(1, 0, 0)));
  for (const Point& p : y) CHECK(std::abs(p.norm() - 1.0) < 1e-12);
  const Json report = io::read_json_file(dir / "r.json");
  CHECK(report["kind"] == "transform_report");
  CHECK(report["passed"] == true);
  CHECK(report["residuals"].size() == 11);
}

TEST_CASE("reruns are byte-identical") {
  TempDir dir;
  write(dir / "x.json", curve_text(quarter_circle(10)));
  const std::vector<std::string> args{"transform", "--input", dir / "x.json", "--sphere",
                                      kUnitSphere, "--seed", "42"};
  const Run a = run(args);
  const Run b = run(args);
  REQUIRE(a.code == cli::kExitOk);
  CHECK(a.out == b.out);
  std::vector<std::string> other = args;
  other.back() = "43";
  CHECK(run(other).out != a.out);
}

TEST_CASE("validate accepts a transform and rejects a perturbed partner") {
  TempDir dir;
  write(dir / "x.json", curve_text(quarter_circle(12)));
  REQUIRE(run({"transform", "--input", dir / "x.json", "--sphere", kUnitSphere, "--seed", "7",
               "--output", dir / "y.json"})
              .code == cli::kExitOk);
  const Run ok = run({"validate", "--input", dir / "x.json", "--input2", dir / "y.json"});
  CHECK(ok.code == cli::kExitOk);
  const Json report = Json::parse(ok.out);
  CHECK(report["kind"] == "pair_report");
  CHECK(report["max_residual"].get<double>() < 1e-12);

  std::vector<Point> bent = points_of(dir / "y.json");
  bent[5] += Eigen::Vector3d(0.0, 0.01, 0.02);
  write(dir / "z.json", curve_text(bent));
  const Run bad = run({"validate", "--input", dir / "x.json", "--input2", dir / "z.json",
                       "--report", dir / "r.json"});
  CHECK(bad.code == cli::kExitGeometry);
  CHECK(io::read_json_file(dir / "r.json")["passed"] == false);
}

TEST_CASE("geometric failures exit with 2 and a JSON diagnostic") {
  TempDir dir;
  write(dir / "x.json", curve_text(quarter_circle(12)));
  const std::string through = R"({"kind":"sphere","center":[0,0,0],"radius":3})";
  const Run r = run({"transform", "--input", dir / "x.json", "--sphere", through, "--initial",
                     "3,0,0", "--report", dir / "r.json"});
  CHECK(r.code == cli::kExitGeometry);
  const Json err = Json::parse(r.err);
  CHECK(err["kind"] == "error");
  CHECK(err["error"] == "CurveMeetsSphere");
  CHECK(err["index"] == 0);
  CHECK(io::read_json_file(dir / "r.json") == err);

  const Run off = run({"transform", "--input", dir / "x.json", "--sphere", kUnitSphere,
                       "--initial", "2,0,0"});
  CHECK(off.code == cli::kExitGeometry);
  CHECK(Json::parse(off.err)["error"] == "InitialNotOnSphere");
}

TEST_CASE("input and usage errors exit with 1") {
  TempDir dir;
  write(dir / "bad.json", "{\"kind\": \"curve\", \"ambient_dim\": 3, \"points\": [[0,0,");
  write(dir / "flat.json", R"({"kind":"curve","ambient_dim":3,"points":[[0,0],[1,0]]})");
  write(dir / "odd.json", R"({"kind":"mesh","ambient_dim":3,"points":[]})");
  write(dir / "x.json", curve_text(quarter_circle(5)));
  const auto code = [&](std::vector<std::string> args) { return run(std::move(args)).code; };
  CHECK(code({"transform", "--input", dir / "bad.json", "--sphere", kUnitSphere}) == cli::kExitIo);
  CHECK(code({"transform", "--input", dir / "flat.json", "--sphere", kUnitSphere}) == cli::kExitIo);
  CHECK(code({"transform", "--input", dir / "odd.json", "--sphere", kUnitSphere}) == cli::kExitIo);
  CHECK(code({"transform", "--input", dir / "missing.json", "--sphere", kUnitSphere}) ==
        cli::kExitIo);
  CHECK(code({"transform", "--input", dir / "x.json"}) == cli::kExitIo);
  CHECK(code({"transform", "--input", dir / "x.json", "--sphere", R"({"kind":"sphere"})"}) ==
        cli::kExitIo);
  CHECK(code({"transform", "--input", dir / "x.json", "--sphere", kUnitSphere, "--initial",
              "1,0"}) == cli::kExitIo);
  CHECK(code({"transform", "--input", dir / "x.json", "--sphere", kUnitSphere, "--tol", "-1"}) ==
        cli::kExitIo);
  CHECK(code({"frobnicate"}) == cli::kExitIo);
  CHECK(code({}) == cli::kExitIo);
  CHECK(code({"--help"}) == cli::kExitOk);
}

TEST_CASE("framed curves get the smooth reduction with induced normals") {
  TempDir dir;
  std::vector<Point> pts, radial;
  for (int k = 0; k < 16; ++k) {
    const double u = 1.5 * std::numbers::pi * k / 15.0;
    pts.push_back(Eigen::Vector3d(2 * std::cos(u), 2 * std::sin(u), 0));
    radial.push_back(pts.back() / 2.0);
  }
  write(dir / "x.json", io::dump(io::to_json(io::CurveFile{3, pts, radial})));
  const Run r = run({"transform", "--input", dir / "x.json", "--sphere", kUnitSphere});
  REQUIRE(r.code == cli::kExitOk);
  const auto out = std::get<io::CurveFile>(io::parse_artifact(Json::parse(r.out)));
  REQUIRE(out.normals);
  for (std::size_t k = 0; k < 16; ++k) {
    CHECK((out.points[k] - pts[k] / 2.0).norm() < 1e-14);
    // The sphere through 2n and n touching the larger circle has center 1.5n.
    CHECK((out.normals->at(k) + radial[k]).norm() < 1e-12);
  }
}

TEST_CASE("channel writes an OBJ mesh of the strips") {
  TempDir dir;
  std::vector<Point> rows;
  for (double r : {2.0, 1.0}) {
    for (int k = 0; k < 8; ++k) {
      const double u = 1.5 * std::numbers::pi * k / 7.0;
      rows.push_back(Eigen::Vector3d(r * std::cos(u), r * std::sin(u), 0));
    }
  }
  write(dir / "net.json", io::dump(io::to_json(io::NetFile{3, 2, 8, rows})));
  const Run r = run({"channel", "--input", dir / "net.json", "--normal", "1,0,0",
                     "--arc-samples", "4", "--report", dir / "r.json"});
  REQUIRE(r.code == cli::kExitOk);
  std::istringstream in(r.out);
  std::string line;
  int vertices = 0, faces = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag == "v") {
      double x, y, z;
      fields >> x >> y >> z;
      const double rho = std::hypot(x, y);
      CHECK(std::abs(std::hypot(rho - 1.5, z) - 0.5) < 1e-12);
      ++vertices;
    } else {
      REQUIRE(tag == "f");
      int a, b, c, d;
      fields >> a >> b >> c >> d;
      CHECK(std::min({a, b, c, d}) >= 1);
      CHECK(std::max({a, b, c, d}) <= 32);
      ++faces;
    }
  }
  CHECK(vertices == 4 * 8);
  CHECK(faces == 3 * 7);
  CHECK(io::read_json_file(dir / "r.json")["kind"] == "channel_report");

  CHECK(run({"channel", "--input", dir / "net.json", "--arc-samples", "1"}).code == cli::kExitIo);
}

TEST_CASE("coords routes agree") {
  TempDir dir;
  write(dir / "x.json", curve_text(quarter_circle(10)));
  const std::string e1 = R"({"kind":"plane","normal":[1,0,0],"offset":-2})";
  const std::string e2 = R"({"kind":"plane","normal":[0,2,0],"offset":-6})";
  const Run r = run({"coords", "--input", dir / "x.json", "--sphere", e1, "--sphere2", e2,
                     "--seed", "3", "--report", dir / "r.json"});
  REQUIRE(r.code == cli::kExitOk);
  const Json j = Json::parse(r.out);
  CHECK(j["order_check"].get<double>() < 1e-7);
  const auto ij = std::get<io::CurveFile>(io::parse_artifact(j["route_ij"])).points;
  for (const Point& p : ij) CHECK(std::abs(p(0) + 2.0) < 1e-9);
  CHECK(run({"coords", "--input", dir / "x.json", "--sphere", e1, "--sphere2", e2, "--order",
             "xy"})
            .code == cli::kExitIo);
}

TEST_CASE("reduce-net reports route mismatches") {
  TempDir dir;
  std::vector<Point> grid;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) grid.push_back(Eigen::Vector3d(0.5 * i, 0.5 * j, 0));
  write(dir / "net.json", io::dump(io::to_json(io::NetFile{3, 3, 4, grid})));
  const std::string e = R"({"kind":"sphere","center":[0.5,0.75,3],"radius":1})";
  const Run r = run({"reduce-net", "--input", dir / "net.json", "--sphere", e, "--seed", "5",
                     "--output", dir / "y.json", "--report", dir / "r.json"});
  REQUIRE(r.code == cli::kExitOk);
  const Json report = io::read_json_file(dir / "r.json");
  CHECK(report["route_mismatch"].size() == 3);
  CHECK(report["cell_residuals"].size() == 2);
  CHECK(report["max_mismatch"].get<double>() < 1e-8);
  CHECK(run({"validate", "--input", dir / "net.json", "--input2", dir / "y.json"}).code ==
        cli::kExitOk);
  CHECK(run({"reduce-net", "--input", dir / "x.json", "--sphere", e}).code == cli::kExitIo);
}

TEST_CASE("number formatting round-trips") {
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::ldexp(uniform(rng, -1.0, 1.0), static_cast<int>(uniform(rng, -300, 300)));
    CHECK(std::stod(io::format_number(v)) == v);
  }
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(1.0) == "1");
  CHECK(io::format_number(-2.5e-10) == "-2.5e-10");

  const Json j = io::to_json(io::CurveFile{3, quarter_circle(7), {}});
  const std::string text = io::dump(j);
  CHECK(text.back() == '\n');
  CHECK(io::dump(Json::parse(text)) == text);
  const auto back = std::get<io::CurveFile>(io::parse_artifact(Json::parse(text)));
  CHECK(back.points == quarter_circle(7));
}

TEST_CASE("point and sphere arguments") {
  CHECK(io::parse_point("1, -2.5,3e2") == Point(Eigen::Vector3d(1, -2.5, 300)));
  CHECK_THROWS_AS(io::parse_point("1,x"), io::SchemaError);
  CHECK_THROWS_AS(io::parse_point(""), io::SchemaError);
  // A non-unit plane normal is normalized together with its offset.
  const SphereVec p = io::parse_sphere(Json::parse(R"({"kind":"plane","normal":[0,0,2],"offset":4})"));
  CHECK(std::abs(inner(p.vec(), lift(Point(Eigen::Vector3d(5, -1, 2))))) < 1e-15);
  CHECK_THROWS_AS(io::parse_sphere(Json::parse(R"({"kind":"sphere","center":[0,0,0],"radius":-1})")),
                  io::SchemaError);
}

TEST_CASE("interpolate emits a chain of five curves") {
  TempDir dir;
  std::vector<Point> a = quarter_circle(9), b;
  for (const Point& p : a) b.push_back(Point(Eigen::Vector3d(p(1), p(0), -p(2) - 1.0)));
  write(dir / "a.json", curve_text(a));
  write(dir / "b.json", curve_text(b));
  const std::string e = R"({"kind":"sphere","center":[0,0,8],"radius":2})";
  const Run r = run({"interpolate", "--input", dir / "a.json", "--input2", dir / "b.json",
                     "--sphere", e, "--seed", "11", "--report", dir / "r.json"});
  REQUIRE(r.code == cli::kExitOk);
  const Json chain = Json::parse(r.out);
  REQUIRE(chain["curves"].size() == 5);
  CHECK(std::get<io::CurveFile>(io::parse_artifact(chain["curves"][0])).points == a);
  CHECK(std::get<io::CurveFile>(io::parse_artifact(chain["curves"][4])).points == b);
  const Json report = io::read_json_file(dir / "r.json");
  REQUIRE(report["links"].size() == 4);
  for (const Json& link : report["links"]) CHECK(link["passed"] == true);

  const Run bad = run({"interpolate", "--input", dir / "a.json", "--input2", dir / "b.json",
                       "--sphere", e, "--initial", "0,0,6", "--initial", "0,0,6", "--initial",
                       "0,0,6", "--initial", "0,0,6"});
  CHECK(bad.code == cli::kExitIo);
}

TEST_CASE("framed coords follow both planes") {
  TempDir dir;
  const std::vector<Point> pts = helix(40);
  const Point t0 = discrete_tangents(pts).front();
  const Point n0 = (Point(Eigen::Vector3d(-1, 0, 0)) - t0.dot(Eigen::Vector3d(-1, 0, 0)) * t0).normalized();
  const FramedCurve fc = transport_normal(pts, n0);
  write(dir / "x.json", io::dump(io::to_json(io::CurveFile{3, pts, fc.normals()})));
  const Run r = run({"coords", "--input", dir / "x.json", "--sphere",
                     R"({"kind":"plane","normal":[1,0,0],"offset":-2})", "--sphere2",
                     R"({"kind":"plane","normal":[0,1,0],"offset":-3})"});
  REQUIRE(r.code == cli::kExitOk);
  const auto out = std::get<io::CurveFile>(io::parse_artifact(Json::parse(r.out)));
  REQUIRE(out.points.size() == 40);
  for (const Point& p : out.points) {
    CHECK(std::abs(p(0) + 2.0) < 1e-9);
    CHECK(std::abs(p(1) + 3.0) < 1e-9);
  }
}
