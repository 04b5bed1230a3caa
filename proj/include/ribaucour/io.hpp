#pragma once

// File formats: JSON curves, nets and sphere specs, and OBJ quad meshes.

#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "ribaucour/channel.hpp"
#include "ribaucour/discrete.hpp"

namespace ribaucour::io {

using Json = nlohmann::json;

/// Malformed input or unreadable/unwritable file; maps to exit status 1.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CurveFile {
  int ambient_dim = 0;
  std::vector<Point> points;
  std::optional<std::vector<Point>> normals;  // present for framed curves
};

struct NetFile {
  int ambient_dim = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Point> points;  // row-major
};

using Artifact = std::variant<CurveFile, NetFile>;

Artifact parse_artifact(const Json& j);
Json to_json(const CurveFile& c);
Json to_json(const NetFile& n);

/// `{"kind":"sphere","center":[..],"radius":r}` or `{"kind":"plane","normal":[..],"offset":d}`.
SphereVec parse_sphere(const Json& j, double tol = kDefaultTol);

/// Comma separated coordinates, e.g. "1,0,0".
Point parse_point(const std::string& text);

std::string read_file(const std::filesystem::path& path);
Json read_json_file(const std::filesystem::path& path);

/// Parses `text` as JSON if it looks like an object, otherwise reads it as a path.
Json json_argument(const std::string& text);

/// Compact JSON with shortest round-trip numbers and a trailing newline.
std::string dump(const Json& j);

/// Writes via a temporary file in the same directory and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double v);

/// Quad mesh of consecutive strips; a shared boundary row is emitted once.
void write_obj(std::ostream& out, const std::vector<QuadStrip>& strips);

}  // namespace ribaucour::io
