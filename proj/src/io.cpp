#include "ribaucour/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace ribaucour::io {

namespace {

Point parse_vector(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw SchemaError(what + ": expected a non-empty array");
  Point p(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw SchemaError(what + ": expected numbers");
    p(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return p;
}

std::vector<Point> parse_points(const Json& j, int dim, const std::string& what) {
  if (!j.is_array()) throw SchemaError(what + ": expected an array of points");
  std::vector<Point> out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(parse_vector(j[k], what + "[" + std::to_string(k) + "]"));
    if (out.back().size() != dim) {
      throw SchemaError(what + "[" + std::to_string(k) + "]: expected " + std::to_string(dim) +
                        " coordinates");
    }
  }
  return out;
}

const Json& field(const Json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw SchemaError(std::string("missing field \"") + name + "\"");
  return *it;
}

Json vector_json(const Point& p) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p(i));
  return a;
}

Json points_json(const std::vector<Point>& ps) {
  Json a = Json::array();
  for (const Point& p : ps) a.push_back(vector_json(p));
  return a;
}

}  // namespace

Artifact parse_artifact(const Json& j) {
  if (!j.is_object()) throw SchemaError("expected a JSON object");
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) throw SchemaError("\"kind\" must be a string");
  const Json& dim_json = field(j, "ambient_dim");
  if (!dim_json.is_number_integer()) throw SchemaError("\"ambient_dim\" must be an integer");
  const int dim = dim_json.get<int>();
  if (dim < kMinAmbientDim || dim > kMaxAmbientDim) {
    throw SchemaError("\"ambient_dim\" out of range");
  }
  if (kind == "curve") {
    CurveFile c;
    c.ambient_dim = dim;
    c.points = parse_points(field(j, "points"), dim, "points");
    if (j.contains("normals")) {
      c.normals = parse_points(j["normals"], dim, "normals");
      if (c.normals->size() != c.points.size()) {
        throw SchemaError("\"normals\" must have one entry per point");
      }
    }
    return c;
  }
  if (kind == "net") {
    NetFile n;
    n.ambient_dim = dim;
    const Json& shape = field(j, "shape");
    if (!shape.is_array() || shape.size() != 2 || !shape[0].is_number_unsigned() ||
        !shape[1].is_number_unsigned()) {
      throw SchemaError("\"shape\" must be two non-negative integers");
    }
    n.rows = shape[0].get<std::size_t>();
    n.cols = shape[1].get<std::size_t>();
    n.points = parse_points(field(j, "points"), dim, "points");
    if (n.points.size() != n.rows * n.cols) {
      throw SchemaError("point count does not match \"shape\"");
    }
    return n;
  }
  throw SchemaError("unknown kind \"" + kind.get<std::string>() + "\"");
}

Json to_json(const CurveFile& c) {
  Json j{{"kind", "curve"}, {"ambient_dim", c.ambient_dim}, {"points", points_json(c.points)}};
  if (c.normals) j["normals"] = points_json(*c.normals);
  return j;
}

Json to_json(const NetFile& n) {
  return Json{{"kind", "net"},
              {"ambient_dim", n.ambient_dim},
              {"shape", {n.rows, n.cols}},
              {"points", points_json(n.points)}};
}

SphereVec parse_sphere(const Json& j, double tol) {
  if (!j.is_object()) throw SchemaError("sphere spec must be a JSON object");
  const Json& kind = field(j, "kind");
  if (kind == "sphere") {
    const Json& r = field(j, "radius");
    if (!r.is_number()) throw SchemaError("\"radius\" must be a number");
    const double radius = r.get<double>();
    if (!(radius > 0)) throw SchemaError("\"radius\" must be positive");
    return sphere_from_center_radius(parse_vector(field(j, "center"), "center"), radius);
  }
  if (kind == "plane") {
    const Json& d = field(j, "offset");
    if (!d.is_number()) throw SchemaError("\"offset\" must be a number");
    const Point normal = parse_vector(field(j, "normal"), "normal");
    if (normal.norm() == 0.0) throw SchemaError("\"normal\" must be non-zero");
    // Accept any non-zero normal; the offset refers to the normalized one.
    return plane_from_normal_offset(normal.normalized(), d.get<double>() / normal.norm(), tol);
  }
  throw SchemaError("sphere spec kind must be \"sphere\" or \"plane\"");
}

Point parse_point(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const char* first = item.data();
    const char* last = item.data() + item.size();
    while (first < last && *first == ' ') ++first;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw SchemaError("bad coordinate \"" + item + "\"");
    values.push_back(v);
  }
  if (values.empty()) throw SchemaError("empty point \"" + text + "\"");
  return Eigen::Map<const Point>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

Json json_argument(const std::string& text) {
  const auto start = text.find_first_not_of(" \t\n");
  if (start != std::string::npos && text[start] == '{') {
    try {
      return Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw SchemaError(std::string("inline JSON: ") + e.what());
    }
  }
  return read_json_file(text);
}

std::string dump(const Json& j) { return j.dump() + "\n"; }

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw SchemaError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw SchemaError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw SchemaError("cannot replace " + path.string());
  }
}

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void write_obj(std::ostream& out, const std::vector<QuadStrip>& strips) {
  std::size_t next = 1;
  const std::vector<Point>* previous = nullptr;
  std::vector<std::size_t> shared;  // vertex ids of the previous strip's last row
  for (const QuadStrip& strip : strips) {
    const std::size_t cols = strip.column_count();
    const bool reuse = previous != nullptr && *previous == strip.rows.front();
    std::vector<std::vector<std::size_t>> ids(strip.arc_count(), std::vector<std::size_t>(cols));
    for (std::size_t r = 0; r < strip.arc_count(); ++r) {
      for (std::size_t u = 0; u < cols; ++u) {
        if (r == 0 && reuse) {
          ids[r][u] = shared[u];
          continue;
        }
        const Point& p = strip.rows[r][u];
        out << "v " << format_number(p(0)) << ' ' << format_number(p(1)) << ' '
            << format_number(p(2)) << '\n';
        ids[r][u] = next++;
      }
    }
    for (std::size_t r = 0; r + 1 < strip.arc_count(); ++r) {
      for (std::size_t u = 0; u + 1 < cols; ++u) {
        out << "f " << ids[r][u] << ' ' << ids[r][u + 1] << ' ' << ids[r + 1][u + 1] << ' '
            << ids[r + 1][u] << '\n';
      }
    }
    shared = ids.back();
    previous = &strip.rows.back();
  }
}

}  // namespace ribaucour::io
