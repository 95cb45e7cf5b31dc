#include "aaicp/cloud_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aaicp/errors.hpp"

namespace aaicp {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

double parse_double(std::string_view token, std::size_t line_no) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("non-numeric coordinate '" + std::string(token) + "'", line_no);
  }
  if (!std::isfinite(value)) {
    throw ParseError("non-finite coordinate '" + std::string(token) + "'", line_no);
  }
  return value;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) {
    throw std::runtime_error("format_double: to_chars failed");
  }
  return std::string(buf.data(), ptr);
}

bool is_scalar_type(std::string_view t) {
  static constexpr std::array<std::string_view, 16> kTypes = {
      "char",  "uchar",  "short", "ushort", "int",     "uint",    "float",   "double",
      "int8",  "uint8",  "int16", "uint16", "int32",   "uint32",  "float32", "float64"};
  return std::find(kTypes.begin(), kTypes.end(), t) != kTypes.end();
}

bool is_float_type(std::string_view t) {
  return t == "float" || t == "double" || t == "float32" || t == "float64";
}

void require_nonempty(const PointCloud& cloud) {
  if (cloud.empty()) {
    throw std::invalid_argument("write_cloud: refusing to write an empty cloud");
  }
}

}  // namespace

std::optional<CloudFormat> format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".ply") return CloudFormat::PlyAscii;
  if (ext == ".xyz" || ext == ".txt") return CloudFormat::Xyz;
  return std::nullopt;
}

PointCloud read_ply_ascii(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line() || split_ws(line) != std::vector<std::string_view>{"ply"}) {
    throw ParseError("missing 'ply' magic", line_no == 0 ? 1 : line_no);
  }

  bool have_format = false;
  bool in_vertex = false;
  bool seen_vertex = false;
  std::size_t vertex_count = 0;
  std::size_t property_count = 0;
  std::array<std::optional<std::size_t>, 3> xyz_column;

  for (;;) {
    if (!next_line()) {
      throw ParseError("unexpected end of file inside header", line_no);
    }
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "end_header") break;

    if (tok[0] == "format") {
      if (tok.size() != 3 || tok[1] != "ascii") {
        throw ParseError("only 'format ascii 1.0' is supported", line_no);
      }
      have_format = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) throw ParseError("malformed element line", line_no);
      if (tok[1] == "vertex") {
        if (seen_vertex) throw ParseError("duplicate vertex element", line_no);
        std::size_t n = 0;
        const auto [ptr, ec] = std::from_chars(tok[2].data(), tok[2].data() + tok[2].size(), n);
        if (ec != std::errc() || ptr != tok[2].data() + tok[2].size()) {
          throw ParseError("malformed vertex count", line_no);
        }
        vertex_count = n;
        seen_vertex = true;
        in_vertex = true;
      } else if (!seen_vertex) {
        throw ParseError("unsupported element '" + std::string(tok[1]) + "' before vertex", line_no);
      } else {
        // Trailing elements (faces, edges) are never read: parsing stops after
        // the vertex block.
        in_vertex = false;
      }
    } else if (tok[0] == "property") {
      if (!seen_vertex) throw ParseError("property outside an element", line_no);
      if (!in_vertex) continue;
      if (tok.size() >= 2 && tok[1] == "list") {
        throw ParseError("list properties on vertex are not supported", line_no);
      }
      if (tok.size() != 3 || !is_scalar_type(tok[1])) {
        throw ParseError("malformed property line", line_no);
      }
      const std::size_t axis = tok[2] == "x" ? 0 : tok[2] == "y" ? 1 : tok[2] == "z" ? 2 : 3;
      if (axis < 3) {
        if (!is_float_type(tok[1])) {
          throw ParseError("coordinate '" + std::string(tok[2]) + "' must be float or double", line_no);
        }
        xyz_column[axis] = property_count;
      }
      ++property_count;
    } else {
      throw ParseError("unrecognized header keyword '" + std::string(tok[0]) + "'", line_no);
    }
  }

  if (!have_format) throw ParseError("missing format line", line_no);
  if (!seen_vertex) throw ParseError("missing vertex element", line_no);
  for (const auto& c : xyz_column) {
    if (!c) throw ParseError("vertex element lacks x/y/z properties", line_no);
  }

  PointCloud cloud;
  cloud.reserve(vertex_count);
  while (cloud.size() < vertex_count) {
    if (!next_line()) {
      throw ParseError("expected " + std::to_string(vertex_count) + " vertices, found " +
                           std::to_string(cloud.size()),
                       line_no);
    }
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != property_count) {
      throw ParseError("expected " + std::to_string(property_count) + " values, found " +
                           std::to_string(tok.size()),
                       line_no);
    }
    Point3 p;
    for (std::size_t axis = 0; axis < 3; ++axis) {
      p[axis] = parse_double(tok[*xyz_column[axis]], line_no);
    }
    cloud.push_back(p);
  }
  return cloud;
}

PointCloud read_xyz(std::istream& in) {
  PointCloud cloud;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    if (tok.size() < 3) {
      throw ParseError("expected 'x y z', found " + std::to_string(tok.size()) + " fields", line_no);
    }
    cloud.push_back(Point3(parse_double(tok[0], line_no), parse_double(tok[1], line_no),
                           parse_double(tok[2], line_no)));
  }
  return cloud;
}

PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open '" + path.string() + "'");
  }
  return format == CloudFormat::PlyAscii ? read_ply_ascii(in) : read_xyz(in);
}

void write_ply_ascii(const PointCloud& cloud, std::ostream& out) {
  require_nonempty(cloud);
  out << "ply\nformat ascii 1.0\nelement vertex " << cloud.size()
      << "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
  for (const auto& p : cloud) {
    out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
  }
}

void write_xyz(const PointCloud& cloud, std::ostream& out) {
  require_nonempty(cloud);
  for (const auto& p : cloud) {
    out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
  }
}

void write_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format) {
  require_nonempty(cloud);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  if (format == CloudFormat::PlyAscii) {
    write_ply_ascii(cloud, out);
  } else {
    write_xyz(cloud, out);
  }
  out.flush();
  if (!out) {
    throw std::runtime_error("write to '" + path.string() + "' failed");
  }
}

}  // namespace aaicp
