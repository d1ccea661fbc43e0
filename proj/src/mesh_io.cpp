#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "wsdf/error.hpp"
#include "wsdf/mesh.hpp"

namespace wsdf {
namespace {

[[noreturn]] void io_fail(const std::filesystem::path& path, const std::string& what) {
  fail(ErrorCategory::kIo, path.string() + ": " + what);
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFFu));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_obj(std::ofstream& out, const TriangleMesh& mesh) {
  char buf[128];
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", static_cast<double>(static_cast<float>(v.x)),
                  static_cast<double>(static_cast<float>(v.y)), static_cast<double>(static_cast<float>(v.z)));
    out << buf;
  }
  for (const auto& t : mesh.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void write_ply(std::ofstream& out, const TriangleMesh& mesh) {
  out << "ply\nformat binary_little_endian 1.0\n"
      << "element vertex " << mesh.vertices.size() << '\n'
      << "property float x\nproperty float y\nproperty float z\n"
      << "element face " << mesh.triangles.size() << '\n'
      << "property list uchar int vertex_indices\nend_header\n";
  std::string body;
  body.reserve(mesh.vertices.size() * 12 + mesh.triangles.size() * 13);
  for (const Vec3& v : mesh.vertices) {
    for (int a = 0; a < 3; ++a) put_u32(body, std::bit_cast<std::uint32_t>(static_cast<float>(v[a])));
  }
  for (const auto& t : mesh.triangles) {
    body.push_back(3);
    for (int i : t) put_u32(body, static_cast<std::uint32_t>(i));
  }
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
}

TriangleMesh read_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) io_fail(path, "cannot open mesh");
  TriangleMesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      float x = 0.0F;
      float y = 0.0F;
      float z = 0.0F;
      if (!(ls >> x >> y >> z)) io_fail(path, "malformed vertex line");
      mesh.vertices.push_back({x, y, z});
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ls >> tok) {
        // Accept "i", "i/t", "i/t/n" and "i//n".
        idx.push_back(std::stoi(tok.substr(0, tok.find('/'))) - 1);
      }
      if (idx.size() < 3) io_fail(path, "face with fewer than 3 vertices");
      for (std::size_t k = 1; k + 1 < idx.size(); ++k) mesh.triangles.push_back({idx[0], idx[k], idx[k + 1]});
    }
  }
  return mesh;
}

TriangleMesh read_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail(path, "cannot open mesh");
  std::string line;
  std::size_t nv = 0;
  std::size_t nf = 0;
  bool binary_le = false;
  std::getline(in, line);
  if (line != "ply") io_fail(path, "missing 'ply' magic");
  while (std::getline(in, line)) {
    if (line == "end_header") break;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "format") {
      std::string fmt;
      ls >> fmt;
      binary_le = fmt == "binary_little_endian";
    } else if (key == "element") {
      std::string name;
      std::size_t count = 0;
      ls >> name >> count;
      if (name == "vertex") nv = count;
      if (name == "face") nf = count;
    } else if (key == "property") {
      std::string type;
      ls >> type;
      if (type != "float" && type != "list") io_fail(path, "only float vertices and uchar/int face lists are supported");
      if (type == "list") {
        std::string count_type, index_type;
        ls >> count_type >> index_type;
        if (count_type != "uchar" || (index_type != "int" && index_type != "uint")) {
          io_fail(path, "face lists must be 'uchar int'");
        }
      }
    }
  }
  if (!binary_le) io_fail(path, "only binary_little_endian PLY is supported");
  TriangleMesh mesh;
  mesh.vertices.resize(nv);
  std::string buf(12, '\0');
  for (auto& v : mesh.vertices) {
    if (!in.read(buf.data(), 12)) io_fail(path, "truncated vertex data");
    const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
    v = {std::bit_cast<float>(get_u32(p)), std::bit_cast<float>(get_u32(p + 4)), std::bit_cast<float>(get_u32(p + 8))};
  }
  mesh.triangles.reserve(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    char count = 0;
    if (!in.get(count)) io_fail(path, "truncated face data");
    const int n = static_cast<unsigned char>(count);
    std::string idx(static_cast<std::size_t>(4 * n), '\0');
    if (!in.read(idx.data(), static_cast<std::streamsize>(idx.size()))) io_fail(path, "truncated face data");
    const auto* p = reinterpret_cast<const unsigned char*>(idx.data());
    std::vector<int> ids(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) ids[static_cast<std::size_t>(k)] = static_cast<int>(get_u32(p + 4 * k));
    for (int k = 1; k + 1 < n; ++k) mesh.triangles.push_back({ids[0], ids[static_cast<std::size_t>(k)], ids[static_cast<std::size_t>(k + 1)]});
  }
  return mesh;
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

}  // namespace

MeshFormat mesh_format_from_name(const std::string& name) {
  std::string n = name;
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (!n.empty() && n.front() == '.') n.erase(0, 1);
  if (n == "obj") return MeshFormat::kObj;
  if (n == "ply") return MeshFormat::kPly;
  fail(ErrorCategory::kInvalidArgument, "unknown mesh format '" + name + "' (use obj or ply)");
}

void write_mesh(const std::filesystem::path& path, const TriangleMesh& mesh, MeshFormat format) {
  validate(mesh);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) io_fail(path, "cannot open for writing");
  if (format == MeshFormat::kObj) {
    write_obj(out, mesh);
  } else {
    write_ply(out, mesh);
  }
  if (!out) io_fail(path, "write failed");
}

void write_mesh(const std::filesystem::path& path, const TriangleMesh& mesh) {
  write_mesh(path, mesh, mesh_format_from_name(lower_extension(path)));
}

TriangleMesh read_mesh(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  TriangleMesh mesh;
  if (ext == ".obj") {
    mesh = read_obj(path);
  } else if (ext == ".ply") {
    mesh = read_ply(path);
  } else {
    io_fail(path, "unsupported mesh extension '" + ext + "'");
  }
  try {
    validate(mesh);
  } catch (const Error& e) {
    io_fail(path, e.what());
  }
  return mesh;
}

}  // namespace wsdf
