#include "wsdf/grid_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "wsdf/error.hpp"

namespace wsdf {
namespace {

constexpr std::array<char, 4> kMagic = {'C', 'S', 'D', 'F'};
constexpr const char* kTextMagic = "CSDF-TEXT";

template <typename T>
void put_le(std::string& out, T value) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t b = 0; b < sizeof(T); ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFFu));
}

template <typename T>
T get_le(const unsigned char* in) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) bits |= static_cast<U>(in[b]) << (8 * b);
  return std::bit_cast<T>(bits);
}

[[noreturn]] void io_fail(const std::filesystem::path& path, const std::string& what) {
  fail(ErrorCategory::kIo, path.string() + ": " + what);
}

FieldKind kind_from_tag(std::uint32_t tag, const std::filesystem::path& path) {
  if (tag > static_cast<std::uint32_t>(FieldKind::kScalar)) io_fail(path, "unknown value type tag " + std::to_string(tag));
  return static_cast<FieldKind>(tag);
}

FieldKind kind_from_name(const std::string& name, const std::filesystem::path& path) {
  for (auto kind : {FieldKind::kOccupancy, FieldKind::kSmoothed, FieldKind::kWeakSdf, FieldKind::kScalar}) {
    if (name == to_string(kind)) return kind;
  }
  io_fail(path, "unknown field kind '" + name + "'");
}

void write_binary(std::ofstream& out, const VoxelGrid& grid) {
  std::string header;
  header.reserve(kGridHeaderBytes);
  header.append(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(header, kGridFormatVersion);
  put_le<std::uint32_t>(header, static_cast<std::uint32_t>(grid.dims().nx));
  put_le<std::uint32_t>(header, static_cast<std::uint32_t>(grid.dims().ny));
  put_le<std::uint32_t>(header, static_cast<std::uint32_t>(grid.dims().nz));
  put_le<double>(header, grid.origin().x);
  put_le<double>(header, grid.origin().y);
  put_le<double>(header, grid.origin().z);
  put_le<double>(header, grid.spacing());
  put_le<std::uint32_t>(header, static_cast<std::uint32_t>(grid.kind()));
  header.resize(kGridHeaderBytes, '\0');

  std::string body;
  body.reserve(grid.size() * 4);
  for (double v : grid.values()) put_le<float>(body, static_cast<float>(v));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
}

void write_text(std::ofstream& out, const VoxelGrid& grid) {
  out << kTextMagic << ' ' << kGridFormatVersion << '\n';
  out << "dims " << grid.dims().nx << ' ' << grid.dims().ny << ' ' << grid.dims().nz << '\n';
  out << std::setprecision(17);
  out << "origin " << grid.origin().x << ' ' << grid.origin().y << ' ' << grid.origin().z << '\n';
  out << "spacing " << grid.spacing() << '\n';
  out << "kind " << to_string(grid.kind()) << '\n';
  out << "values\n" << std::setprecision(9);
  const int nx = grid.dims().nx;
  std::size_t col = 0;
  for (double v : grid.values()) {
    out << static_cast<float>(v) << (++col % static_cast<std::size_t>(nx) == 0 ? '\n' : ' ');
  }
}

VoxelGrid read_binary(const std::string& bytes, const std::filesystem::path& path) {
  if (bytes.size() < kGridHeaderBytes) io_fail(path, "truncated grid header");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const auto version = get_le<std::uint32_t>(p + 4);
  if (version != kGridFormatVersion) io_fail(path, "unsupported grid format version " + std::to_string(version));
  const GridDims dims{static_cast<int>(get_le<std::uint32_t>(p + 8)), static_cast<int>(get_le<std::uint32_t>(p + 12)),
                      static_cast<int>(get_le<std::uint32_t>(p + 16))};
  const Vec3 origin{get_le<double>(p + 20), get_le<double>(p + 28), get_le<double>(p + 36)};
  const double spacing = get_le<double>(p + 44);
  const FieldKind kind = kind_from_tag(get_le<std::uint32_t>(p + 52), path);
  if (dims.nx < 2 || dims.ny < 2 || dims.nz < 2) io_fail(path, "grid dims must be >= 2");
  const std::size_t count = dims.count();
  if (bytes.size() != kGridHeaderBytes + 4 * count) {
    io_fail(path, "expected " + std::to_string(kGridHeaderBytes + 4 * count) + " bytes, found " +
                      std::to_string(bytes.size()));
  }
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = get_le<float>(p + kGridHeaderBytes + 4 * i);
  try {
    return VoxelGrid(dims, origin, spacing, kind, std::move(values));
  } catch (const Error& e) {
    io_fail(path, e.what());
  }
}

VoxelGrid read_text(const std::string& bytes, const std::filesystem::path& path) {
  std::istringstream in(bytes);
  std::string magic, key, kind_name;
  std::uint32_t version = 0;
  GridDims dims;
  Vec3 origin;
  double spacing = 0.0;
  in >> magic >> version;
  if (version != kGridFormatVersion) io_fail(path, "unsupported text grid version");
  in >> key >> dims.nx >> dims.ny >> dims.nz;
  if (key != "dims") io_fail(path, "expected 'dims'");
  in >> key >> origin.x >> origin.y >> origin.z;
  if (key != "origin") io_fail(path, "expected 'origin'");
  in >> key >> spacing;
  if (key != "spacing") io_fail(path, "expected 'spacing'");
  in >> key >> kind_name;
  if (key != "kind") io_fail(path, "expected 'kind'");
  in >> key;
  if (!in || key != "values") io_fail(path, "malformed text grid header");
  if (dims.nx < 2 || dims.ny < 2 || dims.nz < 2) io_fail(path, "grid dims must be >= 2");
  std::vector<double> values(dims.count());
  for (double& v : values) {
    float f = 0.0f;
    if (!(in >> f)) io_fail(path, "not enough values");
    v = f;
  }
  try {
    return VoxelGrid(dims, origin, spacing, kind_from_name(kind_name, path), std::move(values));
  } catch (const Error& e) {
    io_fail(path, e.what());
  }
}

}  // namespace

void write_grid(const std::filesystem::path& path, const VoxelGrid& grid, GridFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) io_fail(path, "cannot open for writing");
  if (format == GridFormat::kBinary) {
    write_binary(out, grid);
  } else {
    write_text(out, grid);
  }
  if (!out) io_fail(path, "write failed");
}

VoxelGrid read_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail(path, "cannot open grid file");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.compare(0, std::strlen(kTextMagic), kTextMagic) == 0) return read_text(bytes, path);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic.data(), 4) == 0) return read_binary(bytes, path);
  io_fail(path, "not a CSDF grid file");
}

}  // namespace wsdf
