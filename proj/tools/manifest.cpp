#include "manifest.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "wsdf/error.hpp"

namespace wsdf::cli {

inline constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t hash) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t hash_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::kIo, path.string() + ": cannot open for hashing");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return fnv1a64(bytes);
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string Manifest::config_hash() const {
  std::string text = command + '\n';
  for (const auto& [k, v] : options) text += k + '=' + v + '\n';
  return hex64(fnv1a64(text));
}

std::string Manifest::render(const std::filesystem::path& artifact) const {
  std::ostringstream os;
  os << "wsdf-manifest 1\n";
  os << "version " << kVersion << '\n';
  os << "command " << command << '\n';
  os << "threads " << threads << '\n';
  os << "config_hash " << config_hash() << '\n';
  for (const auto& in : inputs) os << "input " << in.string() << " fnv1a64=" << hex64(hash_file(in)) << '\n';
  for (const auto& [k, v] : options) os << "option " << k << ' ' << v << '\n';
  for (const auto& [k, v] : results) os << "result " << k << ' ' << v << '\n';
  os << "output " << artifact.string() << " fnv1a64=" << hex64(hash_file(artifact)) << '\n';
  return os.str();
}

std::filesystem::path manifest_path(const std::filesystem::path& artifact) {
  std::filesystem::path p = artifact;
  p += ".manifest.txt";
  return p;
}

void Manifest::write_for(const std::filesystem::path& artifact) const {
  const std::string text = render(artifact);
  const auto path = manifest_path(artifact);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCategory::kIo, path.string() + ": cannot open for writing");
  out << text;
  if (!out) fail(ErrorCategory::kIo, path.string() + ": write failed");
}

}  // namespace wsdf::cli
