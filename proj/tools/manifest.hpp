#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace wsdf::cli {

std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t hash = 0xcbf29ce484222325ULL);
std::uint64_t hash_file(const std::filesystem::path& path);
std::string hex64(std::uint64_t value);

// Text sidecar written next to every artifact as "<artifact>.manifest.txt".
// It holds no timestamps or absolute paths, so reruns with the same inputs
// and options produce the same manifest.
struct Manifest {
  std::string command;
  int threads = 0;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::pair<std::string, std::string>> options;
  std::vector<std::pair<std::string, std::string>> results;

  std::string config_hash() const;
  std::string render(const std::filesystem::path& artifact) const;
  void write_for(const std::filesystem::path& artifact) const;
};

std::filesystem::path manifest_path(const std::filesystem::path& artifact);

}  // namespace wsdf::cli
