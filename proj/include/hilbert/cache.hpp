#pragma once

#include <filesystem>
#include <functional>
#include <string>

namespace hilbert {

/// Lowercase hex SHA-256 of bytes.
std::string sha256_hex(const std::string& bytes);

/// Content-addressed store of computed outputs under one directory.
/// Each entry is "<sha256 of payload>\n<payload>"; a mismatch counts as CacheCorrupt and is recomputed.
class DiskCache {
 public:
  enum class Outcome { Hit, Miss, Recovered };

  explicit DiskCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path entry_path(const std::string& key) const;

  /// key_material is hashed to name the entry.
  std::string get_or_compute(const std::string& key_material, const std::function<std::string()>& compute,
                             Outcome* outcome = nullptr);

  /// Throws CacheCorrupt on checksum mismatch; false when absent.
  bool read(const std::string& key, std::string& payload) const;
  void write(const std::string& key, const std::string& payload) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace hilbert
