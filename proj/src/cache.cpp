#include "hilbert/cache.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <atomic>
#include <fstream>
#include <sstream>

#include "hilbert/error.hpp"

namespace hilbert {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::DomainError, "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

DiskCache::DiskCache(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

fs::path DiskCache::entry_path(const std::string& key) const { return dir_ / (key + ".json"); }

bool DiskCache::read(const std::string& key, std::string& payload) const {
  std::ifstream in(entry_path(key), std::ios::binary);
  if (!in) return false;
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string raw = ss.str();
  const auto nl = raw.find('\n');
  if (nl == std::string::npos) throw Error(ErrorCode::CacheCorrupt, "missing checksum line in " + key);
  payload = raw.substr(nl + 1);
  if (raw.substr(0, nl) != sha256_hex(payload)) throw Error(ErrorCode::CacheCorrupt, "checksum mismatch in " + key);
  return true;
}

void DiskCache::write(const std::string& key, const std::string& payload) const {
  static std::atomic<unsigned> counter{0};
  const fs::path tmp = dir_ / (key + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << sha256_hex(payload) << '\n' << payload;
    out.flush();
    if (!out) throw Error(ErrorCode::CacheCorrupt, "cannot write " + tmp.string());
  }
  fs::rename(tmp, entry_path(key));
}

std::string DiskCache::get_or_compute(const std::string& key_material, const std::function<std::string()>& compute,
                                      Outcome* outcome) {
  const std::string key = sha256_hex(key_material);
  Outcome o = Outcome::Miss;
  std::string payload;
  try {
    if (read(key, payload)) {
      if (outcome) *outcome = Outcome::Hit;
      return payload;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CacheCorrupt) throw;
    o = Outcome::Recovered;
  }
  payload = compute();
  write(key, payload);
  if (outcome) *outcome = o;
  return payload;
}

}  // namespace hilbert
