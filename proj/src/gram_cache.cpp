#include "w3lab/gram_cache.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

namespace w3lab {

namespace {

constexpr const char* kFormatTag = "w3lab-gram-v1";

}  // namespace

std::string gram_cache_format_hash() {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char* p = kFormatTag; *p != '\0'; ++p) {
    hash ^= static_cast<unsigned char>(*p);
    hash *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << hash;
  return os.str();
}

GramCache::GramCache(std::filesystem::path directory) : directory_(std::move(directory)) {}

std::optional<GramCache> GramCache::from_environment() {
  const char* dir = std::getenv("W3LAB_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return GramCache(dir);
}

std::filesystem::path GramCache::path_for(int level) const {
  return directory_ / ("gram-level" + std::to_string(level) + "-" + gram_cache_format_hash() + ".json");
}

std::optional<GramMatrix> GramCache::load(int level) const {
  std::ifstream in(path_for(level));
  if (!in) return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(in);
    GramMatrix gram = gram_from_json(j);
    if (gram.level != level) return std::nullopt;
    return gram;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

bool GramCache::store(const GramMatrix& gram) const {
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  if (ec) return false;
  const auto target = path_for(gram.level);
  auto temp = target;
  temp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(std::random_device{}());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out << to_json(gram).dump() << "\n";
    if (!out) {
      std::filesystem::remove(temp, ec);
      return false;
    }
  }
  std::filesystem::rename(temp, target, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    return false;
  }
  return true;
}

GramMatrix cached_gram_matrix(VermaEngine& engine, int level, const GramCache* cache, bool* hit) {
  if (hit != nullptr) *hit = false;
  if (level > engine.options().level_cap) throw LevelTooLarge(level, engine.options().level_cap);
  if (cache != nullptr) {
    if (auto gram = cache->load(level)) {
      if (hit != nullptr) *hit = true;
      return *gram;
    }
  }
  GramMatrix gram = engine.gram_matrix(level);
  if (cache != nullptr) cache->store(gram);
  return gram;
}

}  // namespace w3lab
