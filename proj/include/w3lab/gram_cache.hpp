#pragma once

// On-disk cache of symbolic Gram matrices, one JSON file per level.

#include <filesystem>
#include <optional>
#include <string>

#include "w3lab/verma.hpp"

namespace w3lab {

/// Hex FNV-1a hash of the cache format tag; part of every file name.
std::string gram_cache_format_hash();

class GramCache {
 public:
  explicit GramCache(std::filesystem::path directory);

  /// Cache rooted at $W3LAB_CACHE_DIR, or nothing when the variable is unset or empty.
  static std::optional<GramCache> from_environment();

  std::filesystem::path path_for(int level) const;
  /// Missing or unreadable entries yield nothing.
  std::optional<GramMatrix> load(int level) const;
  /// Write through a temporary file and rename. Returns false when the directory is not writable.
  bool store(const GramMatrix& gram) const;

  const std::filesystem::path& directory() const { return directory_; }

 private:
  std::filesystem::path directory_;
};

/// engine.gram_matrix(level), served from the cache when possible.
GramMatrix cached_gram_matrix(VermaEngine& engine, int level, const GramCache* cache, bool* hit = nullptr);

}  // namespace w3lab
