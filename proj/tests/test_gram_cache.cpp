#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "w3lab/gram_cache.hpp"

using namespace w3lab;

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("w3lab-cache-test-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("round trip through the cache") {
  const auto dir = fresh_dir("roundtrip");
  GramCache cache(dir);
  VermaEngine engine;
  bool hit = true;
  const auto first = cached_gram_matrix(engine, 2, &cache, &hit);
  CHECK_FALSE(hit);
  CHECK(fs::exists(cache.path_for(2)));
  const auto second = cached_gram_matrix(engine, 2, &cache, &hit);
  CHECK(hit);
  CHECK(to_json(first).dump() == to_json(second).dump());
  for (const auto& entry : fs::directory_iterator(dir)) {
    CHECK(entry.path().filename().string().find(".tmp") == std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("file names carry the format hash") {
  GramCache cache("/nonexistent");
  const auto name = cache.path_for(3).filename().string();
  CHECK(name == "gram-level3-" + gram_cache_format_hash() + ".json");
  CHECK(gram_cache_format_hash().size() == 16);
}

TEST_CASE("corrupt entries are recomputed") {
  const auto dir = fresh_dir("corrupt");
  fs::create_directories(dir);
  GramCache cache(dir);
  std::ofstream(cache.path_for(1)) << "{not json";
  VermaEngine engine;
  bool hit = true;
  const auto g = cached_gram_matrix(engine, 1, &cache, &hit);
  CHECK_FALSE(hit);
  CHECK(g.size() == 2);
  CHECK(cache.load(1).has_value());
  fs::remove_all(dir);
}

TEST_CASE("unwritable directory disables caching") {
  GramCache cache("/proc/w3lab-no-such-dir");
  VermaEngine engine;
  CHECK_FALSE(cache.store(engine.gram_matrix(1)));
  CHECK(cached_gram_matrix(engine, 1, &cache).size() == 2);
}

TEST_CASE("level cap applies before the cache") {
  GramCache cache(fresh_dir("cap"));
  VermaEngine engine(EngineOptions{1, 1});
  CHECK_THROWS_AS(cached_gram_matrix(engine, 2, &cache), LevelTooLarge);
}

TEST_CASE("environment variable") {
  ::setenv("W3LAB_CACHE_DIR", "/tmp/w3lab-env-test", 1);
  const auto cache = GramCache::from_environment();
  REQUIRE(cache.has_value());
  CHECK(cache->directory() == fs::path("/tmp/w3lab-env-test"));
  ::setenv("W3LAB_CACHE_DIR", "", 1);
  CHECK_FALSE(GramCache::from_environment().has_value());
  ::unsetenv("W3LAB_CACHE_DIR");
  CHECK_FALSE(GramCache::from_environment().has_value());
}
