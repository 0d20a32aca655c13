// Populates a response cache from the recorded fixtures so the CLI can run
// in fixture mode.
#include <iostream>

#include "fixture_cache.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: seed_fixtures <cache-dir>\n";
    return 2;
  }
  try {
    std::filesystem::remove_all(argv[1]);
    const auto n = streetnet::testing::seed_cache(argv[1]);
    std::cout << "seeded " << n << " cache entries into " << argv[1] << "\n";
  } catch (const std::exception& e) {
    std::cerr << "seeding failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
