#include "focklat/parallel.hpp"

#include <cstdlib>
#include <string>

namespace focklat {

int thread_count() {
  if (const char* env = std::getenv("FOCKLAT_THREADS")) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(env, &used);
      if (used == std::string(env).size() && n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

}  // namespace focklat
