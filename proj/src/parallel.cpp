#include "capfield/parallel.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace capfield {

int resolve_jobs(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CAPFIELD_JOBS"); env != nullptr && *env != '\0') {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(std::string("CAPFIELD_JOBS must be a positive integer, got '") + env + "'");
  }
  return 1;
}

}  // namespace capfield
