#include "encod/util/parallel.hpp"

#include <cstdlib>
#include <string>

namespace encod::util {

unsigned jobs_from_env(unsigned fallback) {
    if (const char* v = std::getenv("ENCOD_JOBS")) {
        try {
            const long n = std::stol(v);
            if (n > 0) return static_cast<unsigned>(n);
        } catch (...) {
        }
    }
    return fallback;
}

}  // namespace encod::util
