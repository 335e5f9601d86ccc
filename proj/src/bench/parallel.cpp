#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>

#include "fpq/bench/parallel.hpp"

namespace fpq::bench {

std::size_t worker_count() {
    if (const char* env = std::getenv("FPQ_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace fpq::bench
