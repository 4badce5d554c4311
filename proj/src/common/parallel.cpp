#include "aclab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace aclab {

namespace {
std::atomic<unsigned> worker_override{0};
}

void set_default_workers(unsigned workers) { worker_override.store(workers); }

unsigned default_workers()
{
    if (unsigned w = worker_override.load()) return w;
    if (const char* env = std::getenv("LAB_WORKERS")) {
        try {
            long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 1024));
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace aclab
