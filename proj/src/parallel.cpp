#include "weldkit/parallel.hpp"

#include <atomic>

namespace weldkit {

namespace {
std::atomic<int> g_jobs{0};
}

void set_jobs(int n) {
    g_jobs = n < 0 ? 0 : n;
    if (n > 0) omp_set_num_threads(n);
}

int jobs() {
    const int n = g_jobs.load();
    return n > 0 ? n : omp_get_max_threads();
}

}  // namespace weldkit
