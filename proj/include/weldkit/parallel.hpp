#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include <omp.h>

namespace weldkit {

/// Worker count used by frame-level loops; 0 means the OpenMP default.
void set_jobs(int jobs);
int jobs();

/// Runs body(i) for i in [0, n) across the worker pool. If any iterations
/// throw, the exception from the lowest index is rethrown after the loop.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(jobs())
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace weldkit
