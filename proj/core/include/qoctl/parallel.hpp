#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qoctl {

/// Worker cap: QOCTL_THREADS when set (>= 1), hardware concurrency otherwise.
inline std::size_t worker_count() {
    std::size_t hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("QOCTL_THREADS")) {
        const long v = std::atol(env);
        if (v >= 1) return std::min(static_cast<std::size_t>(v), hw);
    }
    return hw;
}

/// Runs fn(i) for i in [0, count). Work items must be independent; results
/// are expected to be written to preallocated slots so output order stays
/// deterministic regardless of the worker count.
template <class Fn>
void parallel_for_index(std::size_t count, Fn&& fn) {
    const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::mutex guard;
    std::exception_ptr first_error;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(guard);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace qoctl
