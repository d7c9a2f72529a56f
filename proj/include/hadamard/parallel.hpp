#ifndef HADAMARD_PARALLEL_HPP
#define HADAMARD_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hadamard {

/// Process-wide cap on worker threads (CLI --threads).  0 = hardware default.
void set_max_threads(int n);
int max_threads();

/// Static-partition parallel for.  `fn(i)` must only write to slot i of
/// preallocated output, which keeps results independent of the schedule.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t hw = max_threads() > 0 ? static_cast<std::size_t>(max_threads())
                                             : std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(hw, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::mutex guard;
    std::exception_ptr first_error = nullptr;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(guard);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace hadamard

#endif
