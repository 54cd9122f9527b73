#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace polarproj {

// Worker count: explicit override, else POLARPROJ_THREADS, else hardware cores.
int thread_count();
void set_thread_count(int threads);  // 0 restores the default

namespace detail {
inline thread_local bool tl_in_worker = false;
}

// Applies fn to 0..count-1. Results are stored by index, so the output does
// not depend on scheduling. The lowest-index exception is rethrown.
template <class F>
auto parallel_map(std::size_t count, F&& fn) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
    using R = std::invoke_result_t<F&, std::size_t>;
    std::vector<std::optional<R>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    // Nested calls run serially on the calling worker.
    const std::size_t workers =
        detail::tl_in_worker
            ? 1
            : std::min<std::size_t>(static_cast<std::size_t>(std::max(1, thread_count())), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto work = [&]() {
            detail::tl_in_worker = true;
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    slots[i].emplace(fn(i));
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<R> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace polarproj
