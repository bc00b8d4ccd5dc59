#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace hjhopf {

/// Worker count from HJHOPF_WORKERS, defaulting to all cores.
inline int worker_count() {
    if (const char* env = std::getenv("HJHOPF_WORKERS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

/// Evaluates fn(i) for i in [0, count) across workers; results come back in index
/// order. The first exception by index is rethrown after all workers finish.
template <class Fn>
auto parallel_map(std::size_t count, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using R = decltype(fn(std::size_t{}));
    static_assert(!std::is_same_v<R, bool>, "vector<bool> elements cannot be written concurrently");
    std::vector<R> out(count);
    std::vector<std::exception_ptr> errors(count);
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), count);
    const auto run = [&](std::size_t w) {
        for (std::size_t i = w; i < count; i += workers) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace hjhopf
