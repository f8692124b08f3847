// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace gk {

// Worker count: GK_THREADS wins over the request; 0 means hardware concurrency.
inline int resolve_threads(int requested) {
    if (const char* env = std::getenv("GK_THREADS")) {
        try {
            requested = std::stoi(env);
        } catch (...) {
        }
    }
    if (requested <= 0) requested = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return requested;
}

// out[i] = fn(i) for i < n, computed on up to `threads` workers. Results land in
// index order, so any reduction over `out` is independent of the worker count.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F fn, int threads) {
    std::vector<T> out(n);
    threads = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < n; i = next++) out[i] = fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace gk
