#pragma once

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace seeker {

// Applies f to every element, preserving input order in the result. Results
// are identical regardless of worker count or completion order; the first
// exception (by input index) is rethrown.
template <class T, class F>
auto parallel_map(const std::vector<T>& input, int workers, F f)
    -> std::vector<decltype(f(input[0]))> {
    using R = decltype(f(input[0]));
    std::vector<R> out(input.size());
    if (input.empty()) return out;
    if (workers < 1) workers = 1;
    workers = std::min<int>(workers, static_cast<int>(input.size()));
    if (workers == 1) {
        for (std::size_t i = 0; i < input.size(); ++i) out[i] = f(input[i]);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(input.size());
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < input.size();
                 i = next.fetch_add(1)) {
                try {
                    out[i] = f(input[i]);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

} // namespace seeker
