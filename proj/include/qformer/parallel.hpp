// Copyright 2026 The qformer Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file parallel.hpp
 * Minimal index-parallel map over std::async workers.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <future>
#include <string>
#include <thread>
#include <vector>

namespace qformer {

/// Hardware concurrency, capped by QFORMER_THREADS when set to a positive int.
inline auto worker_count() -> std::size_t {
    std::size_t n = std::max(1U, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("QFORMER_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) {
                n = std::min(n, static_cast<std::size_t>(cap));
            }
        } catch (const std::exception &) {
            // unparsable value: keep the hardware default
        }
    }
    return n;
}

/**
 * @brief out[i] = fn(i) for i < count. Results keep index order; the first
 * exception (by index) is rethrown after all workers finish.
 */
template <class Fn>
auto parallel_map(std::size_t count, Fn fn)
    -> std::vector<decltype(fn(std::size_t{}))> {
    using T = decltype(fn(std::size_t{}));
    const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(count, 1));
    std::vector<T> out(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = fn(i);
        }
        return out;
    }
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::future<void>> jobs;
    jobs.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < count; i += workers) {
                try {
                    out[i] = fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        }));
    }
    for (auto &job : jobs) {
        job.get();
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

} // namespace qformer
