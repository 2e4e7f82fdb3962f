// Copyright 2026 The ringtherm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ringtherm/error.hpp"

namespace ringtherm {

/// Outcome of one independent work item: a value or an error tag.
template <class T>
struct Cell {
    std::optional<T> value;
    std::string error;  // ErrorKind name, empty on success
    std::string message;

    [[nodiscard]] bool ok() const noexcept { return value.has_value(); }
};

inline std::size_t default_workers() noexcept {
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, count) on `workers` threads. Results are stored by
/// index, so the output does not depend on scheduling. Library errors are
/// captured per cell; anything else is rethrown after all workers stop.
template <class Fn>
auto parallel_map(std::size_t count, std::size_t workers, Fn fn) -> std::vector<Cell<decltype(fn(std::size_t{}))>> {
    using R = decltype(fn(std::size_t{}));
    std::vector<Cell<R>> out(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr fatal;
    std::atomic<bool> failed{false};

    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                out[i].value = fn(i);
            } catch (const Error& e) {
                out[i].error = std::string(to_string(e.kind()));
                out[i].message = e.what();
            } catch (...) {
                if (!failed.exchange(true)) fatal = std::current_exception();
                return;
            }
        }
    };

    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, count));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (fatal) std::rethrow_exception(fatal);
    return out;
}

} // namespace ringtherm
