// SPDX-License-Identifier: Apache-2.0
//
// saos-sim: simulator for sparse arrays of RIS sub-surfaces
// Copyright (C) 2026 saos-sim contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef SAOS_PARALLEL_HPP
#define SAOS_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace saos
{
    // Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be written to index-owned slots;
    // the first exception thrown by any worker is rethrown on the caller's thread.
    template <typename Fn>
    void parallel_for(std::size_t n, int threads, Fn &&fn)
    {
        const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                fn(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto work = [&]
        {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    next = n;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }

    inline int default_thread_count()
    {
        return std::max(1u, std::thread::hardware_concurrency());
    }
}

#endif
