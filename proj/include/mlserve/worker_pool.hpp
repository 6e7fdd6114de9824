//*****************************************************************************
// Copyright 2026 The mlserve Authors
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
//*****************************************************************************
#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace mlserve {

// Fixed number of workers fed from a bounded FIFO queue. A job is admitted
// when a worker is idle or a queue slot is free; otherwise try_submit
// returns nullopt and the caller answers 503.
class WorkerPool {
public:
    WorkerPool(std::size_t workers, std::size_t queue_capacity);
    ~WorkerPool();

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    template <typename F>
    std::optional<std::future<std::invoke_result_t<F>>> try_submit(F&& fn) {
        using R = std::invoke_result_t<F>;
        auto task = std::make_shared<std::packaged_task<R()>>(std::forward<F>(fn));
        auto future = task->get_future();
        if (!admit([task] { (*task)(); })) return std::nullopt;
        return future;
    }

    // Stop admitting; jobs already admitted still run.
    void close();
    // Waits until nothing is queued or running.
    bool wait_idle(std::chrono::milliseconds timeout);

    std::size_t workers() const noexcept { return threads_.size(); }
    std::size_t queue_capacity() const noexcept { return capacity_; }
    // Jobs executing right now, and the most ever executing at once.
    std::size_t in_flight() const noexcept { return in_flight_.load(); }
    std::size_t high_water_mark() const noexcept { return high_water_.load(); }
    // Admitted and not yet finished, queued or running.
    std::size_t pending() const noexcept { return pending_.load(); }

private:
    bool admit(std::function<void()> job);
    void run();

    std::size_t capacity_;
    std::mutex mutex_;
    std::condition_variable work_cv_;
    std::condition_variable idle_cv_;
    std::deque<std::function<void()>> queue_;
    std::size_t busy_ = 0;
    bool closed_ = false;
    bool stopping_ = false;
    std::atomic<std::size_t> in_flight_{0};
    std::atomic<std::size_t> pending_{0};
    std::atomic<std::size_t> high_water_{0};
    std::vector<std::thread> threads_;
};

}  // namespace mlserve
