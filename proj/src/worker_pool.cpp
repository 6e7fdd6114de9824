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
#include "mlserve/worker_pool.hpp"

#include <stdexcept>

namespace mlserve {

WorkerPool::WorkerPool(std::size_t workers, std::size_t queue_capacity) : capacity_(queue_capacity) {
    if (workers == 0) throw std::invalid_argument("worker pool needs at least one worker");
    threads_.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) threads_.emplace_back([this] { run(); });
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(mutex_);
        closed_ = true;
        stopping_ = true;
    }
    work_cv_.notify_all();
    for (auto& t : threads_) t.join();
}

bool WorkerPool::admit(std::function<void()> job) {
    {
        std::lock_guard lock(mutex_);
        if (closed_ || busy_ + queue_.size() >= threads_.size() + capacity_) return false;
        queue_.push_back(std::move(job));
        ++pending_;
    }
    work_cv_.notify_one();
    return true;
}

void WorkerPool::close() {
    std::lock_guard lock(mutex_);
    closed_ = true;
}

bool WorkerPool::wait_idle(std::chrono::milliseconds timeout) {
    std::unique_lock lock(mutex_);
    return idle_cv_.wait_for(lock, timeout, [this] { return busy_ == 0 && queue_.empty(); });
}

void WorkerPool::run() {
    while (true) {
        std::function<void()> job;
        {
            std::unique_lock lock(mutex_);
            work_cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
            if (queue_.empty()) return;
            job = std::move(queue_.front());
            queue_.pop_front();
            ++busy_;
            in_flight_.store(busy_);
            if (busy_ > high_water_.load()) high_water_.store(busy_);
        }
        job();
        {
            std::lock_guard lock(mutex_);
            --busy_;
            --pending_;
            in_flight_.store(busy_);
        }
        idle_cv_.notify_all();
    }
}

}  // namespace mlserve
