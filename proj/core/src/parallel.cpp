// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#include "polarfuse/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace polarfuse {

namespace {
std::atomic<int> g_threads{1};
}

void set_threads(int n) {
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    g_threads.store(n);
}

int threads() { return g_threads.load(); }

void parallel_for(long n, const std::function<void(long)>& fn) {
    if (n <= 0) return;
    int nt = threads();
    if (nt <= 1 || n == 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    if (static_cast<long>(nt) > n) nt = static_cast<int>(n);
    std::vector<std::thread> workers;
    workers.reserve(static_cast<size_t>(nt));
    long chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        long lo = t * chunk;
        long hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([lo, hi, &fn] {
            for (long i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& w : workers) w.join();
}

} // namespace polarfuse
