#include "cardinal/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace cardinal {

namespace {
std::atomic<int> g_threads{0};
}

int thread_count() {
    int n = g_threads.load();
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return n > 0 ? n : 1;
}

void set_thread_count(int n) { g_threads.store(n); }

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
    const int nt = std::min<std::int64_t>(thread_count(), n);
    if (nt <= 1 || n < 256) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    const std::int64_t chunk = std::max<std::int64_t>(1, n / (8 * nt));
    std::vector<std::thread> workers;
    workers.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        workers.emplace_back([&] {
            for (;;) {
                const std::int64_t begin = next.fetch_add(chunk);
                if (begin >= n) return;
                const std::int64_t end = std::min(n, begin + chunk);
                for (std::int64_t i = begin; i < end; ++i) fn(i);
            }
        });
    }
    for (auto& w : workers) w.join();
}

} // namespace cardinal
