#include "ordsens/common.hpp"

#include <algorithm>
#include <functional>

namespace ordsens {

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 32) {
        double acc = 0.0;
        for (double x : v) acc += x;
        return acc;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

int thread_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("ORDSENS_THREADS")) {
        char* end = nullptr;
        long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0) n = std::min<long>(n, cap);
    }
    return n;
}

void parallel_for(Index n, const std::function<void(Index, Index)>& fn) {
    const int workers = std::min<Index>(thread_count(), std::max<Index>(n, 1));
    if (workers <= 1 || n < 2) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const Index chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const Index begin = std::min<Index>(w * chunk, n);
        const Index end = std::min<Index>(begin + chunk, n);
        if (begin == end) break;
        pool.emplace_back(fn, begin, end);
    }
    for (auto& t : pool) t.join();
}

}  // namespace ordsens
