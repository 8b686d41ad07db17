#include "subrlab/numerics.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

namespace subrlab {

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t m = n / 2;
    return pairwise_sum(x, m) + pairwise_sum(x + m, n - m);
}

std::vector<double> trapezoid_weights(long n, double h, bool periodic) {
    std::vector<double> w(static_cast<std::size_t>(n), h);
    if (!periodic && n > 0) {
        w.front() *= 0.5;
        w.back() *= 0.5;
        if (n == 1) w.front() = 0.0;
    }
    return w;
}

unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SUBRLAB_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
        } catch (...) {
        }
    }
    return hw;
}

void parallel_for(long n, const std::function<void(long, long)>& fn) {
    if (n <= 0) return;
    const long workers = std::min<long>(static_cast<long>(worker_count()), n);
    if (workers <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(static_cast<std::size_t>(workers));
    const long chunk = (n + workers - 1) / workers;
    for (long w = 0; w < workers; ++w) {
        const long b = w * chunk, e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&, w, b, e] {
            try {
                fn(b, e);
            } catch (...) {
                errs[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    // report the lowest-index failure so errors are schedule independent
    for (auto& e : errs) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace subrlab
