#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace subrlab {

// Finite-difference stencils on a uniform 1D grid of n samples with spacing h.
// f(k) returns the sample at index k. Interior nodes use 4th-order central
// stencils; the two nodes nearest each end fall back to 4th-order one-sided ones.
// With periodic = true indices wrap around.

template <class T, class F>
T fd_first(F&& f, long i, long n, double h, bool periodic = false) {
    if (periodic) {
        auto g = [&](long k) { return f(((k % n) + n) % n); };
        return T((g(i - 2) - 8.0 * g(i - 1) + 8.0 * g(i + 1) - g(i + 2)) / (12.0 * h));
    }
    if (i >= 2 && i <= n - 3) {
        return T((f(i - 2) - 8.0 * f(i - 1) + 8.0 * f(i + 1) - f(i + 2)) / (12.0 * h));
    }
    if (i == 0) return T((-25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4)) / (12.0 * h));
    if (i == 1) return T((-3.0 * f(0) - 10.0 * f(1) + 18.0 * f(2) - 6.0 * f(3) + f(4)) / (12.0 * h));
    if (i == n - 1) {
        return T(-(-25.0 * f(n - 1) + 48.0 * f(n - 2) - 36.0 * f(n - 3) + 16.0 * f(n - 4) - 3.0 * f(n - 5)) /
                 (12.0 * h));
    }
    return T(-(-3.0 * f(n - 1) - 10.0 * f(n - 2) + 18.0 * f(n - 3) - 6.0 * f(n - 4) + f(n - 5)) / (12.0 * h));
}

template <class T, class F>
T fd_second(F&& f, long i, long n, double h, bool periodic = false) {
    const double h2 = 12.0 * h * h;
    if (periodic) {
        auto g = [&](long k) { return f(((k % n) + n) % n); };
        return T((-g(i - 2) + 16.0 * g(i - 1) - 30.0 * g(i) + 16.0 * g(i + 1) - g(i + 2)) / h2);
    }
    if (i >= 2 && i <= n - 3) {
        return T((-f(i - 2) + 16.0 * f(i - 1) - 30.0 * f(i) + 16.0 * f(i + 1) - f(i + 2)) / h2);
    }
    if (i == 0) {
        return T((45.0 * f(0) - 154.0 * f(1) + 214.0 * f(2) - 156.0 * f(3) + 61.0 * f(4) - 10.0 * f(5)) / h2);
    }
    if (i == 1) {
        return T((10.0 * f(0) - 15.0 * f(1) - 4.0 * f(2) + 14.0 * f(3) - 6.0 * f(4) + f(5)) / h2);
    }
    if (i == n - 1) {
        return T((45.0 * f(n - 1) - 154.0 * f(n - 2) + 214.0 * f(n - 3) - 156.0 * f(n - 4) + 61.0 * f(n - 5) -
                  10.0 * f(n - 6)) /
                 h2);
    }
    return T((10.0 * f(n - 1) - 15.0 * f(n - 2) - 4.0 * f(n - 3) + 14.0 * f(n - 4) - 6.0 * f(n - 5) + f(n - 6)) /
             h2);
}

// pairwise summation; fixed order for a given length
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

// composite trapezoid weights for n nodes; periodic grids get uniform weights
std::vector<double> trapezoid_weights(long n, double h, bool periodic);

// worker count honouring SUBRLAB_THREADS
unsigned worker_count();

// static partition of [0, n) over worker threads; fn(begin, end)
void parallel_for(long n, const std::function<void(long, long)>& fn);

}  // namespace subrlab
