#pragma once

// Row-major matrix kernels used by the dense and conv1d layers. Loops are
// ordered so the innermost dimension is contiguous and auto-vectorizable.
// OpenMP splits full output rows across threads; no thread ever accumulates
// into another thread's output, so results are bitwise identical for any
// thread count.

#include <cstddef>

namespace risae {

// C[M,N] += A[M,K] * B[K,N]
inline void gemm_nn(const double* a, const double* b, double* c,
                    std::size_t m, std::size_t k, std::size_t n) {
    const bool big = 2.0 * static_cast<double>(m) * static_cast<double>(k) * static_cast<double>(n) > 4.0e6;
#pragma omp parallel for schedule(static) if (big)
    for (long long i = 0; i < static_cast<long long>(m); ++i) {
        const double* ai = a + static_cast<std::size_t>(i) * k;
        double* ci = c + static_cast<std::size_t>(i) * n;
        for (std::size_t p = 0; p < k; ++p) {
            const double av = ai[p];
            if (av == 0.0) continue;
            const double* bp = b + p * n;
            for (std::size_t j = 0; j < n; ++j) ci[j] += av * bp[j];
        }
    }
}

// C[K,N] += A[M,K]^T * B[M,N]
inline void gemm_tn(const double* a, const double* b, double* c,
                    std::size_t m, std::size_t k, std::size_t n) {
    const bool big = 2.0 * static_cast<double>(m) * static_cast<double>(k) * static_cast<double>(n) > 4.0e6;
#pragma omp parallel for schedule(static) if (big)
    for (long long p = 0; p < static_cast<long long>(k); ++p) {
        double* cp = c + static_cast<std::size_t>(p) * n;
        for (std::size_t i = 0; i < m; ++i) {
            const double av = a[i * k + static_cast<std::size_t>(p)];
            if (av == 0.0) continue;
            const double* bi = b + i * n;
            for (std::size_t j = 0; j < n; ++j) cp[j] += av * bi[j];
        }
    }
}

// C[M,K] += A[M,N] * B[K,N]^T
inline void gemm_nt(const double* a, const double* b, double* c,
                    std::size_t m, std::size_t n, std::size_t k) {
    const bool big = 2.0 * static_cast<double>(m) * static_cast<double>(k) * static_cast<double>(n) > 4.0e6;
#pragma omp parallel for schedule(static) if (big)
    for (long long i = 0; i < static_cast<long long>(m); ++i) {
        const double* ai = a + static_cast<std::size_t>(i) * n;
        double* ci = c + static_cast<std::size_t>(i) * k;
        for (std::size_t p = 0; p < k; ++p) {
            const double* bp = b + p * n;
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += ai[j] * bp[j];
            ci[p] += acc;
        }
    }
}

} // namespace risae
