#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

// Data-parallel numeric kernels. Every kernel has a serial reference path
// and an OpenMP path selected by Exec. The two paths share the same
// noinline per-row inner routine and reductions use a fixed chunk order,
// so results are bit-identical regardless of Exec and thread count. The
// test suite asserts this and bench/kernel_bench.cpp compares their speed.

namespace gv::kernels {

enum class Exec { Serial, Parallel };

/// Process-wide default used by the higher-level modules.
Exec default_exec();
void set_default_exec(Exec e);

namespace detail {

template <typename T>
[[gnu::noinline]] void row_ab(const T* a, const T* B, T* c, size_t k, size_t n) {
    for (size_t j = 0; j < n; ++j) c[j] = T(0);
    for (size_t kk = 0; kk < k; ++kk) {
        T av = a[kk];
        const T* b = B + kk * n;
        for (size_t j = 0; j < n; ++j) c[j] += av * b[j];
    }
}

template <typename T>
[[gnu::noinline]] void row_abt(const T* a, const T* B, T* c, size_t k, size_t n) {
    for (size_t j = 0; j < n; ++j) {
        const T* b = B + j * k;
        T acc = T(0);
        for (size_t kk = 0; kk < k; ++kk) acc += a[kk] * b[kk];
        c[j] = acc;
    }
}

template <typename T>
[[gnu::noinline]] void row_atb(const T* A, const T* B, T* c, size_t m, size_t k,
                               size_t n, size_t col) {
    for (size_t j = 0; j < n; ++j) c[j] = T(0);
    for (size_t i = 0; i < m; ++i) {
        T av = A[i * k + col];
        const T* b = B + i * n;
        for (size_t j = 0; j < n; ++j) c[j] += av * b[j];
    }
}

template <typename T>
[[gnu::noinline]] void col_stats(const T* X, size_t n, size_t d, size_t j,
                                 T* mean, T* std_out) {
    T s = T(0);
    for (size_t i = 0; i < n; ++i) s += X[i * d + j];
    T mu = s / static_cast<T>(n);
    T ss = T(0);
    for (size_t i = 0; i < n; ++i) {
        T dlt = X[i * d + j] - mu;
        ss += dlt * dlt;
    }
    mean[j] = mu;
    std_out[j] = std::sqrt(ss / static_cast<T>(n));
}

}  // namespace detail

/// C[m x n] = A[m x k] * B[k x n]
template <typename T>
void matmul_ab(const T* A, const T* B, T* C, size_t m, size_t k, size_t n,
               Exec exec) {
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (size_t i = 0; i < m; ++i)
            detail::row_ab(A + i * k, B, C + i * n, k, n);
    } else {
        for (size_t i = 0; i < m; ++i)
            detail::row_ab(A + i * k, B, C + i * n, k, n);
    }
}

/// C[m x n] = A[m x k] * B[n x k]^T   (dot products of rows)
template <typename T>
void matmul_abt(const T* A, const T* B, T* C, size_t m, size_t k, size_t n,
                Exec exec) {
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (size_t i = 0; i < m; ++i)
            detail::row_abt(A + i * k, B, C + i * n, k, n);
    } else {
        for (size_t i = 0; i < m; ++i)
            detail::row_abt(A + i * k, B, C + i * n, k, n);
    }
}

/// C[k x n] = A[m x k]^T * B[m x n]
template <typename T>
void matmul_atb(const T* A, const T* B, T* C, size_t m, size_t k, size_t n,
                Exec exec) {
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (size_t col = 0; col < k; ++col)
            detail::row_atb(A, B, C + col * n, m, k, n, col);
    } else {
        for (size_t col = 0; col < k; ++col)
            detail::row_atb(A, B, C + col * n, m, k, n, col);
    }
}

/// Y[i][j] += b[j]
template <typename T>
void add_bias_rows(T* Y, const T* b, size_t m, size_t n, Exec exec) {
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (size_t i = 0; i < m; ++i) {
            T* y = Y + i * n;
            for (size_t j = 0; j < n; ++j) y[j] += b[j];
        }
    } else {
        for (size_t i = 0; i < m; ++i) {
            T* y = Y + i * n;
            for (size_t j = 0; j < n; ++j) y[j] += b[j];
        }
    }
}

/// out[j] = sum_i A[i][j], i ascending per column.
template <typename T>
void column_sums(const T* A, T* out, size_t m, size_t n, Exec exec) {
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (size_t j = 0; j < n; ++j) {
            T acc = T(0);
            for (size_t i = 0; i < m; ++i) acc += A[i * n + j];
            out[j] = acc;
        }
    } else {
        for (size_t j = 0; j < n; ++j) {
            T acc = T(0);
            for (size_t i = 0; i < m; ++i) acc += A[i * n + j];
            out[j] = acc;
        }
    }
}

/// In-place max(0, x).
template <typename T>
void relu(T* a, size_t n, Exec exec) {
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (size_t i = 0; i < n; ++i) a[i] = a[i] > T(0) ? a[i] : T(0);
    } else {
        for (size_t i = 0; i < n; ++i) a[i] = a[i] > T(0) ? a[i] : T(0);
    }
}

/// g[i] *= (z[i] > 0); the relu derivative at 0 is taken as 0.
template <typename T>
void relu_grad_mask(const T* z, T* g, size_t n, Exec exec) {
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (size_t i = 0; i < n; ++i) g[i] = z[i] > T(0) ? g[i] : T(0);
    } else {
        for (size_t i = 0; i < n; ++i) g[i] = z[i] > T(0) ? g[i] : T(0);
    }
}

/// a[i] *= b[i]
template <typename T>
void hadamard(T* a, const T* b, size_t n, Exec exec) {
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (size_t i = 0; i < n; ++i) a[i] *= b[i];
    } else {
        for (size_t i = 0; i < n; ++i) a[i] *= b[i];
    }
}

/// Fixed-order chunked sum: partial sums over 4096-element chunks are
/// combined in chunk order, so Serial and Parallel agree bit for bit.
template <typename T>
T chunked_sum(const T* x, size_t n, Exec exec) {
    constexpr size_t kChunk = 4096;
    size_t nchunks = (n + kChunk - 1) / kChunk;
    if (nchunks <= 1) {
        T acc = T(0);
        for (size_t i = 0; i < n; ++i) acc += x[i];
        return acc;
    }
    std::vector<T> partial(nchunks, T(0));
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (size_t c = 0; c < nchunks; ++c) {
            size_t lo = c * kChunk, hi = lo + kChunk < n ? lo + kChunk : n;
            T acc = T(0);
            for (size_t i = lo; i < hi; ++i) acc += x[i];
            partial[c] = acc;
        }
    } else {
        for (size_t c = 0; c < nchunks; ++c) {
            size_t lo = c * kChunk, hi = lo + kChunk < n ? lo + kChunk : n;
            T acc = T(0);
            for (size_t i = lo; i < hi; ++i) acc += x[i];
            partial[c] = acc;
        }
    }
    T total = T(0);
    for (size_t c = 0; c < nchunks; ++c) total += partial[c];
    return total;
}

/// Per-column mean and population standard deviation of X[n x d].
/// Columns are independent, so the parallel path is trivially exact.
template <typename T>
void column_mean_std(const T* X, size_t n, size_t d, T* mean, T* std_out,
                     Exec exec) {
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (size_t j = 0; j < d; ++j) detail::col_stats(X, n, d, j, mean, std_out);
    } else {
        for (size_t j = 0; j < d; ++j) detail::col_stats(X, n, d, j, mean, std_out);
    }
}

}  // namespace gv::kernels
