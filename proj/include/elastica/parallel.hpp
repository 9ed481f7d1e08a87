#pragma once

#include <algorithm>
#include <vector>

#include "elastica/common.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace elastica::par {

int max_threads();
void set_threads(int n);

// Number of fixed reduction chunks. Chunking is by index, independent of the
// thread count, so parallel sums are bitwise reproducible.
inline constexpr Index kChunks = 64;

// Serial compensated sum; the reference implementation the parallel kernels
// are tested against.
template <class F>
double sum_serial(Index n, F&& term) {
    KahanSum s;
    for (Index i = 0; i < n; ++i) s.add(term(i));
    return s.value();
}

// Chunk-deterministic parallel compensated sum: per-chunk serial Kahan sums
// combined in chunk order.
template <class F>
double sum_chunked(Index n, F&& term) {
    if (n < 4096) return sum_serial(n, term);
    std::array<double, kChunks> partial{};
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (Index c = 0; c < kChunks; ++c) {
        Index lo = n * c / kChunks;
        Index hi = n * (c + 1) / kChunks;
        KahanSum s;
        for (Index i = lo; i < hi; ++i) s.add(term(i));
        partial[static_cast<std::size_t>(c)] = s.value();
    }
    KahanSum total;
    for (double p : partial) total.add(p);
    return total.value();
}

template <class F>
void for_each(Index n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (Index i = 0; i < n; ++i) f(i);
}

// Minimum over i of term(i); min is exact on floats, so the reduction order
// does not affect the result.
template <class F>
double min_serial(Index n, F&& term) {
    double m = term(0);
    for (Index i = 1; i < n; ++i) m = std::min(m, term(i));
    return m;
}

template <class F>
double min_chunked(Index n, F&& term) {
    if (n < 4096) return min_serial(n, term);
    std::array<double, kChunks> partial{};
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (Index c = 0; c < kChunks; ++c) {
        Index lo = n * c / kChunks;
        Index hi = n * (c + 1) / kChunks;
        double m = term(lo);
        for (Index i = lo + 1; i < hi; ++i) m = std::min(m, term(i));
        partial[static_cast<std::size_t>(c)] = m;
    }
    double m = partial[0];
    for (double p : partial) m = std::min(m, p);
    return m;
}

}  // namespace elastica::par
