#include "elastica/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace elastica::par {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n) {
    if (n <= 0) throw InvalidArgument("thread count must be positive");
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace elastica::par
