#include "bipot/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bipot {

namespace {
#ifdef _OPENMP
const int kDefaultThreads = omp_get_max_threads();
#endif
} // namespace

void set_max_threads(int n)
{
#ifdef _OPENMP
    omp_set_num_threads(n < 1 ? kDefaultThreads : n);
#else
    (void)n;
#endif
}

void apply_thread_env()
{
    if (const char* s = std::getenv("BIPOT_THREADS")) {
        try {
            set_max_threads(std::stoi(s));
        } catch (const std::exception&) {
            // ignored: malformed value leaves the default in place
        }
    }
}

int max_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace bipot
