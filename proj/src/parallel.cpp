#include "brach/parallel.hpp"

#include <algorithm>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace brach::par {

std::vector<double> map_batch_serial(std::size_t count,
                                     const std::function<double(std::size_t)>& job) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = job(i);
    return out;
}

std::vector<double> map_batch(std::size_t count, const std::function<double(std::size_t)>& job,
                              int jobs) {
#ifdef _OPENMP
    if (jobs != 1 && count > 1) {
        std::vector<double> out(count);
        std::exception_ptr failure = nullptr;
        const int threads = jobs > 1 ? jobs : omp_get_max_threads();
        // keep per-dispatch overhead small when entries are cheap
        const long long chunk =
            std::max<long long>(1, static_cast<long long>(count) / (16LL * threads));
#pragma omp parallel for schedule(dynamic, chunk) num_threads(threads)
        for (long long i = 0; i < static_cast<long long>(count); ++i) {
            try {
                out[static_cast<std::size_t>(i)] = job(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        return out;
    }
#else
    (void)jobs;
#endif
    return map_batch_serial(count, job);
}

int recommended_jobs() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace brach::par
