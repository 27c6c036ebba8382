#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace brach::par {

/// Evaluates job(i) for i in [0, count). Entries are independent, so the
/// OpenMP path must match the serial reference bit for bit; tests compare the
/// two directly. jobs <= 1 selects the serial reference, jobs == 0 lets the
/// runtime pick a thread count.
std::vector<double> map_batch_serial(std::size_t count,
                                     const std::function<double(std::size_t)>& job);
std::vector<double> map_batch(std::size_t count, const std::function<double(std::size_t)>& job,
                              int jobs);

/// Thread count the parallel path would use for jobs == 0.
int recommended_jobs();

}  // namespace brach::par
