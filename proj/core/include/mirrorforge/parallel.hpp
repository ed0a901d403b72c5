#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace mirrorforge {

// Worker count: hardware concurrency capped by MIRRORFORGE_THREADS.
int thread_count();

// Runs body(begin, end) over disjoint chunks of [0, n). Results must not depend on the
// chunking; callers write to disjoint output slots only.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

// Pairwise (tree) summation; the order is fixed by n alone.
double pairwise_sum(std::span<const double> values);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> values);

}  // namespace mirrorforge
