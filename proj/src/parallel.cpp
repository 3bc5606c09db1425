#include "gig/parallel.hpp"

#include <omp.h>

namespace gig {

void set_thread_count(int n) {
    if (n > 0) omp_set_num_threads(n);
}

int thread_count() { return omp_get_max_threads(); }

SerialScope::SerialScope() : saved_(omp_get_max_threads()) { omp_set_num_threads(1); }

SerialScope::~SerialScope() { omp_set_num_threads(saved_); }

} // namespace gig
