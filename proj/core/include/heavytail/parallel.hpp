#pragma once

#include <cstddef>
#include <functional>

namespace heavytail {

// Worker count for the parallel row loops. 1 (the default) disables
// threading entirely.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs fn(row) for every row in [0, n). Each row writes only to its own
// output slot and any shared reduction is performed afterwards in row
// order by the caller, so results are bit-identical for every thread
// count.
void parallel_for_rows(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace heavytail
