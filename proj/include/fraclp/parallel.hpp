#pragma once

#include <cstddef>
#include <functional>

namespace fraclp {

/// Worker count used by parallel_for. Defaults to $FRACLP_WORKERS, else 1.
int worker_count();
void set_worker_count(int workers);

/// Runs body(i) for i in [0, n). Each index is handled by exactly one
/// worker; callers write results into per-index slots and reduce afterwards
/// in index order, so output never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fraclp
