#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace herald {

enum class Execution { serial, parallel };

/// Runs body(i) for i in [0, n). The parallel path uses an OpenMP worksharing
/// loop; the first exception thrown by any iteration is rethrown afterwards.
template <typename Body>
void parallel_for(std::size_t n, Execution exec, Body&& body) {
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace herald
