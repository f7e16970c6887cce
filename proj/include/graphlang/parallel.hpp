#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace graphlang {

/// Selects between the OpenMP kernel and the serial reference path. Both
/// paths must produce identical results; tests compare them directly.
enum class Exec { serial, parallel };

/// Sets the OpenMP team size for subsequent parallel kernels (no-op without
/// OpenMP). jobs == 0 keeps the runtime default.
void set_jobs(int jobs);
int max_jobs();

/// Runs body(i) for i in [0, n). In parallel mode iterations are spread over
/// OpenMP threads; an exception thrown by any iteration is captured and the
/// one from the lowest index is rethrown after the loop, so error reporting
/// does not depend on scheduling.
template <typename Body>
void for_each_index(std::size_t n, Exec exec, Body&& body) {
  if (exec == Exec::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Order-preserving map: out[i] = fn(i).
template <typename T, typename Fn>
std::vector<T> map_indices(std::size_t n, Exec exec, Fn&& fn) {
  std::vector<T> out(n);
  for_each_index(n, exec, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

/// Pairwise (cascade) summation; the result does not depend on how the
/// terms were produced, only on their order.
double pairwise_sum(const double* values, std::size_t n);
inline double pairwise_sum(const std::vector<double>& values) {
  return pairwise_sum(values.data(), values.size());
}

}  // namespace graphlang
