#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include "chariot/execution.hpp"

namespace chariot::detail {

// Runs f(i) for i in [0, n). Under OpenMP the first failing index (lowest i) is rethrown,
// so errors are as deterministic as the results.
template <class F>
void for_each_index(std::size_t n, Execution exec, F&& f) {
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      f(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace chariot::detail
