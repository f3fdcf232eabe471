#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "rrdlab/error.hpp"

namespace rrdlab {

template <class T>
struct TrialResults {
  std::vector<std::optional<T>> values;  // indexed by trial; empty on numerical failure
  std::vector<std::string> errors;       // one message per failed trial, in trial order
  int failures() const noexcept { return static_cast<int>(errors.size()); }
};

inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// Runs fn(trial) for trial in [0, trials) on a fixed pool. Workers pull trial
// indices from a shared counter and write into the slot for that index, so the
// result vector does not depend on scheduling. NumericalError and
// BudgetExhausted mark the trial as failed; anything else is rethrown.
template <class F>
auto parallel_trials(int trials, int workers, F&& fn) -> TrialResults<std::invoke_result_t<F&, int>> {
  using T = std::invoke_result_t<F&, int>;
  TrialResults<T> out;
  out.values.resize(std::max(trials, 0));
  std::vector<std::string> messages(out.values.size());
  std::atomic<int> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mu;

  auto worker = [&] {
    for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
      try {
        out.values[t] = fn(t);
      } catch (const NumericalError& e) {
        messages[t] = e.what();
      } catch (const BudgetExhausted& e) {
        messages[t] = e.what();
      } catch (...) {
        std::lock_guard lock(fatal_mu);
        if (!fatal) fatal = std::current_exception();
        next.store(trials);
      }
    }
  };

  const int pool = std::min(resolve_workers(workers), std::max(trials, 1));
  if (pool <= 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(pool);
    for (int w = 0; w < pool; ++w) threads.emplace_back(worker);
  }
  if (fatal) std::rethrow_exception(fatal);
  for (std::size_t t = 0; t < out.values.size(); ++t) {
    if (!out.values[t]) out.errors.push_back("trial " + std::to_string(t) + ": " + messages[t]);
  }
  return out;
}

}  // namespace rrdlab
