#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace budgetext {

/// Worker count: BUDGETEXT_THREADS when set to a positive integer, otherwise
/// every hardware thread.
inline std::size_t thread_count()
{
  if (char const *env = std::getenv("BUDGETEXT_THREADS"))
  {
    try
    {
      long const requested = std::stol(env);
      if (requested > 0) return static_cast<std::size_t>(requested);
    }
    catch (std::exception const &)
    {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs fn(i) for every i in [0, count). Each index is handled exactly once;
/// callers write results into slot i so the outcome does not depend on
/// scheduling. The first exception thrown by any task is rethrown.
template <class Fn>
void parallel_for(std::size_t count, Fn &&fn, std::size_t threads = thread_count())
{
  threads = std::min(threads, count);
  if (threads <= 1)
  {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr       failure;
  std::mutex               failure_lock;
  auto const worker = [&] {
    for (std::size_t i = next++; i < count; i = next++)
    {
      try
      {
        fn(i);
      }
      catch (...)
      {
        std::lock_guard<std::mutex> guard(failure_lock);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto &thread : pool) thread.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace budgetext
