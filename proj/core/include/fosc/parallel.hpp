#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fosc
{

struct Parallelism
{
  int threads = 1;
};

/// Runs body(i) for i in [0, n). Work is split into contiguous blocks so the
/// results written by index do not depend on the thread count. The first
/// exception thrown by any worker is rethrown on the calling thread.
template <class Body>
void parallelFor(std::size_t n, Parallelism par, Body&& body)
{
  const std::size_t workers =
    std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, par.threads)));
  if (workers <= 1)
  {
    for (std::size_t i = 0; i < n; ++i)
    {
      body(i);
    }
    return;
  }

  std::exception_ptr firstError;
  std::mutex errorMutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w)
  {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back(
      [&, begin, end]
      {
        try
        {
          for (std::size_t i = begin; i < end; ++i)
          {
            body(i);
          }
        }
        catch (...)
        {
          std::lock_guard lock{errorMutex};
          if (!firstError)
          {
            firstError = std::current_exception();
          }
        }
      });
  }
  pool.clear();
  if (firstError)
  {
    std::rethrow_exception(firstError);
  }
}

}  // namespace fosc
