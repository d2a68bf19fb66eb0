#pragma once

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace cmcbar {

/// Thrown when an iterative method (quadrature, root find, Newton) fails to
/// reach its tolerance. Distinct from std::domain_error, which signals bad input.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Solver tolerances. These are configuration-surface values: every numeric
/// entry point accepts them (or a single member) with these defaults.
struct Tolerances {
  double quadrature = 1e-10;  // absolute tolerance of adaptive quadrature
  double root_x = 1e-10;      // bracket width tolerance of scalar root finds
  double root_f = 1e-9;       // residual tolerance of scalar root finds
  double ode = 1e-6;          // oracle height agreement tolerance
  double pde = 1e-10;         // Newton residual tolerance (max norm)
};

/// Number of worker threads for parameter sweeps. CMCBAR_THREADS caps it.
inline unsigned sweep_thread_count() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("CMCBAR_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
  }
  return n;
}

/// Runs fn(i) for i in [0, n). Each index writes only its own output slot, so
/// results are deterministic regardless of scheduling.
template <class Fn>
void parallel_for(int n, Fn&& fn) {
  const unsigned workers = std::min<unsigned>(sweep_thread_count(), n > 0 ? n : 1);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = static_cast<int>(w); i < n; i += static_cast<int>(workers)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace cmcbar
