#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epscov {

// Absolute tolerance for every distance comparison.
inline constexpr double kTol = 1e-9;

// d < eps in the chain predicate means d < eps - kTol.
inline bool strictly_less(double d, double eps) { return d < eps - kTol; }

inline bool nearly_equal(double a, double b) {
  double diff = a - b;
  return diff <= kTol && diff >= -kTol;
}

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ParseError : public DomainError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DomainError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Raised when a computation needs a verdict the oracle could not produce.
class UnresolvedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace epscov

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace epscov {

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// Runs f(i) for i in [0, n); results must be written to slot i.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(threads, n); ++t)
    pool.emplace_back([&] {
      for (std::size_t i; !failed && (i = next++) < n;) {
        try {
          f(i);
        } catch (...) {
          if (!failed.exchange(true)) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace epscov
