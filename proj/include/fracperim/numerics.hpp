#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace fracperim {

/// Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule with `n` points; thread-safe.
const GaussRule& gauss_rule(int n);

/// Compensated (Neumaier) accumulator; summation order is the caller's.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
/// handled exactly once; callers write into per-index slots and reduce in
/// index order, which keeps results independent of the thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

/// Ordered compensated sum of per-slot partials.
double ordered_sum(const std::vector<double>& partials);

}  // namespace fracperim
