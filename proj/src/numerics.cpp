#include "fracperim/numerics.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <atomic>
#include <map>
#include <mutex>
#include <thread>

namespace fracperim {

const GaussRule& gauss_rule(int n) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  // legendre_p_zeros returns the nonnegative zeros of P_n in increasing order.
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> x;
  for (auto z = zeros.rbegin(); z != zeros.rend(); ++z) {
    if (*z > 0.0) x.push_back(-*z);
  }
  for (double z : zeros) x.push_back(z);
  for (double xi : x) {
    const double dp = boost::math::legendre_p_prime(n, xi);
    const double w = 2.0 / ((1.0 - xi * xi) * dp * dp);
    rule.nodes.push_back(0.5 * (xi + 1.0));
    rule.weights.push_back(0.5 * w);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(n, threads > 1 ? static_cast<std::size_t>(threads) : 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
}

double ordered_sum(const std::vector<double>& partials) {
  CompensatedSum acc;
  for (double p : partials) acc.add(p);
  return acc.value();
}

}  // namespace fracperim
