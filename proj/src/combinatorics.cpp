#include "focklat/combinatorics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace focklat {

std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0) throw std::invalid_argument("binomial: negative argument");
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 0; i < k; ++i) {
    // result * (n - i) is divisible by (i + 1) at every step
    const std::uint64_t g = std::gcd(result, static_cast<std::uint64_t>(i + 1));
    const std::uint64_t num = static_cast<std::uint64_t>(n - i) / ((i + 1) / g);
    std::uint64_t next = 0;
    if (__builtin_mul_overflow(result / g, num, &next))
      throw std::overflow_error("binomial: result exceeds 64 bits");
    result = next;
  }
  return result;
}

double log_binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) throw std::invalid_argument("log_binomial: out of range");
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

std::uint64_t multinomial(std::span<const int> parts) {
  std::uint64_t result = 1;
  int running = 0;
  for (int p : parts) {
    if (p < 0) throw std::invalid_argument("multinomial: negative part");
    running += p;
    std::uint64_t next = 0;
    if (__builtin_mul_overflow(result, binomial(running, p), &next))
      throw std::overflow_error("multinomial: result exceeds 64 bits");
    result = next;
  }
  return result;
}

double log_multinomial(std::span<const int> parts) {
  int total = 0;
  double acc = 0.0;
  for (int p : parts) {
    if (p < 0) throw std::invalid_argument("log_multinomial: negative part");
    total += p;
    acc -= std::lgamma(p + 1.0);
  }
  return acc + std::lgamma(total + 1.0);
}

double sqrt_multinomial(std::span<const int> parts) {
  const int total = std::accumulate(parts.begin(), parts.end(), 0);
  if (total <= kExactMultinomialLimit)
    return std::sqrt(static_cast<double>(multinomial(parts)));
  return std::exp(0.5 * log_multinomial(parts));
}

namespace {

void compose(int remaining, std::size_t slot, std::vector<int>& current,
             std::vector<std::vector<int>>& out) {
  if (slot + 1 == current.size()) {
    current[slot] = remaining;
    out.push_back(current);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    current[slot] = v;
    compose(remaining - v, slot + 1, current, out);
  }
}

}  // namespace

std::vector<std::vector<int>> weak_compositions(int total, int parts) {
  if (parts < 1) throw std::invalid_argument("weak_compositions: need at least one part");
  if (total < 0) throw std::invalid_argument("weak_compositions: negative total");
  std::vector<std::vector<int>> out;
  std::vector<int> current(static_cast<std::size_t>(parts), 0);
  compose(total, 0, current, out);
  return out;
}

}  // namespace focklat
