#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace focklat {

/// Largest total for which multinomials are evaluated in exact integer arithmetic.
inline constexpr int kExactMultinomialLimit = 20;

/// Exact binomial coefficient. Throws std::overflow_error if it does not fit in 64 bits.
std::uint64_t binomial(int n, int k);

double log_binomial(int n, int k);

/// Exact multinomial (sum parts)! / prod(part!). Throws on overflow.
std::uint64_t multinomial(std::span<const int> parts);

double log_multinomial(std::span<const int> parts);

/// sqrt of the multinomial coefficient; exact integer route up to
/// kExactMultinomialLimit photons, log-gamma beyond.
double sqrt_multinomial(std::span<const int> parts);

/// All weak compositions of `total` into `parts` non-negative parts, in
/// lexicographically descending order (first part most significant).
std::vector<std::vector<int>> weak_compositions(int total, int parts);

}  // namespace focklat
