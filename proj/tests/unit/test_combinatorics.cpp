#include "doctest.h"
#include "oracle.hpp"

#include "focklat/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace focklat;

TEST_CASE("binomial small values") {
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(5, 3) == 10);
  CHECK(binomial(5, 6) == 0);
  CHECK(binomial(62, 31) == 465428353255261088ULL);
  CHECK_THROWS_AS(binomial(70, 35), std::overflow_error);
}

TEST_CASE("log forms agree with exact forms") {
  for (int n = 0; n <= 30; ++n)
    for (int k = 0; k <= n; ++k)
      CHECK(std::exp(log_binomial(n, k)) == doctest::Approx(static_cast<double>(binomial(n, k))).epsilon(1e-12));
  const std::vector<int> parts{3, 0, 5, 2};
  CHECK(multinomial(parts) == 2520);
  CHECK(std::exp(log_multinomial(parts)) == doctest::Approx(2520.0).epsilon(1e-12));
  CHECK(sqrt_multinomial(parts) == doctest::Approx(std::sqrt(2520.0)).epsilon(1e-14));
}

TEST_CASE("sqrt_multinomial continuous across the exact limit") {
  for (int n = 18; n <= 24; ++n) {
    const std::vector<int> parts{n / 2, n - n / 2};
    const double ref = std::sqrt(oracle::factorial(n) / (oracle::factorial(n / 2) * oracle::factorial(n - n / 2)));
    CHECK(sqrt_multinomial(parts) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("weak compositions match brute force enumeration") {
  for (int parts = 1; parts <= 4; ++parts)
    for (int total = 0; total <= 5; ++total) {
      auto got = weak_compositions(total, parts);
      auto ref = oracle::states_with_total(parts, total);
      std::sort(ref.begin(), ref.end(), std::greater<>());
      CHECK(got == ref);
      CHECK(got.size() == binomial(total + parts - 1, parts - 1));
    }
}
