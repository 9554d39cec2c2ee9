#include "doctest.h"
#include "oracle.hpp"

#include "focklat/entanglement.hpp"

#include <cmath>
#include <numbers>

using namespace focklat;

namespace {

const int kA[] = {0};

// Frozen from an independent mpmath evaluation of the Schmidt-form sums.
constexpr double kNegativity[] = {1.0,      0.957107, 0.910684, 0.865529, 0.823471, 0.785059,
                                  0.750287, 0.718907, 0.69059,  0.664991, 0.641786, 0.62068};
constexpr double kConcurrenceNormalized[] = {1.0,      0.968246, 0.957427, 0.952997, 0.951151, 0.950517,
                                             0.950505, 0.950827, 0.951332, 0.951937, 0.952592, 0.953269};

}  // namespace

TEST_CASE("Schmidt coefficients of the binomial state") {
  auto s1 = schmidt(rhomboidal_state(1), kA);
  REQUIRE(s1.rank() == 2);
  CHECK(s1.coefficients[0] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(s1.coefficients[1] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
  auto s2 = schmidt(rhomboidal_state(2), kA);
  CHECK(s2.coefficients[0] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(s2.coefficients[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s2.coefficients[2] == doctest::Approx(0.5).epsilon(1e-14));
  for (int n = 1; n <= 12; ++n) {
    auto s = schmidt(rhomboidal_state(n), kA);
    CHECK(s.rank() == static_cast<std::size_t>(n + 1));
    std::vector<double> expected;
    for (int i = 0; i <= n; ++i)
      expected.push_back(std::sqrt(oracle::factorial(n) / (oracle::factorial(i) * oracle::factorial(n - i))) *
                         std::pow(2.0, -n / 2.0));
    std::sort(expected.begin(), expected.end(), std::greater<>());
    double sq = 0;
    for (int i = 0; i <= n; ++i) {
      CHECK(std::abs(s.coefficients[static_cast<std::size_t>(i)] - expected[static_cast<std::size_t>(i)]) < 1e-12);
      sq += expected[static_cast<std::size_t>(i)] * expected[static_cast<std::size_t>(i)];
    }
    CHECK(sq == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("negativity") {
  auto n1 = negativity(rhomboidal_state(1), kA);
  CHECK(std::abs(n1.value - 1.0) < 1e-12);
  auto n2 = negativity(rhomboidal_state(2), kA);
  CHECK(n2.value == doctest::Approx(0.25 + 1 / std::sqrt(2.0)).epsilon(1e-12));
  for (int n = 1; n <= 12; ++n) {
    auto r = negativity(rhomboidal_state(n), kA);
    CHECK(r.value == doctest::Approx(kNegativity[n - 1]).epsilon(1e-6));
    CHECK(std::abs(r.value - negativity_closed_form(n)) < 1e-12);
    if (n <= 10) {
      REQUIRE(r.partial_transpose_value);
      CHECK(std::abs(r.value - *r.partial_transpose_value) < 1e-10);
    }
    if (n > 1) CHECK(r.value < kNegativity[n - 2]);
  }
  auto zero = negativity(rhomboidal_state(0) , std::vector<int>{0});
  CHECK(zero.zero_photon);
  CHECK(zero.value == 0.0);
}

TEST_CASE("negativity at large N against the asymptotes") {
  const double n = 200;
  const double value = negativity_closed_form(200);
  // sum of sqrt(binomials) ~ 2^{N/2} (2 pi N)^{1/4} ... gives sqrt(2 pi / N) - 1/N
  CHECK(value == doctest::Approx(std::sqrt(2 * std::numbers::pi / n) - 1 / n).epsilon(5e-3));
  // the alternative reading sqrt(2/pi) N^{-3/2} - 1/N is negative here
  CHECK(std::sqrt(2 / std::numbers::pi) * std::pow(n, -1.5) - 1 / n < 0.0);
}

TEST_CASE("concurrence") {
  CHECK(std::abs(concurrence(rhomboidal_state(1), kA, true) - 1.0) < 1e-12);
  CHECK(concurrence(rhomboidal_state(2), kA, true) ==
        doctest::Approx(std::sqrt(2 * (1 - 3.0 / 8)) / std::sqrt(4.0 / 3)).epsilon(1e-12));
  for (int n = 1; n <= 20; ++n) {
    CHECK(std::abs(concurrence(rhomboidal_state(n), kA) - concurrence_closed_form(n)) < 1e-10);
    CHECK(std::abs(concurrence(rhomboidal_state(n), kA, true) - concurrence_closed_form(n, true)) < 1e-10);
  }
  for (int n = 1; n <= 12; ++n)
    CHECK(concurrence_closed_form(n, true) == doctest::Approx(kConcurrenceNormalized[n - 1]).epsilon(1e-6));
  // dip then rise, minimum at N = 7
  for (int n = 2; n <= 7; ++n) CHECK(concurrence_closed_form(n, true) < concurrence_closed_form(n - 1, true));
  for (int n = 8; n <= 40; ++n) CHECK(concurrence_closed_form(n, true) > concurrence_closed_form(n - 1, true));
  // exact and log-gamma branches meet
  CHECK(concurrence_closed_form(21) == doctest::Approx(std::sqrt(2 * (1 - std::exp(std::lgamma(43) - 2 * std::lgamma(22)) / std::pow(4.0, 21)))).epsilon(1e-12));
  CHECK(concurrence_closed_form(1000, true) == doctest::Approx(0.991536).epsilon(1e-6));
}

TEST_CASE("PH test on stub reductions") {
  const double expected = (1 - std::sqrt(5.0)) / 6;
  auto psi = stub_state(1);
  const int ab[] = {0, 1};
  auto rho = partial_trace(psi, ab);
  CHECK(std::abs(ph_test(rho, kA) - expected) < 1e-10);
  for (int n = 1; n <= 12; ++n) {
    auto s = stub_state(n);
    const std::vector<std::vector<int>> keeps{{1, 2}, {0, 2}, {0, 1}};
    double first = 0;
    for (std::size_t t = 0; t < keeps.size(); ++t) {
      auto r = partial_trace(s, keeps[t]);
      const double v = ph_test(r, kA);
      CHECK(v < -1e-6);
      if (t == 0) first = v;
      CHECK(std::abs(v - first) < 1e-10);
    }
  }
  // separable and maximally mixed controls
  auto prod = FockBasis::fixed(2, 2);
  CHECK(ph_test(DensityMatrix::pure(StateVector::fock(prod, {1, 1})), kA) > -1e-12);
  auto t = FockBasis::truncated(2, 2);
  const auto d = static_cast<Eigen::Index>(t->size());
  DensityMatrix mixed{t, Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d)};
  CHECK(ph_test(mixed, kA) > -1e-12);
}

TEST_CASE("tripartite decomposition") {
  for (int n = 1; n <= 8; ++n) {
    auto dec = stub_tripartite_coefficients(n);
    CHECK(dec.coefficients.size() == static_cast<std::size_t>(n + 1));
    for (double k : dec.coefficients) CHECK(k > 0.0);
    CHECK(dec.coefficient_norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dec.reconstruction_fidelity == doctest::Approx(1.0).epsilon(1e-12));
    // coefficients are the Schmidt coefficients of the A|BC split
    auto s = schmidt(stub_state(n), kA);
    auto k = dec.coefficients;
    std::sort(k.begin(), k.end(), std::greater<>());
    for (std::size_t i = 0; i < k.size(); ++i) CHECK(std::abs(k[i] - s.coefficients[i]) < 1e-12);
  }
  auto n1 = stub_tripartite_coefficients(1);
  CHECK(n1.coefficients[0] == doctest::Approx(std::sqrt(2.0 / 3)));
  CHECK(n1.coefficients[1] == doctest::Approx(std::sqrt(1.0 / 3)));
  // |i'_N> = |(i-1)'_{N-1}>
  for (int n = 2; n <= 6; ++n) {
    auto hi = stub_tripartite_coefficients(n), lo = stub_tripartite_coefficients(n - 1);
    for (int i = 1; i <= n; ++i) {
      const auto& a = hi.partners[static_cast<std::size_t>(i)];
      const auto& b = lo.partners[static_cast<std::size_t>(i - 1)];
      CHECK((a.amplitudes() - b.amplitudes()).norm() < 1e-14);
    }
  }
}

TEST_CASE("rho_AB block form") {
  for (int n = 1; n <= 8; ++n) {
    const int ab[] = {0, 1};
    auto direct = partial_trace(stub_state(n), ab);
    auto block = rho_ab_block_form(n);
    REQUIRE(*direct.basis == *block.basis);
    CHECK((direct.matrix - block.matrix).cwiseAbs().maxCoeff() < 1e-12);
  }
  auto w = rho_ab_weights(1);
  CHECK(w[0] == doctest::Approx(1.0 / 3));
  CHECK(w[1] == doctest::Approx(2.0 / 3));
}

TEST_CASE("monogamy") {
  auto r1 = monogamy(1);
  CHECK(r1.c2_a_bc == doctest::Approx(8.0 / 9).epsilon(1e-12));
  CHECK(r1.c2_ab == doctest::Approx(4.0 / 9).epsilon(1e-12));
  CHECK(std::abs(r1.gap) < 1e-10);
  for (int n = 1; n <= 8; ++n) {
    auto r = monogamy(n);
    CHECK(std::abs(r.c2_ab - r.c2_ac) < 1e-10);
    CHECK(std::abs(r.c2_ab - r.c2_ab_analytic) < 1e-10);
    CHECK(std::abs(r.c2_a_bc - r.c2_a_bc_closed_form) < 1e-12);
    if (n >= 2) CHECK(std::abs(r.gap) > 1e-6);
  }
  CHECK(monogamy(2).gap == doctest::Approx(-0.5873).epsilon(1e-3));
}

TEST_CASE("Wootters cross-check at N = 1") {
  const int ab[] = {0, 1};
  auto rho = partial_trace(stub_state(1), ab);
  const double c = wootters_concurrence(two_mode_qubit_matrix(rho));
  CHECK(c == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(c * c == doctest::Approx(monogamy(1).c2_ab).epsilon(1e-12));
  // Bell state
  Eigen::Matrix4cd bell = Eigen::Matrix4cd::Zero();
  bell(1, 1) = bell(2, 2) = 0.5;
  bell(1, 2) = bell(2, 1) = -0.5;
  CHECK(wootters_concurrence(bell) == doctest::Approx(1.0));
}

TEST_CASE("decomposition sampler") {
  auto one = sample_decomposition_spread(1, 1000, 7);
  CHECK(one.spread() < 1e-8);
  CHECK(one.reference == doctest::Approx(2.0 / 3));
  // beyond one photon the average depends on the decomposition
  for (int n = 2; n <= 3; ++n) CHECK(sample_decomposition_spread(n, 200, 7).spread() > 0.05);
  auto a = sample_decomposition_spread(2, 50, 11), b = sample_decomposition_spread(2, 50, 11);
  CHECK(a.min == b.min);
  CHECK(a.max == b.max);
}
