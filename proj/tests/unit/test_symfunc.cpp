#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "quermass/error.hpp"
#include "quermass/symfunc.hpp"

using namespace quermass;
using Vec = std::vector<double>;

namespace {

// Brute force over all subsets; an oracle independent of the recurrence.
double sigma_subsets(const Vec& l, int m) {
  const std::size_t n = l.size();
  double sum = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != m) continue;
    double p = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) p *= l[i];
    }
    sum += p;
  }
  return sum;
}

Vec random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_SUITE("symfunc") {

TEST_CASE("elem_sym small cases") {
  CHECK(elem_sym(Vec{2, 3}, 1) == 5.0);
  CHECK(elem_sym(Vec{1, 2, 3}, 2) == 11.0);
  CHECK(elem_sym(Vec{1, 1, 1}, 2) == 3.0);
  CHECK(elem_sym(Vec{1, 2}, 3) == 0.0);
  CHECK(elem_sym(Vec{4, 5}, 0) == 1.0);
}

TEST_CASE("sigma of the identity is a binomial coefficient") {
  for (int n = 1; n <= 8; ++n) {
    const Vec ones(n, 1.0);
    for (int k = 1; k <= n; ++k) CHECK(elem_sym(ones, k) == binomial(n, k));
  }
}

TEST_CASE("recurrence matches subset enumeration") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto l = random_vec(rng, 1 + trial % 8);
    for (int m = 0; m <= static_cast<int>(l.size()) + 1; ++m) {
      CHECK(elem_sym(l, m) == doctest::Approx(sigma_subsets(l, m)).epsilon(1e-13));
    }
  }
}

TEST_CASE("elem_sym_all agrees with elem_sym") {
  const Vec l{0.3, -1.2, 2.5, 0.7};
  const auto all = elem_sym_all(l, 5);
  REQUIRE(all.size() == 6);
  for (int m = 0; m <= 5; ++m) CHECK(all[m] == doctest::Approx(elem_sym(l, m)));
}

TEST_CASE("gradient entries") {
  CHECK(elem_sym_gradient(Vec{1, 2, 3}, 2)[0] == 5.0);
  for (double g : elem_sym_gradient(Vec{0.4, -3, 7, 1}, 1)) CHECK(g == 1.0);
  CHECK_THROWS_AS(elem_sym_gradient(Vec{1, 2}, 3), InvalidInput);
  CHECK_THROWS_AS(elem_sym_gradient(Vec{1, 2}, 0), InvalidInput);
}

TEST_CASE("gradient matches a finite difference") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto l = random_vec(rng, 2 + trial % 6);
    const int m = 1 + trial % static_cast<int>(l.size());
    const auto g = elem_sym_gradient(l, m);
    for (std::size_t i = 0; i < l.size(); ++i) {
      const double e = 1e-6;
      auto a = l, b = l;
      a[i] += e;
      b[i] -= e;
      const double fd = (elem_sym(a, m) - elem_sym(b, m)) / (2 * e);
      CHECK(g[i] == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("Euler homogeneity") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto l = random_vec(rng, 2 + trial % 7);
    for (int m = 1; m <= static_cast<int>(l.size()); ++m) {
      const auto g = elem_sym_gradient(l, m);
      double lhs = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < l.size(); ++i) lhs += l[i] * g[i];
      Vec abs_l(l.size());
      std::transform(l.begin(), l.end(), abs_l.begin(), [](double x) { return std::abs(x); });
      scale = m * elem_sym(abs_l, m);
      CHECK(std::abs(lhs - m * elem_sym(l, m)) <= 1e-12 * scale + 1e-300);
    }
  }
}

TEST_CASE("cnk") {
  CHECK(cnk(1, 1) == doctest::Approx(binomial(1, 1) / binomial(1, 0)));
  CHECK(cnk(2, 1) == doctest::Approx(binomial(2, 1) / binomial(2, 0)));
  CHECK(cnk(2, 2) == doctest::Approx(binomial(2, 2) / binomial(2, 1)));
  CHECK(cnk(2, 2) == 0.5);
  CHECK_THROWS_AS(cnk(2, 3), InvalidInput);
  CHECK_THROWS_AS(cnk(2, 0), InvalidInput);
}

TEST_CASE("cone membership") {
  CHECK(in_gamma_k(Vec{1, 1, 1}, 3, true));
  CHECK(in_gamma_k(Vec{3, -1}, 1, true));
  CHECK_FALSE(in_gamma_k(Vec{3, -1}, 2, true));
  // boundary point: strict fails, closure surrogate admits it
  CHECK_FALSE(in_gamma_k(Vec{1, 0}, 2, true));
  CHECK(in_gamma_k(Vec{1, 0}, 2, false));
  CHECK(in_gamma_k(Vec{1, -1e-12}, 2, false, 1e-10));
  CHECK(in_gamma_k_scaled(Vec{1e3, -1e-9}, 2, false, 1e-10));
}

TEST_CASE("cone nesting") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5000; ++trial) {
    const auto l = random_vec(rng, 2 + trial % 7);
    for (int k = 2; k <= static_cast<int>(l.size()); ++k) {
      if (in_gamma_k(l, k, true)) CHECK(in_gamma_k(l, k - 1, true));
    }
  }
}

TEST_CASE("polarized sigma square") {
  CHECK(polarized_sigma_square(Vec{1, 2}, 1) == doctest::Approx(5.0));
  CHECK(polarized_sigma_square(Vec{1, 2, 3}, 2) == doctest::Approx(48.0));
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto l = random_vec(rng, 2 + trial % 7);
    for (int m = 1; m <= static_cast<int>(l.size()); ++m) {
      const double lhs = polarized_sigma_square(l, m);
      const double rhs = elem_sym(l, 1) * elem_sym(l, m) - (m + 1) * elem_sym(l, m + 1);
      Vec a(l.size());
      std::transform(l.begin(), l.end(), a.begin(), [](double x) { return std::abs(x); });
      const double scale = elem_sym(a, 1) * elem_sym(a, m) + (m + 1) * elem_sym(a, m + 1);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("Newton gap") {
  CHECK(newton_maclaurin_check(Vec{1, 1, 1}, 1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(newton_maclaurin_check(Vec{1, 2, 3}, 1) == doctest::Approx(1.0 / 36.0));
  CHECK_THROWS_AS(newton_maclaurin_check(Vec{1, -1}, 1), NumericalError);
  CHECK_THROWS_AS(newton_maclaurin_check(Vec{1, 2}, 2), InvalidInput);
}

TEST_CASE("Newton gap is nonnegative for all real vectors and scale free") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> s(0.1, 10.0);
  for (int trial = 0; trial < 20000; ++trial) {
    const auto l = random_vec(rng, 2 + trial % 7);
    const int k = 1 + trial % (static_cast<int>(l.size()) - 1);
    if (std::abs(elem_sym(l, k)) < 1e-6) continue;
    const double gap = newton_maclaurin_check(l, k);
    CHECK(gap >= -1e-12);
    Vec scaled = l;
    const double f = s(rng);
    for (auto& x : scaled) x *= f;
    // rounding in sigma_k is relative to the sum of |monomials| <= |l|_1^k
    double l1 = 0;
    for (double x : l) l1 += std::abs(x);
    const double cond = std::pow(l1, k) / std::abs(elem_sym(l, k));
    const double ratio = std::abs(elem_sym(l, k + 1) * elem_sym(l, k - 1) /
                                  (elem_sym(l, k) * elem_sym(l, k)));
    CHECK(std::abs(newton_maclaurin_check(scaled, k) - gap) <= 1e-13 * (1.0 + ratio) * cond);
  }
}

TEST_CASE("MacLaurin power bound") {
  CHECK(maclaurin_constant(2, 1) == doctest::Approx(0.25));
  CHECK(maclaurin_power_bound(Vec{1, 1}, 1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(maclaurin_power_bound(Vec{1, 2}, 1) == doctest::Approx(0.25));
  CHECK_THROWS_AS(maclaurin_power_bound(Vec{3, -1}, 2), InvalidInput);
  std::mt19937_64 rng(19);
  int tested = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    const auto l = random_vec(rng, 2 + trial % 7);
    const int k = 1 + trial % (static_cast<int>(l.size()) - 1);
    if (!in_gamma_k(l, k, true)) continue;
    ++tested;
    CHECK(maclaurin_power_bound(l, k) >= -1e-12);
  }
  CHECK(tested > 1000);
}

}  // TEST_SUITE
