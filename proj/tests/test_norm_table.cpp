#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "coboson/exchange.hpp"
#include "coboson/fock.hpp"
#include "coboson/norm_table.hpp"

using namespace coboson;

namespace {

Rational random_unit_fraction(std::mt19937_64& rng) {
  const int den = 2 + static_cast<int>(rng() % 30);
  const int num = 1 + static_cast<int>(rng() % den);
  return Rational(num, den + num);  // keeps values comfortably inside (0, 1)
}

}  // namespace

TEST_SUITE_BEGIN("norm_recursion");

TEST_CASE("elementary limit collapses to F_N = 1") {
  const auto lam = ExchangeTable<Rational>::elementary(14);
  const auto table = build_norm_table(lam, 12);
  for (int n = 0; n <= 14; ++n) CHECK(table.f(n) == Rational(1));
  CHECK(table.delta(5, 1) == Rational(0));
  CHECK(table.delta(5, 2) == Rational(0));

  const auto flam = ExchangeTable<double>::elementary(14);
  const auto ftable = build_norm_table(flam, 12);
  for (int n = 0; n <= 14; ++n) CHECK(ftable.f(n) == 1.0);
}

TEST_CASE("low orders reproduce the polynomial expansions") {
  // F_2 = 1 - l2, F_3 = 1 - 3 l2 + 2 l3, F_4 = 1 - 6 l2 + 8 l3 + 3 l2^2 - 6 l4
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const Rational l2 = random_unit_fraction(rng);
    const Rational l3 = random_unit_fraction(rng);
    const Rational l4 = random_unit_fraction(rng);
    const Rational l5 = random_unit_fraction(rng);
    const Rational l6 = random_unit_fraction(rng);
    const auto lam = ExchangeTable<Rational>::from_raw(
        {Rational(1), l2, l3, l4, l5, l6}, "placeholder");
    const auto table = build_norm_table(lam, 4);
    CHECK(table.f(2) == 1 - l2);
    CHECK(table.f(3) == 1 - 3 * l2 + 2 * l3);
    CHECK(table.f(4) == 1 - 6 * l2 + 8 * l3 + 3 * l2 * l2 - 6 * l4);
  }
}

TEST_CASE("uniform four-mode values") {
  const auto lam = ExchangeTable<Rational>::from_profile(
      uniform_profile<Rational>(4), 9);
  const auto table = build_norm_table(lam, 7);
  CHECK(table.f(2) == Rational(3, 4));
  CHECK(table.f(3) == Rational(3, 8));
  CHECK(table.f(4) == Rational(3, 32));
  CHECK(table.f(5) == Rational(0));
  CHECK(table.f(9) == Rational(0));
  CHECK(table.delta(2, 1) == Rational(-1, 2));
  CHECK(table.delta(2, 2) == Rational(-3, 8));
  CHECK_FALSE(table.monotonicity_violated());
}

TEST_CASE("recursion equals the elementary symmetric polynomials") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const int modes = 1 + static_cast<int>(rng() % 10);
    std::vector<Rational> w;
    for (int k = 0; k < modes; ++k)
      w.emplace_back(1 + static_cast<int>(rng() % 16));
    const auto prof = ModeProfile<Rational>::from_weights(std::move(w), "r", true);
    const auto lam = ExchangeTable<Rational>::from_profile(prof, modes + 4);
    const auto table = build_norm_table(lam, modes + 2);
    Rational nfact{1};
    for (int n = 0; n <= modes + 2; ++n) {
      if (n > 1) nfact *= n;
      CHECK(table.f(n) == nfact * elementary_symmetric(prof, n));
      if (n > modes) CHECK(table.f(n) == Rational(0));
      if (n >= 1) CHECK(table.f(n) <= table.f(n - 1));
    }
    for (int n = 1; n <= modes; ++n) {
      CHECK(table.delta(n, 1) <= Rational(0));
      CHECK(table.delta(n, 2) <= Rational(0));
    }
    CHECK_FALSE(table.monotonicity_violated());
  }
}

TEST_CASE("blocked states raise a typed error") {
  const auto lam = ExchangeTable<Rational>::from_profile(
      uniform_profile<Rational>(3), 8);
  const auto table = build_norm_table(lam, 6);
  CHECK(table.blocked(4));
  CHECK_FALSE(table.blocked(3));
  CHECK_THROWS_AS(table.delta(4, 1), BlockedStateError);
  CHECK(table.delta(3, 1) == Rational(-1));  // F_4 = 0 enters the numerator

  // float tables hold the blocked zeros exactly
  const auto flam = ExchangeTable<double>::from_profile(
      uniform_profile<double>(5), 10);
  const auto ftable = build_norm_table(flam, 8);
  CHECK(ftable.f(6) == 0.0);
  CHECK(ftable.f(10) == 0.0);
  CHECK_THROWS_AS(ftable.delta(6, 1), BlockedStateError);
}

TEST_CASE("raw lambda lists may break monotonicity and are reported") {
  const auto lam = ExchangeTable<Rational>::from_raw(
      {Rational(1), Rational(0), Rational(1, 2)}, "hand-edited");
  const auto table = build_norm_table(lam, 1);
  CHECK(table.f(3) == Rational(2));  // 1 + 2*l3
  CHECK(table.monotonicity_violated());
}

TEST_CASE("missing lambda entries are rejected unless truncation is requested") {
  const auto lam = hydrogenic_exchange_table(HydrogenicProfile(0.1), 6);
  CHECK_THROWS_AS(build_norm_table(lam, 10), Error);
  const auto truncated = build_norm_table(lam, 10, /*allow_truncated=*/true);
  CHECK(truncated.f(3) > 0.0);
}

TEST_CASE("float pipeline stays accurate in the small-density regime") {
  // difference ratios against their leading-order expansions
  for (const double a : {1e-2, 1e-3}) {
    const auto lam = hydrogenic_exchange_table(HydrogenicProfile(a), 16);
    const auto table = build_norm_table(lam, 12);
    const double l2 = lam.lambda(2);
    const double l3 = lam.lambda(3);
    for (const int n : {5, 10}) {
      const double d1 = table.delta(n, 1);
      const double d2 = table.delta(n, 2);
      const double d1_leading = -n * l2 + n * (n - 1.0) * (l3 - l2 * l2);
      const double d2_leading = -(n + 1.0) * l2 + (n + 1.0) * n * l3;
      CHECK(d1 / d1_leading == doctest::Approx(1.0).epsilon(1e-4));
      CHECK(d2 / d2_leading == doctest::Approx(1.0).epsilon(1e-4));
    }
    CHECK(table.relative_error(12) < 1e-10);
    CHECK(table.first_unreliable() > table.top());
  }
}

TEST_CASE("float noise tracking cuts the unreliable tail") {
  // eta grows linearly with N here, so the alternating sum eventually loses
  // everything to cancellation; queries past the cut must throw.
  const auto lam = hydrogenic_exchange_table(HydrogenicProfile(0.01), 3002);
  const auto table = build_norm_table(lam, 3000);
  const int cut = table.first_unreliable();
  REQUIRE(cut <= 3000);
  CHECK(cut > 200);
  CHECK_NOTHROW(table.f(cut - 1));
  CHECK_THROWS_AS(table.f(cut), PrecisionDomainError);
  CHECK_THROWS_AS(table.delta(cut - 1, 1), PrecisionDomainError);
  CHECK(table.relative_error(cut - 1) <= 1.0);
  // noise estimates only ever grow
  for (int n = 3; n < cut; ++n)
    CHECK(table.relative_error(n) * table.f(n) >=
          table.relative_error(n - 1) * table.f(n - 1) * 0.999);
}

TEST_CASE("float discrete recursion lands on the blocked zeros") {
  // same weights as uniform:3 but passed raw, so the builder cannot use the
  // mode count and has to watch F_4 emerge from cancellation
  const auto raw = ExchangeTable<double>::from_raw(
      {1.0, 1.0 / 3, 1.0 / 9, 1.0 / 27, 1.0 / 81, 1.0 / 243}, "uniform3-raw");
  const auto table = build_norm_table(raw, 4);
  bool clamped_or_cut = table.first_unreliable() <= 6;
  double f4 = 1.0;
  try {
    f4 = table.f(4);
  } catch (const PrecisionDomainError&) {
    f4 = 0.0;
  }
  CHECK(std::abs(f4) < 1e-14);
  CHECK((clamped_or_cut || std::abs(f4) < 1e-14));
}

TEST_CASE("builder meets the large sweep time budget") {
  const auto start = std::chrono::steady_clock::now();
  const auto lam = hydrogenic_exchange_table(HydrogenicProfile(0.01), 10002);
  const auto table = build_norm_table(lam, 10000);
  const auto elapsed = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  CHECK(table.f(2) > 0.0);
  CHECK(elapsed < 5.0);
}

TEST_SUITE_END();
