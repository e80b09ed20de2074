#include <doctest.h>

#include <memory>
#include <random>

#include "coboson/exchange.hpp"
#include "coboson/fock.hpp"
#include "coboson/norm_table.hpp"

using namespace coboson;

namespace {

std::shared_ptr<const ModeProfile<Rational>> shared_uniform(int modes) {
  return std::make_shared<const ModeProfile<Rational>>(
      uniform_profile<Rational>(modes));
}

std::shared_ptr<const ModeProfile<Rational>> shared_skew() {
  return std::make_shared<const ModeProfile<Rational>>(
      ModeProfile<Rational>::from_weights(
          {Rational(1, 2), Rational(1, 4), Rational(1, 4)}, "skew", false));
}

// pseudo-random states reached through physical operator strings
FockState random_state(std::shared_ptr<const ModeProfile<Rational>> profile,
                       std::mt19937_64& rng) {
  FockState state = FockState::vacuum(profile);
  const int raises = 1 + static_cast<int>(rng() % profile->mode_count());
  for (int i = 0; i < raises; ++i) state = apply_b0_dagger(state);
  for (int ops = static_cast<int>(rng() % 3); ops > 0; --ops) {
    switch (rng() % 4) {
      case 0: state = apply_b0(state); break;
      case 1: state = apply_d00(state); break;
      case 2: state = apply_l2_dagger(state); break;
      default: state += apply_l2(state); break;
    }
  }
  return state;
}

long long binomial(int m, int k) {
  if (k < 0 || k > m) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (m - k + i) / i;
  return r;
}

}  // namespace

TEST_SUITE_BEGIN("fock_oracle");

TEST_CASE("creation ladder on the paired basis") {
  auto prof = shared_uniform(2);
  const FockState vac = FockState::vacuum(prof);
  CHECK(inner(vac, vac) == Rational(1));

  const FockState psi1 = apply_b0_dagger(vac);
  CHECK(psi1.configuration_count() == 2);
  CHECK(inner(psi1, psi1) == Rational(1));  // lambda_1

  // two uniform modes leave a single doubly-occupied configuration
  const FockState psi2 = apply_b0_dagger(psi1);
  CHECK(psi2.configuration_count() == 1);
  CHECK(psi2.rational_part(0b11) == Rational(2));
  CHECK(inner(psi2, psi2) == Rational(1));

  // Pauli blocking: M+1 applications annihilate everything
  const FockState psi3 = apply_b0_dagger(psi2);
  CHECK(psi3.is_zero());
}

TEST_CASE("annihilation ladder") {
  auto prof = shared_uniform(2);
  const FockState vac = FockState::vacuum(prof);
  CHECK(apply_b0(vac).is_zero());

  const FockState psi2 = coboson_state(prof, 2);
  const FockState lowered = apply_b0(psi2);
  // q = 2 * p_k = 1 on each singleton: the state (1/sqrt2)(|1> + |2>)
  CHECK(lowered.rational_part(0b01) == Rational(1));
  CHECK(lowered.rational_part(0b10) == Rational(1));
  CHECK(inner(lowered, lowered) == Rational(1));
}

TEST_CASE("adjointness of every operator pair") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    auto profiles = sample_rational_profiles(1, 2, 5, 1000 + trial);
    auto prof =
        std::make_shared<const ModeProfile<Rational>>(std::move(profiles[0]));
    const FockState a = random_state(prof, rng);
    const FockState b = random_state(prof, rng);
    CHECK(inner(a, apply_b0(b)) == inner(apply_b0_dagger(a), b));
    CHECK(inner(a, apply_d00(b)) == inner(apply_d00(a), b));
    CHECK(inner(a, apply_l2_dagger(b)) == inner(apply_l2(a), b));
    CHECK(inner(a, apply_l3_dagger(b)) == inner(apply_l3(a), b));
  }
}

TEST_CASE("commutator realization on every basis configuration") {
  auto prof = shared_skew();
  const int m = prof->mode_count();
  for (FockState::Subset s = 0; s < (1u << m); ++s) {
    const FockState basis = FockState::configuration(prof, s);
    // ([B0, B0+] + D00) |s> = |s>
    FockState lhs = apply_b0(apply_b0_dagger(basis));
    lhs -= apply_b0_dagger(apply_b0(basis));
    lhs += apply_d00(basis);
    CHECK(inner(lhs - basis, lhs - basis) == Rational(0));
  }
}

TEST_CASE("deviation operator annihilates the vacuum") {
  auto prof = shared_skew();
  CHECK(apply_d00(FockState::vacuum(prof)).is_zero());

  // single mode pair, uniform two modes: D00 |{k}> = 2 p_k |{k}>
  auto uni = shared_uniform(2);
  const FockState one = FockState::configuration(uni, 0b01);
  const FockState d = apply_d00(one);
  CHECK(d.configuration_count() == 1);
  CHECK(d.rational_part(0b01) == Rational(1));  // 2 * 1/2
}

TEST_CASE("exchange weights emerge from operator chains") {
  auto prof = shared_skew();
  const Rational lam2 = lambda_from_profile(*prof, 2);
  const Rational lam3 = lambda_from_profile(*prof, 3);

  const FockState vac = FockState::vacuum(prof);
  const FockState psi1 = apply_b0_dagger(vac);
  const FockState l2v = apply_l2_dagger(vac);
  // L2+|v> = sum_k p_k c_k |{k}>
  for (int k = 0; k < prof->mode_count(); ++k)
    CHECK(l2v.rational_part(1u << k) ==
          prof->probabilities()[static_cast<std::size_t>(k)]);
  CHECK(inner(psi1, l2v) == lam2);
  CHECK(inner(l2v, l2v) == lam3);
  CHECK(inner(apply_l3_dagger(vac), psi1) == lam3);

  // <psi_2|L2+|psi_1> = 2 (lambda_2 - lambda_3)
  const FockState psi2 = apply_b0_dagger(psi1);
  CHECK(inner(psi2, apply_l2_dagger(psi1)) == 2 * (lam2 - lam3));
}

TEST_CASE("norm route equals the symmetric polynomial route") {
  CHECK(oracle_f(uniform_profile<Rational>(4), 0) == Rational(1));
  CHECK(oracle_f(uniform_profile<Rational>(4), 1) == Rational(1));
  CHECK(oracle_f(uniform_profile<Rational>(4), 3) == Rational(3, 8));
  CHECK(oracle_f(uniform_profile<Rational>(4), 5) == Rational(0));
  CHECK(oracle_f(*shared_skew(), 3) == Rational(3, 16));
}

TEST_CASE("state dimension is the binomial count") {
  auto prof = shared_uniform(6);
  for (int n = 0; n <= 6; ++n)
    CHECK(coboson_state(prof, n).configuration_count() ==
          static_cast<std::size_t>(binomial(6, n)));

  // zero-probability modes do not contribute configurations
  auto padded = std::make_shared<const ModeProfile<Rational>>(
      ModeProfile<Rational>::from_weights(
          {Rational(1), Rational(0), Rational(1), Rational(2)}, "padded", true));
  CHECK(coboson_state(padded, 2).configuration_count() ==
        static_cast<std::size_t>(binomial(3, 2)));
}

TEST_CASE("direct moment measurements") {
  {
    const auto rep = oracle_report(uniform_profile<Rational>(2), 2);
    CHECK(rep.mean_n == Rational(1));
    CHECK(rep.variance == Rational(0));
    CHECK(rep.mandel_q == Rational(-1));
    CHECK(rep.g2 == Rational(1));
  }
  {
    const auto rep = oracle_report(uniform_profile<Rational>(4), 2);
    CHECK(rep.mean_n == Rational(3, 2));
    CHECK(rep.mean_n2 == Rational(9, 4));
    CHECK(rep.variance == Rational(0));
    CHECK(rep.mandel_q == Rational(-1));
    CHECK(rep.coincidence == Rational(3, 2));
    CHECK(rep.g2 == Rational(2, 3));
    CHECK(rep.d00_moment == Rational(3, 4));
  }
  {
    const auto rep = oracle_report(*shared_skew(), 2);
    CHECK(rep.mandel_q == Rational(-129, 130));
    CHECK(rep.g2 == Rational(125, 169));
    CHECK(rep.r_term == Rational(9, 80));
  }
  CHECK_THROWS_AS(oracle_report(uniform_profile<Rational>(3), 4),
                  BlockedStateError);
}

TEST_CASE("oracle equals the closed-form pipeline everywhere") {
  const auto profiles = sample_rational_profiles(10, 2, 6, 77);
  for (const auto& prof : profiles) {
    const int modes = prof.mode_count();
    const auto table = build_norm_table(
        ExchangeTable<Rational>::from_profile(prof, modes + 4), modes + 2);
    for (int n = 2; n <= modes; ++n) {
      const auto closed = moment_report(table, n);
      const auto direct = oracle_report(prof, n);
      CHECK(closed.mean_n == direct.mean_n);
      CHECK(closed.mean_n2 == direct.mean_n2);
      CHECK(closed.variance == direct.variance);
      CHECK(closed.mandel_q == direct.mandel_q);
      CHECK(closed.coincidence == direct.coincidence);
      CHECK(closed.g2 == direct.g2);
      CHECK(closed.d00_moment == direct.d00_moment);
      CHECK(closed.r_term == direct.r_term);
    }
  }
}

TEST_CASE("identity suite passes with zero residual") {
  for (const int modes : {4, 6}) {
    const auto report = check_identities(uniform_profile<Rational>(modes), modes);
    CHECK(report.all_pass());
    for (const auto& check : report.checks) {
      CHECK(check.pass);
      CHECK(check.residual == "0/1");
    }
  }
  const auto profiles = sample_rational_profiles(10, 3, 8, 4242);
  for (const auto& prof : profiles)
    CHECK(check_identities(prof, prof.mode_count()).all_pass());
}

TEST_CASE("remainder equals the squared weight exactly for uniform profiles") {
  for (const int modes : {4, 8, 12}) {
    const auto prof = uniform_profile<Rational>(modes);
    const auto rep = oracle_report(prof, 2);
    const Rational lam2 = lambda_from_profile(prof, 2);
    CHECK(rep.r_term == lam2 * lam2);
  }
}

TEST_CASE("oracle guardrails") {
  CHECK_THROWS_AS(FockState::vacuum(std::make_shared<const ModeProfile<Rational>>(
                      uniform_profile<Rational>(25))),
                  Error);
  CHECK_THROWS_AS(coboson_state(shared_uniform(3), 4), Error);
  CHECK_THROWS_AS(check_identities(uniform_profile<Rational>(4), 5), Error);
  CHECK_THROWS_AS(check_identities(uniform_profile<Rational>(4), 0), Error);

  auto a = shared_uniform(2);
  auto b = shared_uniform(3);
  CHECK_THROWS_AS(inner(FockState::vacuum(a), FockState::vacuum(b)), Error);
  CHECK_THROWS_AS(FockState::configuration(a, 0b100), Error);
}

TEST_CASE("profile sampling is deterministic") {
  const auto first = sample_rational_profiles(5, 2, 8, 42);
  const auto second = sample_rational_profiles(5, 2, 8, 42);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i)
    CHECK(first[i].probabilities() == second[i].probabilities());
  const auto other = sample_rational_profiles(5, 2, 8, 43);
  bool differs = false;
  for (std::size_t i = 0; i < first.size(); ++i)
    differs = differs || !(first[i].probabilities() == other[i].probabilities());
  CHECK(differs);
}

TEST_SUITE_END();
