#pragma once

#include <algorithm>
#include <optional>
#include <utility>

#include "coboson/norm_table.hpp"
#include "coboson/numeric.hpp"

namespace coboson {

/// Statistical signature of the N-coboson state: exact moments of the number
/// operator, the Mandel Q parameter, the two-particle coincidence ratio g2,
/// the guessed approximations they are compared against, and the elementary
/// boson baselines. All entries share one numeric mode.
template <class S>
struct MomentReport {
  int n = 0;
  std::optional<double> eta;  // N (a_B/L)^3, hydrogenic runs only

  S mean_n{};       // <n>_N
  S mean_n2{};      // <n^2>_N
  S variance{};     // <n^2>_N - <n>_N^2
  S mandel_q{};     // variance/mean - 1
  S coincidence{};  // <B^+2 B^2>_N
  S g2{};           // coincidence / mean^2
  S r_term{};       // two-exchange remainder entering the coincidence moment
  S d00_moment{};   // <B^+ D00 B>_N

  S approx_q{};         // -1 + (N-1)^2 (lambda_3 - lambda_2^2)
  S approx_g2_a{};      // (1-1/N)(1+(N-1) lambda_2)
  S approx_g2_b{};      // 1 + (-1+(N-1) lambda_2)/N
  S approx_g2_large{};  // (1-1/N)(1+lambda_2)

  S baseline_g2{};  // 1 - 1/N
  S baseline_q{};   // -1

  /// Float mode: absolute noise estimate on the variance, propagated from
  /// the norm-table error bounds. A variance smaller than this straddles
  /// zero. Zero in rational mode.
  double variance_abs_error = 0.0;
};

// --- exact moments -------------------------------------------------------

/// <n>_N = N + (N-1) Delta_N^(1); always in (0, N].
template <class S>
S mean_n(const NormTable<S>& table, int n) {
  if (n < 1) throw Error("mean_n needs N >= 1");
  return S(n) + S(n - 1) * table.delta(n, 1);
}

/// <n^2>_N = N^2 + (N^2-1) Delta_N^(1) + N(N-1)^2/(N+1) Delta_N^(2).
template <class S>
S mean_n2(const NormTable<S>& table, int n) {
  if (n < 1) throw Error("mean_n2 needs N >= 1");
  const long long nn = n;
  const S d1 = table.delta(n, 1);
  const S d2 = table.delta(n, 2);
  return S(nn * nn) + S(nn * nn - 1) * d1 +
         S(nn * (nn - 1) * (nn - 1)) * d2 / S(nn + 1);
}

/// Number variance in the compact two-difference form
///   (N-1)^2 [ -Delta^(1)(1+Delta^(1)) + N/(N+1) Delta^(2) ],
/// identical to mean_n2 - mean_n^2.
template <class S>
S variance(const NormTable<S>& table, int n) {
  if (n < 1) throw Error("variance needs N >= 1");
  const long long nn = n;
  const S d1 = table.delta(n, 1);
  const S d2 = table.delta(n, 2);
  const S bracket = -d1 * (S(1) + d1) + S(nn) * d2 / S(nn + 1);
  return S((nn - 1) * (nn - 1)) * bracket;
}

/// Mandel parameter Q_N = variance/mean - 1; bounded below by -1.
template <class S>
S mandel_q(const NormTable<S>& table, int n) {
  return variance(table, n) / mean_n(table, n) - S(1);
}

/// Remainder R = Delta^(2)/(N(N+1)) - (lambda_2 + Delta^(1))/(N(N-1)).
/// Tends to lambda_2^2 in the large-sample limit.
template <class S>
S r_term(const NormTable<S>& table, const S& lambda2, int n) {
  if (n < 2) throw Error("r_term needs N >= 2");
  const long long nn = n;
  const S d1 = table.delta(n, 1);
  const S d2 = table.delta(n, 2);
  return d2 / S(nn * (nn + 1)) - (lambda2 + d1) / S(nn * (nn - 1));
}

/// <B^+ D00 B>_N = -2 [lambda_2 + Delta^(1) + (N-1)^2/(N+1) Delta^(2)].
template <class S>
S d00_moment(const NormTable<S>& table, const S& lambda2, int n) {
  if (n < 1) throw Error("d00_moment needs N >= 1");
  const long long nn = n;
  const S d1 = table.delta(n, 1);
  const S d2 = table.delta(n, 2);
  return S(-2) * (lambda2 + d1 + S((nn - 1) * (nn - 1)) * d2 / S(nn + 1));
}

/// <B^+2 B^2>_N = N(N-1) [1 + Delta^(1) + (N-3)/(N+1) Delta^(2) + 2R].
template <class S>
S coincidence_moment(const NormTable<S>& table, const S& lambda2, int n) {
  if (n < 2) throw Error("coincidence_moment needs N >= 2");
  const long long nn = n;
  const S d1 = table.delta(n, 1);
  const S d2 = table.delta(n, 2);
  const S r = r_term(table, lambda2, n);
  const S bracket = S(1) + d1 + S(nn - 3) * d2 / S(nn + 1) + S(2) * r;
  return S(nn * (nn - 1)) * bracket;
}

/// g2_N = <B^+2 B^2>_N / <n>_N^2.
template <class S>
S g2(const NormTable<S>& table, const S& lambda2, int n) {
  const S mean = mean_n(table, n);
  return coincidence_moment(table, lambda2, n) / (mean * mean);
}

// --- closed forms, guesses and baselines ---------------------------------

/// Exact two-coboson coincidence ratio,
///   g2_2 = (1/2) (1-lambda_2)^3 / (1-2 lambda_2+lambda_3)^2.
/// Equals g2(table, 2) for the same exchange weights.
template <class S>
S g2_two(const S& lambda2, const S& lambda3) {
  const S den = S(1) - S(2) * lambda2 + lambda3;
  if (den == S{0}) throw Error("g2_two denominator vanishes");
  const S one_minus = S(1) - lambda2;
  return one_minus * one_minus * one_minus / (S(2) * den * den);
}

/// Small-density guess Q_N ~= -1 + (N-1)^2 (lambda_3 - lambda_2^2).
template <class S>
S approx_q(const S& lambda2, const S& lambda3, long n) {
  if (n < 1) throw Error("approx_q needs N >= 1");
  const long long m = n - 1;
  return S(-1) + S(m * m) * (lambda3 - lambda2 * lambda2);
}

enum class G2Approx {
  a,             // (1-1/N)(1+(N-1) lambda_2): crossover guess
  b,             // 1+(-1+(N-1) lambda_2)/N: keeps anti-bunching at all sizes
  large_sample,  // (1-1/N)(1+lambda_2)
};

template <class S>
S approx_g2(const S& lambda2, long n, G2Approx variant) {
  if (n < 1) throw Error("approx_g2 needs N >= 1");
  const S ratio = S(n - 1) / S(n);  // 1 - 1/N
  switch (variant) {
    case G2Approx::a:
      return ratio * (S(1) + S(n - 1) * lambda2);
    case G2Approx::b:
      return S(1) + (S(-1) + S(n - 1) * lambda2) / S(n);
    case G2Approx::large_sample:
      return ratio * (S(1) + lambda2);
  }
  throw Error("unknown g2 approximation variant");
}

/// Elementary-boson values (g2, Q) = (1 - 1/N, -1).
template <class S>
std::pair<S, S> baselines(long n) {
  if (n < 1) throw Error("baselines need N >= 1");
  return {S(n - 1) / S(n), S(-1)};
}

// --- report assembly ------------------------------------------------------

/// Evaluates the full signature at one N. Throws BlockedStateError for
/// Pauli-blocked states and PrecisionDomainError past the reliable float
/// range.
template <class S>
MomentReport<S> moment_report(const NormTable<S>& table, int n,
                              std::optional<double> eta = std::nullopt) {
  if (n < 1) throw Error("moment_report needs N >= 1");
  const S& lam2 = table.lambdas().lambda(2);
  const S& lam3 = table.lambdas().lambda(3);

  MomentReport<S> rep;
  rep.n = n;
  rep.eta = eta;
  rep.mean_n = mean_n(table, n);
  rep.mean_n2 = mean_n2(table, n);
  rep.variance = variance(table, n);
  rep.mandel_q = rep.variance / rep.mean_n - S(1);
  rep.d00_moment = d00_moment(table, lam2, n);
  if (n >= 2) {
    rep.r_term = r_term(table, lam2, n);
    rep.coincidence = coincidence_moment(table, lam2, n);
  } else {
    // B^2 annihilates a one-coboson state.
    rep.r_term = S(0);
    rep.coincidence = S(0);
  }
  rep.g2 = rep.coincidence / (rep.mean_n * rep.mean_n);

  rep.approx_q = approx_q(lam2, lam3, n);
  rep.approx_g2_a = approx_g2(lam2, n, G2Approx::a);
  rep.approx_g2_b = approx_g2(lam2, n, G2Approx::b);
  rep.approx_g2_large = approx_g2(lam2, n, G2Approx::large_sample);
  auto base = baselines<S>(n);
  rep.baseline_g2 = base.first;
  rep.baseline_q = base.second;

  if constexpr (!is_rational_mode<S>) {
    // Both differences are bounded by 1 in magnitude, so the dominant noise
    // on the variance bracket is a few units of the table's relative error.
    // Blocked entries carry zero error, hence the max over the inputs used.
    const double rel =
        std::max({table.relative_error(n), table.relative_error(n + 1),
                  table.relative_error(n + 2)});
    const double d1 = std::abs(to_double(table.delta(n, 1)));
    const double nn = static_cast<double>(n);
    rep.variance_abs_error =
        (nn - 1) * (nn - 1) * rel * (3.0 * (1.0 + 2.0 * d1) + 3.0);
  }
  return rep;
}

}  // namespace coboson
