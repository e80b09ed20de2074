#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coboson/hydrogenic.hpp"
#include "coboson/numeric.hpp"
#include "coboson/profile.hpp"

namespace coboson {

/// Exchange weights lambda_1..lambda_nmax of cobosons sharing one state.
/// Tables built from an actual profile (discrete or hydrogenic) satisfy
///   lambda_1 = 1,
///   lambda_{n+1} <= lambda_n            (power sums of probabilities),
///   lambda_{n+1} lambda_{n-1} >= lambda_n^2   (Cauchy-Schwarz),
/// and these are enforced at construction. Raw lists skip everything except
/// the lambda_1 = 1 normalization so that algebraic identities can be probed
/// with arbitrary coefficients; such tables are marked not profile-derived.
template <class S>
class ExchangeTable {
 public:
  static ExchangeTable from_profile(const ModeProfile<S>& profile, int n_max) {
    if (n_max < 1) throw Error("exchange table needs n_max >= 1");
    std::vector<S> lam;
    lam.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n)
      lam.push_back(lambda_from_profile(profile, n));
    ExchangeTable t(std::move(lam), "profile:" + profile.label(),
                    /*profile_derived=*/true, profile.occupiable_modes());
    t.validate_profile_invariants();
    return t;
  }

  /// Raw coefficient list; lambdas[0] is lambda_1 and must equal 1.
  static ExchangeTable from_raw(std::vector<S> lambdas, std::string source) {
    ExchangeTable t(std::move(lambdas), std::move(source),
                    /*profile_derived=*/false, std::nullopt);
    if (t.n_max() < 1) throw Error("exchange table needs n_max >= 1");
    t.check_unity(t.lambda(1));
    return t;
  }

  /// Precomputed weights that are known to come from a profile (used for the
  /// hydrogenic closed form); enforces the full profile invariants.
  static ExchangeTable from_profile_values(std::vector<S> lambdas,
                                           std::string source) {
    ExchangeTable t(std::move(lambdas), std::move(source),
                    /*profile_derived=*/true, std::nullopt);
    if (t.n_max() < 1) throw Error("exchange table needs n_max >= 1");
    t.validate_profile_invariants();
    return t;
  }

  /// All exchange corrections switched off: lambda_1 = 1, rest zero. The
  /// moment pipeline then reproduces elementary bosons identically.
  static ExchangeTable elementary(int n_max) {
    if (n_max < 1) throw Error("exchange table needs n_max >= 1");
    std::vector<S> lam(static_cast<std::size_t>(n_max), S{0});
    lam[0] = S{1};
    return ExchangeTable(std::move(lam), "elementary",
                         /*profile_derived=*/true, std::nullopt);
  }

  int n_max() const { return static_cast<int>(lam_.size()); }
  const S& lambda(int n) const {
    if (n < 1 || n > n_max())
      throw Error("lambda_" + std::to_string(n) + " outside table (n_max = " +
                  std::to_string(n_max()) + ")");
    return lam_[static_cast<std::size_t>(n - 1)];
  }
  const std::vector<S>& lambdas() const { return lam_; }

  bool profile_derived() const { return profile_derived_; }
  /// Occupiable mode count for discrete profiles; empty for hydrogenic,
  /// elementary and raw tables.
  const std::optional<int>& mode_count() const { return mode_count_; }
  const std::string& source() const { return source_; }

 private:
  ExchangeTable(std::vector<S> lam, std::string source, bool profile_derived,
                std::optional<int> mode_count)
      : lam_(std::move(lam)),
        source_(std::move(source)),
        profile_derived_(profile_derived),
        mode_count_(mode_count) {}

  void check_unity(const S& l1) const {
    if constexpr (is_rational_mode<S>) {
      if (l1 != S{1}) throw Error("lambda_1 = " + format_scalar(l1) + ", expected 1");
    } else {
      if (std::abs(to_double(l1) - 1.0) > kNormalizationTol)
        throw Error("lambda_1 = " + format_scalar(l1) + ", expected 1");
    }
  }

  void validate_profile_invariants() const {
    check_unity(lam_[0]);
    const double tol = is_rational_mode<S> ? 0.0 : 1e-12;
    for (int n = 1; n + 1 <= n_max(); ++n) {
      const S& a = lambda(n);
      const S& b = lambda(n + 1);
      if constexpr (is_rational_mode<S>) {
        if (b > a) throw Error("lambda_" + std::to_string(n + 1) + " exceeds lambda_" +
                               std::to_string(n));
      } else {
        if (to_double(b) > to_double(a) * (1.0 + tol))
          throw Error("lambda_" + std::to_string(n + 1) + " exceeds lambda_" +
                      std::to_string(n) + " (profile not representable)");
      }
    }
    for (int n = 2; n + 1 <= n_max(); ++n) {
      const S& lo = lambda(n - 1);
      const S& mid = lambda(n);
      const S& hi = lambda(n + 1);
      if constexpr (is_rational_mode<S>) {
        if (hi * lo < mid * mid)
          throw Error("lambda list is not log-convex at n = " + std::to_string(n));
      } else {
        const double lhs = to_double(hi) * to_double(lo);
        const double rhs = to_double(mid) * to_double(mid);
        if (lhs < rhs * (1.0 - 1e-12) - 1e-300)
          throw Error("lambda list is not log-convex at n = " + std::to_string(n));
      }
    }
  }

  std::vector<S> lam_;
  std::string source_;
  bool profile_derived_ = false;
  std::optional<int> mode_count_;
};

/// Exchange table of a 3D hydrogen-like coboson (closed form, float only).
/// The closed form describes a genuine momentum profile only while the
/// weights decrease with n, which bounds a_B/L from above; larger ratios are
/// rejected by the profile invariants.
inline ExchangeTable<double> hydrogenic_exchange_table(
    const HydrogenicProfile& profile, int n_max) {
  if (n_max < 1) throw Error("exchange table needs n_max >= 1");
  std::vector<double> lam;
  lam.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n)
    lam.push_back(hydrogenic_lambda(n, profile.a_over_L));
  return ExchangeTable<double>::from_profile_values(
      std::move(lam), "hydrogenic:" + format_double(profile.a_over_L));
}

}  // namespace coboson
