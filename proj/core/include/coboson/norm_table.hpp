#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "coboson/exchange.hpp"
#include "coboson/numeric.hpp"

namespace coboson {

/// Normalization factors F_0..F_{n_max+2} of the N-coboson states, obtained
/// from the alternating recursion
///   F_N = sum_{n>=1} (-1)^(n-1) (N-1)!/(N-n)! lambda_n F_{N-n},
/// which is Newton's identity linking the exchange power sums to the
/// elementary symmetric polynomials of the mode probabilities.
///
/// Float-mode cancellation policy: the alternating sum loses digits as the
/// density grows. The builder accumulates with Neumaier summation and carries
/// an absolute noise bound through the recursion; once the bound reaches
/// |F_N| (or F underflows), the table is cut there and any query touching the
/// unreliable range raises PrecisionDomainError instead of returning noise.
/// A computed F_N that dips negative inside its own noise band is clamped to
/// zero and flagged. A genuine negative (beyond the band) means the weight
/// list is not realizable as a profile: for profile-derived tables this is
/// where an idealized closed form runs out of validity and the table is cut;
/// for raw hand-edited lists it is a hard error, since F_N is a norm.
template <class S>
class NormTable {
 public:
  /// Largest N for which moments may be requested (queries need F_{N+2}).
  int n_max() const { return n_max_; }
  /// Index of the last table entry, n_max + 2.
  int top() const { return n_max_ + 2; }

  const S& f(int n) const {
    check_range(n);
    if constexpr (!is_rational_mode<S>) {
      if (n >= first_unreliable_)
        throw PrecisionDomainError(precision_message(n));
    }
    return f_[static_cast<std::size_t>(n)];
  }

  /// Difference ratio (F_{N+n} - F_{N+n-1}) / F_N, n in {1, 2}; never
  /// positive for profile-derived tables.
  S delta(int n_particles, int order) const {
    if (order < 1 || order > 2) throw Error("delta order must be 1 or 2");
    if (n_particles < 1) throw Error("delta needs N >= 1");
    check_range(n_particles + order);
    if constexpr (!is_rational_mode<S>) {
      if (n_particles + order >= first_unreliable_)
        throw PrecisionDomainError(precision_message(n_particles + order));
    }
    const S& base = f_[static_cast<std::size_t>(n_particles)];
    if (base == S{0})
      throw BlockedStateError("state with N = " + std::to_string(n_particles) +
                              " cobosons is Pauli-blocked (F_N = 0)");
    return (f_[static_cast<std::size_t>(n_particles + order)] -
            f_[static_cast<std::size_t>(n_particles + order - 1)]) /
           base;
  }

  const ExchangeTable<S>& lambdas() const { return lambdas_; }
  const std::optional<int>& mode_count() const { return lambdas_.mode_count(); }

  /// True when F_N vanishes because more cobosons were requested than there
  /// are occupiable modes.
  bool blocked(int n) const {
    check_range(n);
    return mode_count() && n > *mode_count();
  }

  /// First index whose value is dominated by rounding noise; top()+1 when the
  /// whole table is sound. Always top()+1 in rational mode.
  int first_unreliable() const { return first_unreliable_; }
  /// Estimated relative error of F_n accumulated by the recursion.
  double relative_error(int n) const {
    check_range(n);
    if constexpr (is_rational_mode<S>) return 0.0;
    return rel_err_[static_cast<std::size_t>(n)];
  }
  /// Entries clamped to zero because they were negative inside their noise
  /// band.
  bool clamped(int n) const {
    check_range(n);
    if constexpr (is_rational_mode<S>) return false;
    return clamped_[static_cast<std::size_t>(n)] != 0;
  }
  /// Set when F_{N+1} > F_N was observed. Only possible for raw lambda lists
  /// (reported, not thrown); profile-derived tables are monotone.
  bool monotonicity_violated() const { return monotone_violation_; }

  template <class T>
  friend NormTable<T> build_norm_table(const ExchangeTable<T>& lambdas,
                                       int n_max, bool allow_truncated);

 private:
  explicit NormTable(ExchangeTable<S> lambdas, int n_max)
      : lambdas_(std::move(lambdas)), n_max_(n_max) {}

  void check_range(int n) const {
    if (n < 0 || n > top())
      throw Error("F_" + std::to_string(n) + " outside table (top = " +
                  std::to_string(top()) + ")");
  }

  std::string precision_message(int n) const {
    return "F_" + std::to_string(n) +
           " lost to float cancellation; last reliable index is " +
           std::to_string(first_unreliable_ - 1) +
           " (rebuild in rational mode or lower the density)";
  }

  ExchangeTable<S> lambdas_;
  int n_max_ = 0;
  std::vector<S> f_;
  std::vector<double> rel_err_;   // float mode only
  std::vector<char> clamped_;     // float mode only
  int first_unreliable_ = 0;
  bool monotone_violation_ = false;
};

/// Runs the recursion up to F_{n_max+2}. The exchange table must cover
/// lambda_1..lambda_{n_max+2}; pass allow_truncated to treat missing tail
/// weights as zero (performance experiments only -- the result is no longer
/// the exact recursion).
template <class S>
NormTable<S> build_norm_table(const ExchangeTable<S>& lambdas, int n_max,
                              bool allow_truncated = false) {
  if (n_max < 1) throw Error("norm table needs n_max >= 1");
  const int top = n_max + 2;
  if (!allow_truncated && lambdas.n_max() < top)
    throw Error("exchange table covers lambda_1..lambda_" +
                std::to_string(lambdas.n_max()) + " but the recursion needs " +
                std::to_string(top));

  NormTable<S> table(lambdas, n_max);
  auto& f = table.f_;
  f.assign(static_cast<std::size_t>(top) + 1, S{0});
  f[0] = S{1};
  if (top >= 1) f[1] = S{1};
  table.first_unreliable_ = top + 1;
  const int lam_avail = lambdas.n_max();

  if constexpr (is_rational_mode<S>) {
    // Everything past the last nonzero weight contributes nothing, and the
    // factorial coefficients get expensive fast; cap the inner loop there.
    int last_nonzero = 1;
    for (int n = lam_avail; n >= 1; --n) {
      if (lambdas.lambda(n) != 0) {
        last_nonzero = n;
        break;
      }
    }
    for (int N = 2; N <= top; ++N) {
      Rational acc{0};
      Rational coeff{1};  // (N-1)!/(N-n)! built incrementally
      const int n_hi = std::min(N, last_nonzero);
      for (int n = 1; n <= n_hi; ++n) {
        if (n > 1) coeff *= N - n + 1;
        const Rational& lam = lambdas.lambda(n);
        if (lam == 0) continue;
        const Rational term = coeff * lam * f[static_cast<std::size_t>(N - n)];
        if (n % 2 == 1) {
          acc += term;
        } else {
          acc -= term;
        }
      }
      f[static_cast<std::size_t>(N)] = acc;
      if (acc > f[static_cast<std::size_t>(N - 1)])
        table.monotone_violation_ = true;
    }
    return table;
  } else {
    auto& rel_err = table.rel_err_;
    auto& clamped = table.clamped_;
    rel_err.assign(f.size(), 0.0);
    clamped.assign(f.size(), 0);

    // Term weights w_n = (N-1)!/(N-n)! lambda_n are carried through the
    // ratios lambda_n/lambda_{n-1} so neither factor overflows on its own.
    std::vector<double> ratio(static_cast<std::size_t>(lam_avail) + 1, 0.0);
    for (int n = 2; n <= lam_avail; ++n) {
      const double prev = lambdas.lambda(n - 1);
      ratio[static_cast<std::size_t>(n)] =
          prev > 0.0 ? lambdas.lambda(n) / prev : 0.0;
    }

    const double unit = std::numeric_limits<double>::epsilon() / 2;
    const double underflow_floor = 1e-280;
    const std::optional<int>& modes = lambdas.mode_count();
    // Absolute noise bound per entry: rounding injected at each step plus
    // the inherited noise amplified by the same weights as the values. The
    // homogeneous part is what eventually outgrows the decaying F_N and
    // marks the tail unreliable.
    std::vector<double> noise(f.size(), 0.0);

    for (int N = 2; N <= top; ++N) {
      if (modes && N > *modes) {
        // Pauli blocking is known a priori for discrete profiles; the exact
        // value is zero, no need to watch it emerge from cancellation.
        f[static_cast<std::size_t>(N)] = 0.0;
        rel_err[static_cast<std::size_t>(N)] = 0.0;
        continue;
      }
      if (N >= table.first_unreliable_) {
        f[static_cast<std::size_t>(N)] = 0.0;
        rel_err[static_cast<std::size_t>(N)] =
            std::numeric_limits<double>::infinity();
        continue;
      }

      NeumaierSum acc;
      double abs_sum = 0.0;
      double inherited = 0.0;
      double w = lambdas.lambda(1);
      bool overflowed = false;
      const int n_hi = std::min(N, lam_avail);
      for (int n = 1; n <= n_hi; ++n) {
        if (n > 1) {
          w *= static_cast<double>(N - n + 1) * ratio[static_cast<std::size_t>(n)];
          if (w == 0.0) break;  // lambdas vanish from here on
          if (!std::isfinite(w)) {
            overflowed = true;
            break;
          }
        }
        const double term = w * f[static_cast<std::size_t>(N - n)];
        abs_sum += std::abs(term);
        inherited += w * noise[static_cast<std::size_t>(N - n)];
        acc.add(n % 2 == 1 ? term : -term);
      }
      double value = acc.value();
      const double bound = inherited + unit * (abs_sum + std::abs(value));
      noise[static_cast<std::size_t>(N)] = bound;

      bool cut_here = overflowed || bound >= std::abs(value);
      if (value < 0.0) {
        if (-value <= bound + underflow_floor) {
          value = 0.0;
          clamped[static_cast<std::size_t>(N)] = 1;
          cut_here = true;  // later ratios would divide by the clamped zero
        } else if (allow_truncated || lambdas.profile_derived()) {
          // A genuine negative marks where the weight list stops describing
          // a realizable profile: either the list was truncated on purpose,
          // or it is an idealized closed form (the hydrogenic weights are a
          // large-sample limit and lose realizability once N lambda_2 ~ 1).
          // Cut the table there instead of aborting the whole run.
          value = 0.0;
          cut_here = true;
        } else {
          throw PrecisionDomainError(
              "norm recursion produced F_" + std::to_string(N) + " = " +
              format_double(value) +
              " beyond its error bound; the lambda list does not describe a "
              "physical profile");
        }
      } else if (value < underflow_floor) {
        cut_here = true;  // underflow: ratios past this point are undefined
      }

      f[static_cast<std::size_t>(N)] = value;
      rel_err[static_cast<std::size_t>(N)] =
          bound / std::max(std::abs(value), underflow_floor);
      if (!cut_here &&
          value > f[static_cast<std::size_t>(N - 1)] * (1.0 + 1e-12))
        table.monotone_violation_ = true;
      if (cut_here && table.first_unreliable_ > N)
        table.first_unreliable_ = N;
    }
    return table;
  }
}

}  // namespace coboson
