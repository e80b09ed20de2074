#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "coboson/numeric.hpp"
#include "coboson/profile.hpp"
#include "coboson/statistics.hpp"

namespace coboson {

// Brute-force many-body oracle over the paired-mode basis. Each retained
// fermion-pair mode k is either empty or holds one a-fermion together with
// one b-fermion, so reachable configurations are subsets of the mode set and
// the composite creation operator acts as
//   B0+ = sum_k c_k a_k+ b_k+,   c_k = sqrt(p_k) >= 0.
// Pair operators commute, hence no sign bookkeeping; (a_k+ b_k+)^2 = 0 keeps
// Pauli exclusion. Amplitudes are stored as q_S * prod_{k in S} c_k with q_S
// an exact rational: every operator in this module multiplies amplitudes by
// rationals only (removing mode k brings a factor c_k^2 = p_k), so inner
// products of stored states are exact rationals by construction and no
// irrational quantity is representable in the first place.

inline constexpr int kMaxOracleModes = 24;

class FockState {
 public:
  using Subset = std::uint32_t;

  static FockState vacuum(std::shared_ptr<const ModeProfile<Rational>> profile);

  /// Single configuration S with rational part 1 (a positively scaled basis
  /// ket; the physical amplitude carries the implicit c-factors).
  static FockState configuration(
      std::shared_ptr<const ModeProfile<Rational>> profile, Subset s);

  const ModeProfile<Rational>& profile() const { return *profile_; }
  const std::shared_ptr<const ModeProfile<Rational>>& profile_ptr() const {
    return profile_;
  }
  int mode_count() const { return profile_->mode_count(); }

  /// Number of configurations carrying a nonzero amplitude.
  std::size_t configuration_count() const { return amp_.size(); }
  bool is_zero() const { return amp_.empty(); }

  /// Rational part q_S of the amplitude on subset S (the full amplitude is
  /// q_S times prod_{k in S} c_k). Zero when the subset is absent.
  Rational rational_part(Subset s) const;

  const std::map<Subset, Rational>& amplitudes() const { return amp_; }

  void add_scaled(Subset s, const Rational& value);
  FockState& operator+=(const FockState& other);
  FockState& operator-=(const FockState& other);
  FockState& operator*=(const Rational& factor);

 private:
  explicit FockState(std::shared_ptr<const ModeProfile<Rational>> profile);

  std::shared_ptr<const ModeProfile<Rational>> profile_;
  std::map<Subset, Rational> amp_;

  friend FockState apply_b0_dagger(const FockState&);
  friend FockState apply_b0(const FockState&);
};

FockState operator+(FockState lhs, const FockState& rhs);
FockState operator-(FockState lhs, const FockState& rhs);
FockState operator*(const Rational& factor, FockState state);

/// B0+ |state>: adds one coboson in every still-empty mode.
FockState apply_b0_dagger(const FockState& state);
/// B0 |state>: removes one coboson; adjoint of apply_b0_dagger.
FockState apply_b0(const FockState& state);
/// Deviation-from-boson operator D00 = 1 - B0 B0+ + B0+ B0, by composition.
FockState apply_d00(const FockState& state);
/// L2+ = (D00 B0+ - B0+ D00)/2 and L3+ = (D00 L2+ - L2+ D00)/2.
FockState apply_l2_dagger(const FockState& state);
FockState apply_l3_dagger(const FockState& state);
/// Adjoints of the above (D00 is self-adjoint).
FockState apply_l2(const FockState& state);
FockState apply_l3(const FockState& state);

/// <a|b> = sum_S q_a(S) q_b(S) prod_{k in S} p_k. Exact; states must share
/// one profile.
Rational inner(const FockState& a, const FockState& b);

/// |psi_N> = B0+^N |vacuum>.
FockState coboson_state(std::shared_ptr<const ModeProfile<Rational>> profile,
                        int n);

/// N-th elementary symmetric polynomial of the probabilities, by the plain
/// product expansion of prod_k (1 + p_k t). Independent of the norm
/// recursion.
Rational elementary_symmetric(const ModeProfile<Rational>& profile, int n);

/// F_N = <psi_N|psi_N>/N!, checked internally against N! e_N(p); returns 0
/// for Pauli-blocked N.
Rational oracle_f(const ModeProfile<Rational>& profile, int n);

/// Full statistical signature measured directly on |psi_N> by operator
/// composition; completely independent of the closed-form pipeline.
MomentReport<Rational> oracle_report(const ModeProfile<Rational>& profile,
                                     int n);

struct IdentityCheck {
  std::string identity;
  int n = 0;
  bool pass = false;
  std::string residual;  // exact rational, "0/1" when the identity holds
};

struct CheckReport {
  std::vector<IdentityCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  std::size_t failure_count() const {
    std::size_t k = 0;
    for (const auto& c : checks)
      if (!c.pass) ++k;
    return k;
  }
};

/// Machine-checks the ladder and commutator identities used by the moment
/// pipeline (annihilation ladder, number-operator ladder, the D00 reduction
/// chain, the two-exchange remainder and the coincidence moment) on
/// |psi_1>..|psi_nmax>. Residuals are exact rationals and must vanish.
CheckReport check_identities(const ModeProfile<Rational>& profile, int n_max);

/// Seeded generator of random normalized rational profiles (weights drawn as
/// small integers). Deterministic across platforms.
std::vector<ModeProfile<Rational>> sample_rational_profiles(int count,
                                                            int min_modes,
                                                            int max_modes,
                                                            std::uint64_t seed);

}  // namespace coboson
