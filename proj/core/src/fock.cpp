#include "coboson/fock.hpp"

#include <bit>
#include <random>
#include <utility>

namespace coboson {

namespace {

Rational factorial(int n) {
  Rational r{1};
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

void require_same_profile(const FockState& a, const FockState& b) {
  if (a.profile_ptr() != b.profile_ptr() && !(a.profile() == b.profile()))
    throw Error("fock states belong to different profiles");
}

}  // namespace

FockState::FockState(std::shared_ptr<const ModeProfile<Rational>> profile)
    : profile_(std::move(profile)) {
  if (!profile_) throw Error("fock state needs a profile");
  if (profile_->mode_count() > kMaxOracleModes)
    throw Error("oracle is capped at " + std::to_string(kMaxOracleModes) +
                " modes (combinatorial state space)");
}

FockState FockState::vacuum(
    std::shared_ptr<const ModeProfile<Rational>> profile) {
  FockState s(std::move(profile));
  s.amp_[0u] = Rational(1);
  return s;
}

FockState FockState::configuration(
    std::shared_ptr<const ModeProfile<Rational>> profile, Subset subset) {
  FockState s(std::move(profile));
  if (subset >> s.mode_count())
    throw Error("configuration uses modes outside the profile");
  s.amp_[subset] = Rational(1);
  return s;
}

Rational FockState::rational_part(Subset s) const {
  const auto it = amp_.find(s);
  return it == amp_.end() ? Rational(0) : it->second;
}

void FockState::add_scaled(Subset s, const Rational& value) {
  if (value == 0) return;
  auto [it, inserted] = amp_.try_emplace(s, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0) amp_.erase(it);
  }
}

FockState& FockState::operator+=(const FockState& other) {
  require_same_profile(*this, other);
  for (const auto& [s, q] : other.amp_) add_scaled(s, q);
  return *this;
}

FockState& FockState::operator-=(const FockState& other) {
  require_same_profile(*this, other);
  for (const auto& [s, q] : other.amp_) add_scaled(s, -q);
  return *this;
}

FockState& FockState::operator*=(const Rational& factor) {
  if (factor == 0) {
    amp_.clear();
    return *this;
  }
  for (auto& [s, q] : amp_) q *= factor;
  return *this;
}

FockState operator+(FockState lhs, const FockState& rhs) {
  lhs += rhs;
  return lhs;
}

FockState operator-(FockState lhs, const FockState& rhs) {
  lhs -= rhs;
  return lhs;
}

FockState operator*(const Rational& factor, FockState state) {
  state *= factor;
  return state;
}

FockState apply_b0_dagger(const FockState& state) {
  FockState out(state.profile_ptr());
  const int m = state.mode_count();
  for (const auto& [s, q] : state.amp_) {
    for (int k = 0; k < m; ++k) {
      const FockState::Subset bit = FockState::Subset{1} << k;
      if (s & bit) continue;  // mode occupied: Pauli-blocked
      if (state.profile().probabilities()[static_cast<std::size_t>(k)] == 0)
        continue;  // c_k = 0
      out.add_scaled(s | bit, q);
    }
  }
  return out;
}

FockState apply_b0(const FockState& state) {
  FockState out(state.profile_ptr());
  const auto& p = state.profile().probabilities();
  for (const auto& [s, q] : state.amp_) {
    FockState::Subset rest = s;
    while (rest) {
      const int k = std::countr_zero(rest);
      const FockState::Subset bit = FockState::Subset{1} << k;
      rest ^= bit;
      // the freed c_k joins the one in the amplitude: c_k^2 = p_k
      out.add_scaled(s ^ bit, q * p[static_cast<std::size_t>(k)]);
    }
  }
  return out;
}

FockState apply_d00(const FockState& state) {
  FockState out = state;
  out -= apply_b0(apply_b0_dagger(state));
  out += apply_b0_dagger(apply_b0(state));
  return out;
}

namespace {
const Rational kHalf{1, 2};
}

FockState apply_l2_dagger(const FockState& state) {
  FockState raised = apply_b0_dagger(state);
  FockState out = apply_d00(raised);
  out -= apply_b0_dagger(apply_d00(state));
  out *= kHalf;
  return out;
}

FockState apply_l3_dagger(const FockState& state) {
  FockState out = apply_d00(apply_l2_dagger(state));
  out -= apply_l2_dagger(apply_d00(state));
  out *= kHalf;
  return out;
}

FockState apply_l2(const FockState& state) {
  FockState out = apply_b0(apply_d00(state));
  out -= apply_d00(apply_b0(state));
  out *= kHalf;
  return out;
}

FockState apply_l3(const FockState& state) {
  FockState out = apply_l2(apply_d00(state));
  out -= apply_d00(apply_l2(state));
  out *= kHalf;
  return out;
}

Rational inner(const FockState& a, const FockState& b) {
  require_same_profile(a, b);
  const auto& pa = a.amplitudes();
  const auto& pb = b.amplitudes();
  const auto& probs = a.profile().probabilities();
  const bool a_smaller = pa.size() <= pb.size();
  const auto& small = a_smaller ? pa : pb;
  const auto& large = a_smaller ? pb : pa;
  Rational acc{0};
  for (const auto& [s, q] : small) {
    const auto it = large.find(s);
    if (it == large.end()) continue;
    Rational weight = q * it->second;
    FockState::Subset rest = s;
    while (rest) {
      const int k = std::countr_zero(rest);
      rest &= rest - 1;
      weight *= probs[static_cast<std::size_t>(k)];
    }
    acc += weight;
  }
  return acc;
}

FockState coboson_state(std::shared_ptr<const ModeProfile<Rational>> profile,
                        int n) {
  if (n < 0) throw Error("coboson_state needs N >= 0");
  if (n > profile->mode_count())
    throw Error("oracle state needs N <= mode count (requested N = " +
                std::to_string(n) + ", modes = " +
                std::to_string(profile->mode_count()) + ")");
  FockState state = FockState::vacuum(std::move(profile));
  for (int i = 0; i < n; ++i) state = apply_b0_dagger(state);
  return state;
}

Rational elementary_symmetric(const ModeProfile<Rational>& profile, int n) {
  if (n < 0) throw Error("elementary_symmetric needs N >= 0");
  const int m = profile.mode_count();
  if (n > m) return Rational(0);
  // coefficients of prod_k (1 + p_k t), degree by degree
  std::vector<Rational> coeff(static_cast<std::size_t>(n) + 1, Rational(0));
  coeff[0] = 1;
  int seen = 0;
  for (const Rational& p : profile.probabilities()) {
    ++seen;
    const int hi = std::min(n, seen);
    for (int d = hi; d >= 1; --d)
      coeff[static_cast<std::size_t>(d)] +=
          p * coeff[static_cast<std::size_t>(d - 1)];
  }
  return coeff[static_cast<std::size_t>(n)];
}

Rational oracle_f(const ModeProfile<Rational>& profile, int n) {
  if (n < 0) throw Error("oracle_f needs N >= 0");
  const Rational nfact = factorial(n);
  Rational via_state{0};
  if (n <= profile.mode_count()) {
    auto shared = std::make_shared<const ModeProfile<Rational>>(profile);
    const FockState psi = coboson_state(shared, n);
    via_state = inner(psi, psi) / nfact;
  }
  const Rational via_elementary = nfact * elementary_symmetric(profile, n);
  if (via_state != via_elementary)
    throw Error("oracle self-check failed: <psi|psi>/N! = " +
                format_rational(via_state) + " but N! e_N = " +
                format_rational(via_elementary));
  return via_state;
}

MomentReport<Rational> oracle_report(const ModeProfile<Rational>& profile,
                                     int n) {
  if (n < 1) throw Error("oracle_report needs N >= 1");
  if (n > profile.occupiable_modes())
    throw BlockedStateError("state with N = " + std::to_string(n) +
                            " cobosons is Pauli-blocked (only " +
                            std::to_string(profile.occupiable_modes()) +
                            " occupiable modes)");
  auto shared = std::make_shared<const ModeProfile<Rational>>(profile);
  const FockState psi = coboson_state(shared, n);
  const Rational norm = inner(psi, psi);
  if (norm == 0) throw BlockedStateError("state vanishes");

  const FockState lowered = apply_b0(psi);
  const FockState number = apply_b0_dagger(lowered);  // n |psi>
  const FockState lowered2 = apply_b0(lowered);       // B0^2 |psi>

  MomentReport<Rational> rep;
  rep.n = n;
  rep.mean_n = inner(psi, number) / norm;
  rep.mean_n2 = inner(number, number) / norm;
  rep.variance = rep.mean_n2 - rep.mean_n * rep.mean_n;
  rep.mandel_q = rep.variance / rep.mean_n - 1;
  rep.coincidence = inner(lowered2, lowered2) / norm;
  rep.g2 = rep.coincidence / (rep.mean_n * rep.mean_n);
  rep.d00_moment = inner(lowered, apply_d00(lowered)) / norm;
  if (n >= 2) {
    const FockState below = coboson_state(shared, n - 2);
    rep.r_term = inner(psi, apply_l2_dagger(apply_l2_dagger(below))) / norm;
  } else {
    rep.r_term = 0;
  }

  const Rational lam2 = lambda_from_profile(profile, 2);
  const Rational lam3 = lambda_from_profile(profile, 3);
  rep.approx_q = approx_q(lam2, lam3, n);
  rep.approx_g2_a = approx_g2(lam2, n, G2Approx::a);
  rep.approx_g2_b = approx_g2(lam2, n, G2Approx::b);
  rep.approx_g2_large = approx_g2(lam2, n, G2Approx::large_sample);
  auto base = baselines<Rational>(n);
  rep.baseline_g2 = base.first;
  rep.baseline_q = base.second;
  return rep;
}

namespace {

Rational max_amplitude_gap(const FockState& a, const FockState& b) {
  Rational worst{0};
  auto consider = [&worst](const Rational& va, const Rational& vb) {
    Rational d = va - vb;
    if (d < 0) d = -d;
    if (d > worst) worst = d;
  };
  for (const auto& [s, q] : a.amplitudes()) consider(q, b.rational_part(s));
  for (const auto& [s, q] : b.amplitudes()) consider(a.rational_part(s), q);
  return worst;
}

Rational abs_value(Rational v) {
  if (v < 0) v = -v;
  return v;
}

struct IdentityRecorder {
  std::vector<IdentityCheck>& out;
  void state_gap(const std::string& name, int n, const FockState& lhs,
                 const FockState& rhs) {
    const Rational gap = max_amplitude_gap(lhs, rhs);
    out.push_back({name, n, gap == 0, format_rational(gap)});
  }
  void scalar_gap(const std::string& name, int n, const Rational& lhs,
                  const Rational& rhs) {
    const Rational gap = abs_value(lhs - rhs);
    out.push_back({name, n, gap == 0, format_rational(gap)});
  }
};

}  // namespace

CheckReport check_identities(const ModeProfile<Rational>& profile, int n_max) {
  constexpr int kMaxCheckModes = 12;
  const int modes = profile.mode_count();
  if (modes > kMaxCheckModes)
    throw Error("identity checks are capped at " +
                std::to_string(kMaxCheckModes) + " modes");
  if (n_max < 1 || n_max > modes)
    throw Error("identity checks need 1 <= n_max <= mode count");

  auto shared = std::make_shared<const ModeProfile<Rational>>(profile);
  // |psi_0> .. |psi_{n_max+2}> (the difference ratios need two extra norms;
  // states beyond the mode count simply come out empty)
  std::vector<FockState> psi;
  psi.reserve(static_cast<std::size_t>(n_max) + 3);
  psi.push_back(FockState::vacuum(shared));
  for (int k = 1; k <= n_max + 2; ++k)
    psi.push_back(apply_b0_dagger(psi.back()));

  std::vector<Rational> norm(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) norm[k] = inner(psi[k], psi[k]);
  std::vector<Rational> fvals(psi.size());
  {
    Rational nfact{1};
    for (std::size_t k = 0; k < psi.size(); ++k) {
      if (k > 1) nfact *= static_cast<int>(k);
      fvals[k] = norm[k] / nfact;
    }
  }
  const Rational lam2 = lambda_from_profile(profile, 2);

  CheckReport report;
  IdentityRecorder rec{report.checks};

  for (int n = 1; n <= n_max; ++n) {
    const std::size_t un = static_cast<std::size_t>(n);
    const FockState& cur = psi[un];
    const FockState lowered = apply_b0(cur);
    const FockState number = apply_b0_dagger(lowered);

    // annihilation ladder: B0 psi_N = N psi_{N-1} - N(N-1) L2+ psi_{N-2}
    {
      FockState rhs = Rational(n) * psi[un - 1];
      if (n >= 2)
        rhs -= Rational(static_cast<long long>(n) * (n - 1)) *
               apply_l2_dagger(psi[un - 2]);
      rec.state_gap("annihilation_ladder", n, lowered, rhs);
    }

    // number ladder: B0+ B0 psi_N = psi_N + (N-1)/(N+1) B0 psi_{N+1}
    {
      FockState rhs = cur;
      rhs += Rational(n - 1, n + 1) * apply_b0(psi[un + 1]);
      rec.state_gap("number_ladder", n, number, rhs);
    }

    const FockState d00_psi = apply_d00(cur);

    // D00 psi_N = 2N L2+ psi_{N-1} = 2 psi_N - 2/(N+1) B0 psi_{N+1}
    {
      const FockState rhs1 =
          Rational(2 * static_cast<long long>(n)) * apply_l2_dagger(psi[un - 1]);
      rec.state_gap("deviation_ladder", n, d00_psi, rhs1);
      FockState rhs2 = Rational(2) * cur;
      rhs2 -= Rational(2, n + 1) * apply_b0(psi[un + 1]);
      rec.state_gap("deviation_ladder_alt", n, d00_psi, rhs2);
    }

    // L2 psi_N = N lam2 psi_{N-1} - N(N-1) L3+ psi_{N-2}
    {
      FockState rhs = Rational(n) * lam2 * psi[un - 1];
      if (n >= 2)
        rhs -= Rational(static_cast<long long>(n) * (n - 1)) *
               apply_l3_dagger(psi[un - 2]);
      rec.state_gap("pair_exchange_lowering", n, apply_l2(cur), rhs);
    }

    // The remaining checks divide by <psi_N|psi_N>; a vanishing norm means
    // the row is Pauli-blocked (zero-probability modes), not a failure.
    if (norm[un] == 0) continue;

    const FockState d00_lowered = apply_d00(lowered);
    const Rational d00bb = inner(lowered, d00_lowered);

    // <B0+ D00 B0> = <D00 B0+ B0> - 2 <L2+ B0> (all unnormalized)
    {
      const Rational rhs =
          inner(d00_psi, number) - 2 * inner(apply_l2(cur), lowered);
      rec.scalar_gap("deviation_commutator_split", n, d00bb, rhs);
    }

    const Rational d1 = (fvals[un + 1] - fvals[un]) / fvals[un];
    const Rational d2 = (fvals[un + 2] - fvals[un + 1]) / fvals[un];

    // <D00 B0+ B0> = [-2 D1 - 2 N(N-1)/(N+1) D2] <psi|psi>
    {
      const Rational rhs =
          (Rational(-2) * d1 -
           Rational(2 * static_cast<long long>(n) * (n - 1), n + 1) * d2) *
          norm[un];
      rec.scalar_gap("deviation_number_moment", n,
                     inner(d00_psi, number), rhs);
    }

    if (n >= 2) {
      const Rational r_def =
          inner(cur, apply_l2_dagger(apply_l2_dagger(psi[un - 2]))) / norm[un];

      // R via the L3 reduction
      {
        const Rational rhs =
            lam2 / (n - 1) * (fvals[un - 1] - fvals[un]) / fvals[un] +
            (inner(psi[un - 1], apply_l3(cur)) -
             Rational(n) * inner(psi[un - 2], apply_l3(psi[un - 1]))) /
                norm[un];
        rec.scalar_gap("remainder_reduction", n, r_def, rhs);
      }

      // three-norm expression of <psi_{N-2}|L3|psi_{N-1}>
      {
        const long long nn = n;
        const Rational rhs = lam2 / (n - 1) * norm[un - 1] -
                             norm[un] / Rational(nn * nn * (nn - 1)) +
                             norm[un + 1] / Rational(nn * nn * (nn * nn - 1));
        rec.scalar_gap("three_chain_matrix_element", n,
                       inner(psi[un - 2], apply_l3(psi[un - 1])), rhs);
      }

      // compact R formula
      {
        const long long nn = n;
        const Rational rhs = d2 / Rational(nn * (nn + 1)) -
                             (lam2 + d1) / Rational(nn * (nn - 1));
        rec.scalar_gap("remainder_compact", n, r_def, rhs);
      }

      // <B0+ D00 B0> in both compact forms
      {
        const long long nn = n;
        const Rational rhs1 =
            Rational(-2) *
            (lam2 + d1 + Rational((nn - 1) * (nn - 1), nn + 1) * d2) *
            norm[un];
        rec.scalar_gap("deviation_moment_compact", n, d00bb, rhs1);
        const Rational rhs2 = Rational(-2 * nn * (nn - 1)) *
                              (d2 / (nn + 1) - r_def) * norm[un];
        rec.scalar_gap("deviation_moment_compact_alt", n, d00bb, rhs2);
      }

      const FockState lowered2 = apply_b0(lowered);
      const Rational coincidence = inner(lowered2, lowered2);

      // coincidence split: <B0+2 B0^2> = <n^2> - <n> + <B0+ D00 B0>
      {
        const Rational rhs =
            inner(number, number) - inner(cur, number) + d00bb;
        rec.scalar_gap("coincidence_split", n, coincidence, rhs);
      }

      // compact coincidence moment
      {
        const long long nn = n;
        const Rational bracket = Rational(1) + d1 +
                                 Rational(nn - 3, nn + 1) * d2 +
                                 Rational(2) * r_def;
        rec.scalar_gap("coincidence_moment_compact", n, coincidence,
                       Rational(nn * (nn - 1)) * bracket * norm[un]);
      }
    }
  }
  return report;
}

std::vector<ModeProfile<Rational>> sample_rational_profiles(
    int count, int min_modes, int max_modes, std::uint64_t seed) {
  if (count < 0 || min_modes < 1 || max_modes < min_modes)
    throw Error("bad profile sampling parameters");
  std::mt19937_64 rng(seed);
  std::vector<ModeProfile<Rational>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const int span = max_modes - min_modes + 1;
    const int modes = min_modes + static_cast<int>(rng() % span);
    std::vector<Rational> weights;
    weights.reserve(static_cast<std::size_t>(modes));
    for (int k = 0; k < modes; ++k)
      weights.emplace_back(1 + static_cast<int>(rng() % 16));
    out.push_back(ModeProfile<Rational>::from_weights(
        std::move(weights), "random:" + std::to_string(i), /*normalize=*/true));
  }
  return out;
}

}  // namespace coboson
