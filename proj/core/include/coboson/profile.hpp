#pragma once

#include <cmath>
#include <filesystem>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "coboson/numeric.hpp"

namespace coboson {

inline constexpr double kNormalizationTol = 1e-12;

/// Discrete relative-motion profile of a composite boson: the occupation
/// probability p_k of each retained fermion-pair mode k. Probabilities are
/// non-negative and sum to one (exactly in rational mode, to 1e-12 in float
/// mode). Immutable after construction.
template <class S>
class ModeProfile {
 public:
  /// Builds a profile from raw weights. With `normalize` set the weights are
  /// divided by their sum; otherwise a sum off by more than the tolerance is
  /// an error, so that bad input data cannot slip through silently.
  static ModeProfile from_weights(std::vector<S> weights, std::string label,
                                  bool normalize) {
    if (weights.empty()) throw ProfileError("profile needs at least one mode");
    S sum{0};
    for (const S& w : weights) {
      if constexpr (!is_rational_mode<S>) {
        if (!std::isfinite(static_cast<double>(w)))
          throw ProfileError("profile weight is not finite");
      }
      if (w < S{0}) throw ProfileError("profile weight is negative");
      sum += w;
    }
    if (sum == S{0}) throw ProfileError("profile weights sum to zero");
    if (normalize) {
      for (S& w : weights) w /= sum;
    } else if constexpr (is_rational_mode<S>) {
      if (sum != S{1})
        throw ProfileError("profile not normalized: sum = " + format_scalar(sum) +
                           " (pass normalize=true to rescale)");
    } else {
      if (std::abs(to_double(sum) - 1.0) > kNormalizationTol)
        throw ProfileError("profile not normalized: sum = " + format_scalar(sum) +
                           " (pass normalize=true to rescale)");
    }
    return ModeProfile(std::move(weights), std::move(label));
  }

  const std::vector<S>& probabilities() const { return p_; }
  const std::string& label() const { return label_; }
  int mode_count() const { return static_cast<int>(p_.size()); }

  /// Number of modes with nonzero probability; only these can ever be
  /// occupied, so this is what Pauli blocking counts.
  int occupiable_modes() const {
    int m = 0;
    for (const S& p : p_)
      if (p > S{0}) ++m;
    return m;
  }

  bool operator==(const ModeProfile&) const = default;

 private:
  ModeProfile(std::vector<S> p, std::string label)
      : p_(std::move(p)), label_(std::move(label)) {}

  std::vector<S> p_;
  std::string label_;
};

/// M equally weighted modes, p_k = 1/M.
template <class S>
ModeProfile<S> uniform_profile(int modes) {
  if (modes < 1) throw ProfileError("uniform profile needs at least one mode");
  std::vector<S> p;
  p.reserve(static_cast<std::size_t>(modes));
  for (int k = 0; k < modes; ++k) {
    if constexpr (is_rational_mode<S>) {
      p.emplace_back(Rational(1, modes));
    } else {
      p.emplace_back(1.0 / modes);
    }
  }
  return ModeProfile<S>::from_weights(std::move(p),
                                      "uniform:" + std::to_string(modes),
                                      /*normalize=*/!is_rational_mode<S>);
}

/// n-th power sum of the profile probabilities, lambda_n = sum_k p_k^n.
/// This is the weight of a closed chain of fermion exchanges among n
/// cobosons occupying the same state.
template <class S>
S lambda_from_profile(const ModeProfile<S>& profile, int n) {
  if (n < 1) throw Error("lambda_n needs n >= 1");
  if constexpr (is_rational_mode<S>) {
    Rational acc{0};
    for (const Rational& p : profile.probabilities()) {
      Rational pw{1};
      for (int i = 0; i < n; ++i) pw *= p;
      acc += pw;
    }
    return acc;
  } else {
    NeumaierSum acc;
    for (const double p : profile.probabilities()) acc.add(std::pow(p, n));
    return acc.value();
  }
}

/// 3D hydrogen-like coboson: relative motion with Bohr extension a_B inside
/// a box of linear size L. Only the ratio a_B/L enters.
struct HydrogenicProfile {
  double a_over_L = 0.0;
  static constexpr int dimension = 3;

  explicit HydrogenicProfile(double ratio) : a_over_L(ratio) {
    if (!(ratio > 0.0) || !std::isfinite(ratio))
      throw ProfileError("hydrogenic profile needs a_B/L > 0");
  }

  /// Dimensionless density of N such cobosons, eta = N (a_B/L)^3.
  double eta(long n_particles) const {
    return static_cast<double>(n_particles) * std::pow(a_over_L, 3);
  }
};

/// Parses the JSON profile file format:
///   {"label": string, "weights": [number|"p/q", ...], "normalize": bool}
/// Rational mode accepts integers and "p/q" strings; fractional JSON numbers
/// are rejected there rather than being converted to an unintended exact
/// binary fraction.
ModeProfile<Rational> load_profile_rational(const std::filesystem::path& path);
ModeProfile<double> load_profile_float(const std::filesystem::path& path);
ModeProfile<Rational> parse_profile_rational(const std::string& json_text);
ModeProfile<double> parse_profile_float(const std::string& json_text);

}  // namespace coboson
