#include "coboson/hydrogenic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace coboson {

BigInt double_factorial(int m) {
  if (m < -1) throw Error("double factorial of " + std::to_string(m));
  BigInt r{1};
  for (int k = m; k > 1; k -= 2) r *= k;
  return r;
}

double log_double_factorial(int m) {
  if (m < -1) throw Error("double factorial of " + std::to_string(m));
  if (m <= 0) return 0.0;
  if (m % 2 == 0) {
    // (2q)!! = 2^q q!
    const double q = m / 2;
    return q * std::numbers::ln2 + std::lgamma(q + 1.0);
  }
  // (2q-1)!! = (2q)! / (2^q q!)
  const double q = (m + 1) / 2;
  return std::lgamma(2.0 * q + 1.0) - q * std::numbers::ln2 - std::lgamma(q + 1.0);
}

namespace {

// 16 (8n-5)!!/(8n-2)!! as an exact ratio while the integers stay cheap.
double exchange_ratio(int n) {
  constexpr int kExactLimit = 40;
  if (n <= kExactLimit) {
    const Rational r = Rational(16) * Rational(double_factorial(8 * n - 5),
                                               double_factorial(8 * n - 2));
    return to_double(r);
  }
  const double lr = std::log(16.0) + log_double_factorial(8 * n - 5) -
                    log_double_factorial(8 * n - 2);
  return std::exp(lr);
}

}  // namespace

double hydrogenic_lambda(int n, double a_over_L) {
  if (n < 1) throw Error("lambda_n needs n >= 1");
  if (!(a_over_L > 0.0) || !std::isfinite(a_over_L))
    throw Error("hydrogenic lambda needs a_B/L > 0");
  if (n == 1) return 1.0;
  const double x = 64.0 * std::numbers::pi * std::pow(a_over_L, 3);
  const double lx = (n - 1) * std::log(x);
  if (lx < -700.0) {
    // pow would underflow; finish the product in log space.
    const double lr = std::log(16.0) + log_double_factorial(8 * n - 5) -
                      log_double_factorial(8 * n - 2);
    return std::exp(lr + lx);
  }
  return exchange_ratio(n) * std::pow(x, n - 1);
}

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.000000000000000000000000000000000e+00,
    2.077849550078984676006894037732449e-01,
    4.058451513773971669066064120769615e-01,
    5.860872354676911302941448382587296e-01,
    7.415311855993944398638647732807884e-01,
    8.648644233597690727897127886409262e-01,
    9.491079123427585245261896840478513e-01,
    9.914553711208126392068546975263285e-01};
constexpr double kKronrodWeights[8] = {
    2.094821410847278280129991748917143e-01,
    2.044329400752988924141619992346491e-01,
    1.903505780647854099132564024210137e-01,
    1.690047266392679028265834265985503e-01,
    1.406532597155259187451895905102379e-01,
    1.047900103222501838398763225415180e-01,
    6.309209262997855329070066318920429e-02,
    2.293532201052922496373200805896959e-02};
constexpr double kGaussWeights[4] = {
    4.179591836734693877551020408163265e-01,
    3.818300505051189449503697754889751e-01,
    2.797053914892766679014677714237796e-01,
    1.294849661688696932706114326790820e-01};

struct Panel {
  double a, b, value, error;
};

template <class F>
Panel evaluate_panel(const F& f, double a, double b) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  const double fc = f(c);
  double kron = kKronrodWeights[0] * fc;
  double gauss = kGaussWeights[0] * fc;
  for (int i = 1; i < 8; ++i) {
    const double dx = h * kKronrodNodes[i];
    const double fsum = f(c - dx) + f(c + dx);
    kron += kKronrodWeights[i] * fsum;
    if (i % 2 == 0) gauss += kGaussWeights[i / 2] * fsum;
  }
  kron *= h;
  gauss *= h;
  return {a, b, kron, std::abs(kron - gauss)};
}

template <class F>
double adaptive_integrate(const F& f, double a, double b, double rel_tol,
                          int max_intervals) {
  std::vector<Panel> panels{evaluate_panel(f, a, b)};
  for (;;) {
    double total = 0.0, err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      total += panels[i].value;
      err += panels[i].error;
      if (panels[i].error > panels[worst].error) worst = i;
    }
    const double target = rel_tol * std::max(std::abs(total),
                                             std::numeric_limits<double>::min());
    if (err <= target) return total;
    if (static_cast<int>(panels.size()) >= max_intervals)
      throw QuadratureError("quadrature error estimate " + format_double(err) +
                            " above tolerance after " +
                            std::to_string(panels.size()) + " intervals");
    const Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    panels[worst] = evaluate_panel(f, p.a, mid);
    panels.push_back(evaluate_panel(f, mid, p.b));
  }
}

}  // namespace

double hydrogenic_lambda_quadrature(int n, double a_over_L,
                                    const QuadratureSpec& quad) {
  if (n < 1) throw Error("lambda_n needs n >= 1");
  if (!(a_over_L > 0.0)) throw Error("hydrogenic lambda needs a_B/L > 0");
  if (!(quad.rel_tol > 0.0) || !(quad.cutoff > 0.0) || quad.max_intervals < 1)
    throw QuadratureError("invalid quadrature spec");

  // Converting the mode sum to an integral leaves
  //   lambda_n = (32/pi) (64 pi (a/L)^3)^(n-1) * I_n,
  //   I_n = int_0^inf x^2 (1+x^2)^(-4n) dx,   x = k a_B.
  const auto integrand = [n](double x) {
    return x * x * std::pow(1.0 + x * x, -4.0 * n);
  };
  const double integral =
      adaptive_integrate(integrand, 0.0, quad.cutoff, quad.rel_tol,
                         quad.max_intervals);
  const double x = 64.0 * std::numbers::pi * std::pow(a_over_L, 3);
  return 32.0 / std::numbers::pi * std::pow(x, n - 1) * integral;
}

}  // namespace coboson
