#include "election/netgen/sparsity.h"

#include <cmath>
#include <limits>
#include <string>

#include "election/errors.h"

namespace election::netgen {
namespace {

constexpr int kMaxIterations = 1000;
constexpr double kEps = 1e-16;

double GammaSeries(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper tail Q(a, x) by Lentz's continued fraction.
double GammaContinuedFraction(double a, double x) {
  constexpr double kTiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double RegularizedGammaP(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw DomainError("RegularizedGammaP: need a > 0 and x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return GammaSeries(a, x);
  return 1.0 - GammaContinuedFraction(a, x);
}

double ChiSquaredCdf(double x, int dof) {
  if (dof < 1) throw DomainError("ChiSquaredCdf: dof must be >= 1");
  if (x <= 0.0) return 0.0;
  return RegularizedGammaP(dof / 2.0, x / 2.0);
}

double ChiSquaredQuantile(double p, int dof) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("ChiSquaredQuantile: p must lie in (0,1)");
  if (dof < 1) throw DomainError("ChiSquaredQuantile: dof must be >= 1");
  const double d = dof;
  double lo = 0.0;
  double hi = d + 20.0 * std::sqrt(2.0 * d) + 50.0;
  while (ChiSquaredCdf(hi, dof) < p) hi *= 2.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (ChiSquaredCdf(mid, dof) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double DeltaForSparsity(double beta, int d) {
  if (!(beta > 0.0 && beta < 1.0))
    throw DomainError("DeltaForSparsity: beta must lie in (0,1), got " + std::to_string(beta));
  if (d < 1) throw DomainError("DeltaForSparsity: d must be >= 1");
  return (2.0 / d) * ChiSquaredQuantile(beta, d);
}

}  // namespace election::netgen
