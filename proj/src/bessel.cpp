#include "aokr/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace aokr::theory {
namespace {

constexpr double kSeriesLimit = 1.0;
constexpr double kRescaleAbove = 1e200;

// Σ_k (−1)^k (x/2)^{2k+n} / (k!(n+k)!), for |x| < 1 every term shrinks by ≥ 4×.
double series(int n, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= n; ++i) term *= half / i;
  if (term == 0.0) return 0.0;
  const double q = -half * half;
  double sum = term;
  for (int k = 1; k < 60; ++k) {
    term *= q / (static_cast<double>(k) * (n + k));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

std::vector<double> miller(int nmax, double x) {
  const int reach = std::max(nmax, static_cast<int>(x));
  int start = reach + static_cast<int>(std::sqrt(200.0 * reach)) + 20;
  start += start % 2;  // even, so the normalisation sum picks up J_0

  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  const double two_over_x = 2.0 / x;
  double next = 0.0;  // J_{m+1}
  double cur = 1e-300;  // J_m, arbitrary seed
  double norm = 0.0;
  for (int m = start; m > 0; --m) {
    const double prev = m * two_over_x * cur - next;  // J_{m-1}
    next = cur;
    cur = prev;
    if (m - 1 <= nmax) out[static_cast<std::size_t>(m - 1)] = cur;
    if ((m - 1) % 2 == 0 && m - 1 > 0) norm += 2.0 * cur;
    if (std::abs(cur) > kRescaleAbove) {
      cur /= kRescaleAbove;
      next /= kRescaleAbove;
      norm /= kRescaleAbove;
      for (int i = m - 1; i <= nmax; ++i) out[static_cast<std::size_t>(i)] /= kRescaleAbove;
    }
  }
  norm += cur;  // J_0 term
  for (double& v : out) v /= norm;
  return out;
}

}  // namespace

std::vector<double> bessel_j_sequence(int nmax, double x) {
  if (nmax < 0) throw std::invalid_argument("bessel_j_sequence: nmax must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  const double ax = std::abs(x);
  if (ax == 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (ax < kSeriesLimit) {
    for (int n = 0; n <= nmax; ++n) out[static_cast<std::size_t>(n)] = series(n, ax);
  } else {
    out = miller(nmax, ax);
  }
  if (x < 0.0) {
    for (int n = 1; n <= nmax; n += 2) out[static_cast<std::size_t>(n)] = -out[static_cast<std::size_t>(n)];
  }
  return out;
}

double bessel_j(int order, double x) {
  const int n = std::abs(order);
  double value;
  if (std::abs(x) < kSeriesLimit) {
    value = x == 0.0 ? (n == 0 ? 1.0 : 0.0) : series(n, std::abs(x));
    if (x < 0.0 && n % 2 == 1) value = -value;
  } else {
    value = bessel_j_sequence(n, x)[static_cast<std::size_t>(n)];
  }
  return (order < 0 && n % 2 == 1) ? -value : value;
}

}  // namespace aokr::theory
