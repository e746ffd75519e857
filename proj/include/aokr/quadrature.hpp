#pragma once

#include <functional>
#include <vector>

namespace aokr::theory {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss–Legendre rule (Newton iteration on P_n).
GaussLegendreRule gauss_legendre(int n);

/// ∫_a^b f using an n-point rule.
double integrate_fixed(const std::function<double(double)>& f, double a, double b, int n);

/// Doubles the point count from `start_points` until successive estimates
/// differ by less than `tol` (absolute); gives up at `max_points`.
double integrate_doubling(const std::function<double(double)>& f, double a, double b, double tol = 1e-10,
                          int start_points = 64, int max_points = 4096);

}  // namespace aokr::theory
