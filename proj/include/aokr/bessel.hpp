#pragma once

#include <vector>

namespace aokr::theory {

/// J_n(x) for integer order and real argument, absolute error ~1e-15.
double bessel_j(int order, double x);

/// {J_0(x), …, J_nmax(x)} in one pass (Miller backward recurrence for x ≥ 1,
/// ascending series below).
std::vector<double> bessel_j_sequence(int nmax, double x);

}  // namespace aokr::theory
