#pragma once

namespace floquet {

/// Bessel function of the first kind J_n(x) for integer order.
///
/// Evaluated by Miller's downward recurrence normalised with
/// J_0 + 2 sum_k J_2k = 1, which is stable for every order. Negative orders use
/// J_{-n} = (-1)^n J_n. Validated for |x| <= 50; larger arguments throw
/// std::domain_error.
double bessel_j(int n, double x);

/// First positive zero of J_0.
inline constexpr double bessel_j0_first_zero = 2.404825557695773;

}  // namespace floquet
