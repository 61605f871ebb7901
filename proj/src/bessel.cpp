#include "floquet/bessel.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace floquet {

namespace {

constexpr double max_argument = 50.0;
constexpr double rescale_threshold = 1e250;

double bessel_j_nonneg(int n, double x) {
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;

  // Start well above both n and x so the seed error decays below double precision.
  const int scale = std::max(n, static_cast<int>(x));
  int start = scale + 30 + static_cast<int>(std::sqrt(60.0 * (scale + 1)));
  if (start % 2 != 0) ++start;

  double next = 0.0;  // J_{k+1}
  double curr = 1e-300;  // J_k
  double norm = 0.0;
  double wanted = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = 2.0 * k / x * curr - next;  // J_{k-1}
    next = curr;
    curr = prev;
    if (k - 1 == n) wanted = curr;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * curr;
    if (std::abs(curr) > rescale_threshold) {
      curr /= rescale_threshold;
      next /= rescale_threshold;
      norm /= rescale_threshold;
      wanted /= rescale_threshold;
    }
  }
  norm += curr;
  return wanted / norm;
}

}  // namespace

double bessel_j(int n, double x) {
  if (!std::isfinite(x) || std::abs(x) > max_argument) {
    throw std::domain_error("bessel_j: |x| > 50 is outside the validated range (x = " +
                            std::to_string(x) + ")");
  }
  double sign = 1.0;
  if (n < 0) {
    n = -n;
    if (n % 2 != 0) sign = -sign;
  }
  if (x < 0) {
    x = -x;
    if (n % 2 != 0) sign = -sign;
  }
  return sign * bessel_j_nonneg(n, x);
}

}  // namespace floquet
