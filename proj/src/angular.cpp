#include "dirion/angular.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace dirion {

namespace {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

bool triangle(int a, int b, int c) {
  return c >= std::abs(a - b) && c <= a + b && ((a + b + c) % 2 == 0);
}

int sign_of_power(int exponent) { return (exponent % 2 == 0) ? 1 : -1; }

int l_of(int kappa) { return kappa < 0 ? -kappa - 1 : kappa; }
int two_j_of(int kappa) { return 2 * std::abs(kappa) - 1; }

}  // namespace

double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3, bool* valid) {
  const bool legal = j1 >= 0 && j2 >= 0 && j3 >= 0 && std::abs(m1) <= j1 && std::abs(m2) <= j2 &&
                     std::abs(m3) <= j3 && ((j1 + m1) % 2 == 0) && ((j2 + m2) % 2 == 0) &&
                     ((j3 + m3) % 2 == 0);
  if (valid != nullptr) *valid = legal;
  if (!legal) return 0.0;
  if (m1 + m2 + m3 != 0 || !triangle(j1, j2, j3)) return 0.0;

  // Racah formula in integer (undoubled) variables.
  const int a = (j1 + j2 - j3) / 2;
  const int b = (j1 - j2 + j3) / 2;
  const int c = (-j1 + j2 + j3) / 2;
  const int big = (j1 + j2 + j3) / 2 + 1;
  const double log_delta =
      0.5 * (log_factorial(a) + log_factorial(b) + log_factorial(c) - log_factorial(big));
  const double log_m = 0.5 * (log_factorial((j1 + m1) / 2) + log_factorial((j1 - m1) / 2) +
                              log_factorial((j2 + m2) / 2) + log_factorial((j2 - m2) / 2) +
                              log_factorial((j3 + m3) / 2) + log_factorial((j3 - m3) / 2));

  const int t_min = std::max({0, (j2 - j3 - m1) / 2, (j1 - j3 + m2) / 2});
  const int t_max = std::min({a, (j1 - m1) / 2, (j2 + m2) / 2});
  double sum = 0.0;
  for (int t = t_min; t <= t_max; ++t) {
    const double lt = log_factorial(t) + log_factorial((j3 - j2 + m1) / 2 + t) +
                      log_factorial((j3 - j1 - m2) / 2 + t) + log_factorial(a - t) +
                      log_factorial((j1 - m1) / 2 - t) + log_factorial((j2 + m2) / 2 - t);
    sum += sign_of_power(t) * std::exp(log_delta + log_m - lt);
  }
  return sign_of_power((j1 - j2 - m3) / 2) * sum;
}

int delta_fi(int kappa_f, int kappa_i) { return kappa_f - kappa_i; }

int delta_fi_j_phased(int kappa_f, int kappa_i) {
  const int dj = (two_j_of(kappa_f) - two_j_of(kappa_i)) / 2;
  return sign_of_power(std::abs(dj)) * (kappa_f - kappa_i);
}

AngularFactor angular_rel(RelQuantumNumbers f, RelQuantumNumbers i) {
  AngularFactor out;
  out.delta_m = f.two_m == i.two_m;
  out.delta_l = std::abs(l_of(f.kappa) - l_of(i.kappa)) == 1;
  if (!out.delta_m || !out.delta_l) return out;
  const int jf = two_j_of(f.kappa), ji = two_j_of(i.kappa);
  // (-1)^(j_f - m_f) (-1)^(j_i + 1/2): both exponents are integers
  const int phase = sign_of_power((jf - f.two_m) / 2) * sign_of_power((ji + 1) / 2);
  out.value = phase * std::sqrt(static_cast<double>((jf + 1) * (ji + 1))) *
              wigner3j(jf, 2, ji, -f.two_m, 0, i.two_m) * wigner3j(jf, 2, ji, -1, 0, 1);
  return out;
}

AngularFactor angular_nonrel(int l_f, int m_f, int l_i, int m_i) {
  AngularFactor out;
  out.delta_m = m_f == m_i;
  out.delta_l = std::abs(l_f - l_i) == 1;
  if (!out.delta_m || !out.delta_l) return out;
  const int phase = sign_of_power(std::abs(l_f - m_f)) * sign_of_power(l_f);
  out.value = phase * std::sqrt(static_cast<double>((2 * l_f + 1) * (2 * l_i + 1))) *
              wigner3j(2 * l_f, 2, 2 * l_i, -2 * m_f, 0, 2 * m_i) *
              wigner3j(2 * l_f, 2, 2 * l_i, 0, 0, 0);
  return out;
}

}  // namespace dirion
