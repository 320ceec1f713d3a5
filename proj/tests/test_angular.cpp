#include <cmath>
#include <initializer_list>

#include "doctest.h"
#include "dirion/angular.hpp"

using namespace dirion;

namespace {

// Clebsch-Gordan <l ml; 1/2 ms | j m> in closed form (all args doubled).
double cg_spin_half(int two_l, int two_ml, int two_ms, int two_j, int two_m) {
  if (two_ml + two_ms != two_m) return 0.0;
  const double l = 0.5 * two_l, m = 0.5 * two_m;
  if (two_j == two_l + 1) {
    return two_ms > 0 ? std::sqrt((l + m + 0.5) / (2 * l + 1)) : std::sqrt((l - m + 0.5) / (2 * l + 1));
  }
  return two_ms > 0 ? -std::sqrt((l - m + 0.5) / (2 * l + 1)) : std::sqrt((l + m + 0.5) / (2 * l + 1));
}

// <Y_lp m | cos theta | Y_l m>
double ycos(int lp, int l, int m) {
  if (lp == l + 1) return std::sqrt(double((l + 1) * (l + 1) - m * m) / ((2 * l + 1) * (2 * l + 3)));
  if (lp == l - 1) return std::sqrt(double(l * l - m * m) / ((2 * l - 1) * (2 * l + 1)));
  return 0.0;
}

int l_of(int kappa) { return kappa < 0 ? -kappa - 1 : kappa; }
int two_j_of(int kappa) { return 2 * std::abs(kappa) - 1; }

// <Omega_kf m | cos theta | Omega_ki m> summed over the spin projection
double spinor_cos(int kf, int ki, int two_m) {
  const int lf = l_of(kf), li = l_of(ki);
  double s = 0.0;
  for (int two_ms : {1, -1}) {
    const int two_ml = two_m - two_ms;
    if (std::abs(two_ml) > 2 * lf || std::abs(two_ml) > 2 * li) continue;
    s += cg_spin_half(2 * lf, two_ml, two_ms, two_j_of(kf), two_m) *
         cg_spin_half(2 * li, two_ml, two_ms, two_j_of(ki), two_m) * ycos(lf, li, two_ml / 2);
  }
  return s;
}

}  // namespace

TEST_CASE("3j closed forms") {
  CHECK(wigner3j(2, 2, 0, 0, 0, 0) == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(wigner3j(1, 2, 1, -1, 0, 1) == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-14));
  CHECK(wigner3j(2, 2, 6, 0, 0, 0) == 0.0);
  // (j j 0; m -m 0) = (-1)^(j-m) / sqrt(2j+1)
  for (int tj = 0; tj <= 9; ++tj)
    for (int tm = -tj; tm <= tj; tm += 2) {
      const double expect = (((tj - tm) / 2) % 2 ? -1.0 : 1.0) / std::sqrt(tj + 1.0);
      CHECK(wigner3j(tj, tj, 0, tm, -tm, 0) == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("3j against closed-form spin-1/2 Clebsch-Gordan coefficients") {
  // <l ml 1/2 ms | j m> = (-1)^(l - 1/2 + m) sqrt(2j+1) (l 1/2 j; ml ms -m)
  for (int l = 0; l <= 6; ++l)
    for (int tj : {2 * l - 1, 2 * l + 1}) {
      if (tj < 0) continue;
      for (int tm = -tj; tm <= tj; tm += 2)
        for (int tms : {1, -1}) {
          const int tml = tm - tms;
          if (std::abs(tml) > 2 * l) continue;
          const int ph = (2 * l - 1 + tm) / 2;
          const double via3j = (ph % 2 ? -1.0 : 1.0) * std::sqrt(tj + 1.0) * wigner3j(2 * l, 1, tj, tml, tms, -tm);
          CHECK(via3j == doctest::Approx(cg_spin_half(2 * l, tml, tms, tj, tm)).epsilon(1e-13).scale(1.0));
        }
    }
}

TEST_CASE("3j orthogonality") {
  const int j1 = 5, j2 = 3;  // 5/2 x 3/2
  for (int j3 = 2; j3 <= 8; j3 += 2)
    for (int j3p = 2; j3p <= 8; j3p += 2)
      for (int m3 = -std::min(j3, j3p); m3 <= std::min(j3, j3p); m3 += 2) {
        double s = 0.0;
        for (int m1 = -j1; m1 <= j1; m1 += 2) {
          const int m2 = -m1 - m3;
          if (std::abs(m2) > j2) continue;
          s += (j3 + 1) * wigner3j(j1, j2, j3, m1, m2, m3) * wigner3j(j1, j2, j3p, m1, m2, m3);
        }
        CHECK(s == doctest::Approx(j3 == j3p ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
      }
}

TEST_CASE("3j flags illegal arguments") {
  bool valid = true;
  CHECK(wigner3j(1, 2, 1, 3, 0, -3, &valid) == 0.0);
  CHECK_FALSE(valid);
  CHECK(wigner3j(2, 2, 2, 0, 0, 0, &valid) == 0.0);  // odd J sum
  CHECK(valid);
}

TEST_CASE("relativistic angular factor equals the spinor cos(theta) integral") {
  for (int kf = -5; kf <= 5; ++kf)
    for (int ki = -5; ki <= 5; ++ki) {
      if (kf == 0 || ki == 0) continue;
      for (int tm : {1, 3}) {
        if (tm > two_j_of(kf) || tm > two_j_of(ki)) continue;
        const AngularFactor a = angular_rel({kf, tm}, {ki, tm});
        CHECK(a.value == doctest::Approx(spinor_cos(kf, ki, tm)).epsilon(1e-13).scale(1.0));
      }
    }
}

TEST_CASE("relativistic selection rules") {
  CHECK(angular_rel({1, 1}, {-1, 1}).value != 0.0);  // s1/2 - p1/2
  CHECK(angular_rel({1, 1}, {-1, 1}).value == doctest::Approx(-1.0 / 3.0));
  const AngularFactor same_l = angular_rel({-2, 1}, {1, 1});  // p3/2, p1/2
  CHECK(same_l.value == 0.0);
  CHECK_FALSE(same_l.delta_l);
  const AngularFactor diff_m = angular_rel({-2, 3}, {-1, 1});
  CHECK(diff_m.value == 0.0);
  CHECK_FALSE(diff_m.delta_m);
}

TEST_CASE("nonrelativistic angular factor") {
  CHECK(angular_nonrel(1, 0, 0, 0).value == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(angular_nonrel(1, 0, 1, 0).value == 0.0);
  CHECK(angular_nonrel(1, 1, 0, 0).value == 0.0);
  for (int l = 0; l < 8; ++l)
    for (int m = -l; m <= l; ++m) {
      CHECK(std::abs(angular_nonrel(l + 1, m, l, m).value) ==
            doctest::Approx(std::abs(angular_nonrel(l, m, l + 1, m).value)).epsilon(1e-14));
      CHECK(angular_nonrel(l + 1, m, l, m).value == doctest::Approx(ycos(l + 1, l, m)).epsilon(1e-13));
    }
}

TEST_CASE("velocity weight: printed j-phased form versus kappa difference") {
  CHECK(delta_fi_j_phased(-2, -1) == 1);
  CHECK(delta_fi(-2, -1) == -1);
  // equal j: the two agree
  CHECK(delta_fi_j_phased(1, -1) == delta_fi(1, -1));
  CHECK(delta_fi_j_phased(-2, 2) == delta_fi(-2, 2));
  // |j_f - j_i| = 1: opposite signs
  CHECK(delta_fi_j_phased(-3, 2) == -delta_fi(-3, 2));
}
