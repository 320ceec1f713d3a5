#pragma once

namespace dirion {

// Wigner 3j symbol with all arguments given as twice their value.
// Returns 0 for triangle or projection violations; *valid (if given) is
// cleared when the arguments are not a legal set of angular momenta.
double wigner3j(int two_j1, int two_j2, int two_j3, int two_m1, int two_m2, int two_m3,
                bool* valid = nullptr);

struct AngularFactor {
  double value = 0.0;
  bool delta_m = false;  // m_f == m_i
  bool delta_l = false;  // |l_f - l_i| == 1
};

struct RelQuantumNumbers {
  int kappa;
  int two_m;
};

// Dipole angular factor between Dirac spinor states (z-component):
// (-1)^(j_f-m_f) (-1)^(j_i+1/2) sqrt((2j_f+1)(2j_i+1))
//   (j_f 1 j_i; -m_f 0 m_i)(j_f 1 j_i; -1/2 0 1/2)
AngularFactor angular_rel(RelQuantumNumbers f, RelQuantumNumbers i);

// (-1)^(l_f-m_f) (-1)^l_f sqrt((2l_f+1)(2l_i+1)) (l_f 1 l_i; -m_f 0 m_i)(l_f 1 l_i; 0 0 0)
AngularFactor angular_nonrel(int l_f, int m_f, int l_i, int m_i);

// Weight in the velocity-form radial integral,
//   <f| c alpha_z |i> = i c W_fi int [(1 + D) P_i Q_f - (1 - D) Q_i P_f] dr,
// D = kappa_f - kappa_i. Fixed by exact spinor angular integrals and the
// operator identity c<f|alpha_z|i> = i (E_f - E_i) <f|z|i>.
int delta_fi(int kappa_f, int kappa_i);

// (-1)^(j_f-j_i) (kappa_f - kappa_i). Equals delta_fi when j_f = j_i and has
// the opposite sign for |j_f - j_i| = 1, where it breaks the identity above.
int delta_fi_j_phased(int kappa_f, int kappa_i);

}  // namespace dirion
