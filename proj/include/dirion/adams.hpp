#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "dirion/kernels.hpp"

namespace dirion {

struct AdamsSettings {
  double rtol = 1e-8;
  double atol = 1e-12;
  int max_order = 12;
  double initial_step = 0.0;  // 0: estimate from the first derivative
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 200'000'000;
};

void validate(const AdamsSettings& s);

struct AdamsStats {
  long steps = 0;
  long rejected = 0;
  long rhs_evals = 0;
  int highest_order = 0;
  double smallest_step = std::numeric_limits<double>::infinity();
  double largest_step = 0.0;
};

// Variable-order, variable-step Adams predictor-corrector (PECE) for a
// complex system stored split: y = [re(0..m), im(0..m)]. Coefficients are
// rebuilt every step by integrating the Lagrange basis over the actual
// (non-uniform) history, so step changes need no restart. Local error is
// controlled component-wise: max_i |err_i| / (atol + rtol |y_i|) <= 1.
class AdamsIntegrator {
 public:
  using Rhs = std::function<void(double t, const double* y, double* dy)>;

  AdamsIntegrator(std::size_t m, Rhs rhs, AdamsSettings settings,
                  const kernels::KernelTable& k = kernels::active_kernels());

  void start(double t0, const std::vector<double>& y0);
  // Integrates up to exactly t_end; history survives for the next call.
  void advance_to(double t_end);

  double time() const { return t_; }
  const std::vector<double>& state() const { return y_; }
  const AdamsStats& stats() const { return stats_; }
  int order() const { return order_; }
  double step() const { return h_; }

 private:
  void predictor_coefficients(int q, double h, std::vector<double>& beta) const;
  void corrector_coefficients(int q, double h, std::vector<double>& gamma) const;
  void combine(const std::vector<double>& base, double h, const std::vector<double>& coef,
               const double* extra, int q, std::vector<double>& out) const;
  double error_norm(const std::vector<double>& a, const std::vector<double>& b) const;
  double initial_step_guess(double span);

  std::size_t m_;
  Rhs rhs_;
  AdamsSettings set_;
  const kernels::KernelTable* k_;

  double t_ = 0.0;
  double h_ = 0.0;
  int order_ = 1;
  int since_order_change_ = 0;
  std::vector<double> y_;
  // history of derivatives, newest first; times alongside
  std::vector<std::vector<double>> f_;
  std::vector<double> tf_;
  int filled_ = 0;
  AdamsStats stats_;

  std::vector<double> yp_, yc_, fp_, scratch_;
};

}  // namespace dirion
