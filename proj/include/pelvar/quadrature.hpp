#pragma once

#include <functional>

namespace pelvar::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

struct Tolerance {
  double relative = 1e-12;
  double absolute = 0.0;
  int max_subdivisions = 2000;
};

/// Adaptive Gauss-Kronrod (G7/K15) on the finite interval [a, b].
/// Throws ComputationError when the error estimate cannot be brought below
/// the tolerance within the subdivision budget.
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     Tolerance tol = {});

/// Integral of f over [a, +inf), summed over doubling panels [a, a+1],
/// [a+1, a+3], ... until a panel contributes less than the relative tolerance.
/// Intended for integrands with at least exponential-like decay.
Result gauss_kronrod_upper(const std::function<double(double)>& f, double a,
                           Tolerance tol = {}, double cutoff = 700.0);

/// Mean of the quantile function over (p, 1):
///   (1/(1-p)) * int_p^1 Q(u) du.
/// `tail_quantile(s)` must return Q(1 - s) for tail probability s, so that
/// the substitution s = (1-p) e^{-t} never has to round u towards 1.
Result upper_quantile_mean(const std::function<double(double)>& tail_quantile, double p,
                           double tail_p, Tolerance tol = {});

}  // namespace pelvar::quad
