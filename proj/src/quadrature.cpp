#include "pelvar/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "pelvar/errors.hpp"

namespace pelvar::quad {
namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double magnitude = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double lo = f(center - dx);
    const double hi = f(center + dx);
    kronrod += kWgk[j] * (lo + hi);
    magnitude += kWgk[j] * (std::abs(lo) + std::abs(hi));
    if (j % 2 == 1) gauss += kWg[j / 2] * (lo + hi);
  }
  double err = std::abs((kronrod - gauss) * half);
  // Below this the difference is rounding noise and splitting cannot help.
  if (err <= 50.0 * std::numeric_limits<double>::epsilon() * magnitude * std::abs(half)) err = 0.0;
  return {a, b, kronrod * half, err};
}

}  // namespace

Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, Tolerance tol) {
  if (a == b) return {};
  std::priority_queue<Segment> heap;
  Segment first = kronrod15(f, a, b);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  int evals = 15;
  int splits = 0;
  while (total_err > std::max(tol.absolute, tol.relative * std::abs(total))) {
    if (splits >= tol.max_subdivisions) {
      throw ComputationError("quadrature did not converge on [" + std::to_string(a) + ", " +
                             std::to_string(b) + "]: estimate " + std::to_string(total) +
                             ", error " + std::to_string(total_err) + " after " +
                             std::to_string(evals) + " evaluations");
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval cannot be split further in double precision.
      heap.push({worst.a, worst.b, worst.value, 0.0});
      total_err -= worst.error;
      continue;
    }
    const Segment left = kronrod15(f, worst.a, mid);
    const Segment right = kronrod15(f, mid, worst.b);
    evals += 30;
    ++splits;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    if (total_err < 0.0) {
      // Re-accumulate to shed drift from the running subtraction.
      total_err = 0.0;
      total = 0.0;
      std::vector<Segment> all;
      while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
      }
      for (const auto& s : all) {
        total += s.value;
        total_err += s.error;
        heap.push(s);
      }
    }
  }
  // Final pass sums segment values from scratch.
  double sum = 0.0;
  double err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {sum, err, evals};
}

Result gauss_kronrod_upper(const std::function<double(double)>& f, double a, Tolerance tol,
                           double cutoff) {
  Result acc;
  double lo = a;
  double width = 1.0;
  int quiet_panels = 0;
  while (lo < cutoff) {
    const double hi = std::min(lo + width, cutoff);
    Tolerance panel_tol = tol;
    panel_tol.absolute = std::max(tol.absolute, 0.25 * tol.relative * std::abs(acc.value));
    const Result panel = gauss_kronrod(f, lo, hi, panel_tol);
    acc.value += panel.value;
    acc.error += panel.error;
    acc.evaluations += panel.evaluations;
    if (std::abs(panel.value) <= tol.relative * std::abs(acc.value) ||
        std::abs(panel.value) <= tol.absolute) {
      if (++quiet_panels >= 2) return acc;
    } else {
      quiet_panels = 0;
    }
    lo = hi;
    width *= 2.0;
  }
  return acc;
}

Result upper_quantile_mean(const std::function<double(double)>& tail_quantile, double p,
                           double tail_p, Tolerance tol) {
  (void)p;
  // s = tail_p * e^{-t}; stop before s underflows.
  const double cutoff = std::min(700.0, std::log(tail_p) + 690.0);
  auto integrand = [&](double t) {
    const double w = std::exp(-t);
    return tail_quantile(tail_p * w) * w;
  };
  return gauss_kronrod_upper(integrand, 0.0, tol, cutoff);
}

}  // namespace pelvar::quad
