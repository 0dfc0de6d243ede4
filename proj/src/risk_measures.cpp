#include "pelvar/risk_measures.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "pelvar/errors.hpp"

namespace pelvar {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEdge = 1e-9;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

void require_theta(double theta, const char* where) {
  if (!(theta > 0.0)) throw DomainError(std::string(where) + ": theta must be positive, got " + fmt(theta));
}

}  // namespace

const Sample* RiskSource::sample() const {
  const auto* ptr = std::get_if<std::shared_ptr<const Sample>>(&impl_);
  return ptr ? ptr->get() : nullptr;
}

double RiskSource::var(double p) const {
  if (const auto* m = model()) return m->quantile(p);
  return empirical_quantile(*sample(), p);
}

double RiskSource::es(double p) const {
  if (const auto* m = model()) return m->es(p);
  return empirical_es(*sample(), p);
}

double RiskSource::mean() const {
  if (const auto* m = model()) return m->mean();
  return sample()->mean();
}

double RiskSource::dx_lower_bound() const {
  if (const auto* m = model()) return m->dx_lower_bound();
  return empirical_dx_lower_bound(*sample());
}

double fes(const RiskSource& source, double p, double theta) {
  require_level(p, "fes");
  require_theta(theta, "fes");
  const double m = source.mean();
  if (std::isinf(theta)) return m;
  const double tail = 1.0 - p;
  return m + tail * (source.es(p) - m) / (tail + theta);
}

double theta_index(const RiskSource& source, double p) {
  require_level(p, "theta_index");
  const double bound = source.dx_lower_bound();
  if (!(p > bound)) {
    throw DomainError("theta_index: p=" + fmt(p) + " is outside D_X; need p > " + fmt(bound));
  }
  const double v = source.var(p);
  const double m = source.mean();
  if (!(v > m)) return kInf;  // denominator vanishes at the D_X boundary
  return (1.0 - p) * (source.es(p) - v) / (v - m);
}

double pelvar(const RiskSource& source, double p) { return fes(source, p, theta_index(source, p)); }

double solve_p_theta(const RiskSource& source, double theta) {
  require_theta(theta, "solve_p_theta");
  // theta_index decreases from +inf at the D_X bound to 0 as p -> 1.
  double lo = source.dx_lower_bound() + kEdge;
  double hi = 1.0 - kEdge;
  if (!(lo < hi)) throw ComputationError("solve_p_theta: D_X is empty");
  auto g = [&](double p) { return theta_index(source, p) - theta; };
  double g_lo = g(lo);
  double g_hi = g(hi);
  if (!(g_lo >= 0.0 && g_hi <= 0.0)) {
    throw ComputationError("solve_p_theta: cannot bracket theta=" + fmt(theta) + " (theta at " + fmt(lo) +
                           " is " + fmt(g_lo + theta) + ", at " + fmt(hi) + " is " + fmt(g_hi + theta) + ")");
  }
  if (g_lo == 0.0) return lo;
  if (g_hi == 0.0) return hi;
  for (int it = 0; it < 400; ++it) {
    double mid;
    if (hi - lo > 1e-4 || !std::isfinite(g_lo)) {
      mid = 0.5 * (lo + hi);
    } else {
      // Secant inside the bracket, bisection if it lands too close to an end.
      mid = hi - g_hi * (hi - lo) / (g_hi - g_lo);
      const double guard = 0.01 * (hi - lo);
      if (!(mid > lo + guard && mid < hi - guard)) mid = 0.5 * (lo + hi);
    }
    if (!(mid > lo && mid < hi)) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if (gm > 0.0) {
      lo = mid;
      g_lo = gm;
    } else {
      hi = mid;
      g_hi = gm;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return std::abs(g_lo) < std::abs(g_hi) ? lo : hi;
}

FesMaximum fes_maximizer(const RiskSource& source, double theta) {
  require_theta(theta, "fes_maximizer");
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = kEdge;
  double b = 1.0 - kEdge;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fes(source, c, theta);
  double fd = fes(source, d, theta);
  while (b - a > 1e-12) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fes(source, c, theta);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fes(source, d, theta);
    }
  }
  const double p = 0.5 * (a + b);
  return {p, fes(source, p, theta)};
}

ThetaOrderResult theta_order_holds(const RiskSource& x, const RiskSource& y, const std::vector<double>& grid) {
  const double bound = std::max(x.dx_lower_bound(), y.dx_lower_bound());
  ThetaOrderResult out;
  for (double p : grid) {
    require_level(p, "theta_order_holds");
    if (p > bound) out.levels.push_back(p);
  }
  if (out.levels.empty()) {
    throw DomainError("theta_order_holds: grid has no level above the common D_X bound " + fmt(bound));
  }
  const double mx = x.mean();
  const double my = y.mean();
  out.holds = true;
  out.pointwise_holds = true;
  for (double p : out.levels) {
    out.ratio.push_back((y.es(p) - my) / (x.es(p) - mx));
    out.theta_x.push_back(theta_index(x, p));
    out.theta_y.push_back(theta_index(y, p));
    if (out.theta_x.back() > out.theta_y.back() * (1.0 + 1e-10)) out.pointwise_holds = false;
  }
  for (std::size_t i = 1; i < out.ratio.size(); ++i) {
    if (out.ratio[i] < out.ratio[i - 1] - 1e-10 * std::abs(out.ratio[i - 1])) out.holds = false;
  }
  return out;
}

RiskAssessment assess(const RiskSource& source, double p, std::optional<double> flexibility) {
  RiskAssessment r;
  r.p = p;
  r.var = source.var(p);
  r.es = source.es(p);
  r.mean = source.mean();
  r.theta = theta_index(source, p);
  r.pelvar = fes(source, p, r.theta);
  r.fes = flexibility ? fes(source, p, *flexibility) : r.pelvar;
  return r;
}

}  // namespace pelvar
