// Reference values (cdf, quantiles, expected shortfall, mean) were computed once
// with scipy.stats plus scipy.integrate.quad and frozen below.

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "pelvar/distributions.hpp"
#include "pelvar/errors.hpp"
#include "pelvar/special_functions.hpp"

using namespace pelvar;

namespace {

struct Oracle {
  std::string family;
  std::vector<double> params;
  double x;
  // cdf(x), Q(0.3), Q(0.95), Q(0.995), ES(0.95), ES(0.995), mean
  std::vector<double> values;
};

const std::vector<Oracle> kOracles = {
    {"uniform", {0.0, 1.0}, 0.6, {0.6, 0.3, 0.95, 0.995, 0.975, 0.9974999999999999, 0.5}},
    {"normal", {100.0, 10.0}, 112.0,
     {0.8849303297782918, 94.75599487291959, 116.44853626951472, 125.758293035489, 120.62712807507437,
      128.91948605383487, 100.0}},
    {"exp", {0.01}, 250.0,
     {0.9179150013761012, 35.66749439387324, 299.573227355399, 529.8317366548035, 399.57322735539907,
      629.8317366548036, 100.0}},
    {"t", {4.0, 100.0, 10.0}, 90.0,
     {0.1869504831500295, 94.31350936961448, 121.31846786326649, 146.04094871415896, 132.02870402094877,
      163.24830695975467, 100.0}},
    {"lognormal", {0.0, 1.0}, 2.5,
     {0.8202427861042146, 0.5919101006095541, 5.180251602233013, 13.142211523154549, 8.55722686679671,
      18.971035562845106, 1.6487212707001282}},
    {"gamma", {0.5, 1.0}, 0.7,
     {0.7632764293621428, 0.07423593091627269, 1.920729410347062, 3.9397192883112084, 2.7910046378359747,
      4.8570179737596115, 0.5}},
    {"gamma", {20.0, 2.0}, 11.0,
     {0.6939729794378251, 8.717984831737736, 13.939619819721756, 16.691490458200978, 15.160882151235587,
      17.71548552696071, 10.0}},
    {"weibull", {1.5, 1.0}, 0.8,
     {0.5110728376249136, 0.5029387149157185, 2.0781106375345564, 3.039195558322953, 2.5029195156110133,
      3.4018982394605017, 0.9027452929509335}},
    {"weibull", {0.75, 2.0}, 0.4,
     {0.5708277865930305, 0.12647367548053717, 2.1592719109171403, 4.618354820864982, 3.2109813281101016,
      5.84648971989531, 0.5953196743794994}},
    {"pareto2", {2.0, 100.0}, 150.0,
     {0.8400000000000001, 19.522860933439368, 347.2135954999577, 1314.2135623730942, 794.4271909999155,
      2728.4271247461897, 100.0}},
    {"pareto2", {1.5, 1.0}, 3.0,
     {0.875, 0.26843428820371534, 6.368062997280768, 33.199518933533916, 21.10418899184226, 101.59855680060154,
      2.0}},
    {"gev", {0.0, 1.0, 0.0}, 1.2,
     {0.7399340547836062, -0.18562675886236574, 2.9701952490421637, 5.295812142535025, 3.9830546436940355,
      6.297065626519744, 0.5772156649015329}},
    {"gev", {0.0, 1.0, 0.4}, 2.0,
     {0.7944953499418055, -0.17890274565582, 5.7019245790292645, 18.292983309137234, 11.257921882931964,
      32.17669563100457, 1.2229806220320434}},
    {"gev", {0.0, 1.0, -1.0}, 0.5,
     {0.6065306597126334, -0.2039728043259361, 0.9487067056124494, 0.9949874581764557, 0.9745725933634604,
      0.997495822885309, 0.0}},
};

LossModel build(const Oracle& o) {
  const auto& q = o.params;
  if (o.family == "uniform") return LossModel::uniform(q[0], q[1]);
  if (o.family == "normal") return LossModel::normal(q[0], q[1]);
  if (o.family == "exp") return LossModel::exponential(q[0]);
  if (o.family == "t") return LossModel::student_t(q[0], q[1], q[2]);
  if (o.family == "lognormal") return LossModel::lognormal(q[0], q[1]);
  if (o.family == "gamma") return LossModel::gamma(q[0], q[1]);
  if (o.family == "weibull") return LossModel::weibull(q[0], q[1]);
  if (o.family == "pareto2") return LossModel::pareto2(q[0], q[1]);
  return LossModel::gev(q[0], q[1], q[2]);
}

void expect_close(double got, double want, double rel, const std::string& what) {
  const double scale = std::max(1.0, std::abs(want));
  EXPECT_LE(std::abs(got - want), rel * scale) << what << ": got " << got << " want " << want;
}

// theta from its definition through quantile, ES and mean
double theta_by_definition(const LossModel& m, double p) {
  const double v = m.quantile(p);
  return (1.0 - p) * (m.es(p) - v) / (v - m.mean());
}

std::vector<LossModel> zoo() {
  return {LossModel::uniform(0, 1),          LossModel::normal(0, 1),         LossModel::exponential(1),
          LossModel::student_t(2),           LossModel::student_t(4),         LossModel::student_t(20),
          LossModel::lognormal(0, 0.2),      LossModel::lognormal(0, 1),      LossModel::weibull(0.75, 1),
          LossModel::weibull(1.5, 1),        LossModel::weibull(10, 1),       LossModel::gamma(0.25, 1),
          LossModel::gamma(1.5, 1),          LossModel::gamma(20, 1),         LossModel::gev(0, 1, -1),
          LossModel::gev(0, 1, 0),           LossModel::gev(0, 1, 0.2),       LossModel::gev(0, 1, 0.4),
          LossModel::pareto2(1.5, 1),        LossModel::pareto2(4, 1),        LossModel::generalized_pareto(0.3, 2),
          LossModel::generalized_pareto(-0.4, 1)};
}

}  // namespace

TEST(Distributions, MatchFrozenReferenceValues) {
  for (const auto& o : kOracles) {
    const LossModel m = build(o);
    const std::string tag = m.describe();
    expect_close(m.cdf(o.x), o.values[0], 1e-12, tag + " cdf");
    expect_close(m.quantile(0.3), o.values[1], 1e-11, tag + " Q(0.3)");
    expect_close(m.quantile(0.95), o.values[2], 1e-11, tag + " Q(0.95)");
    expect_close(m.quantile(0.995), o.values[3], 1e-11, tag + " Q(0.995)");
    expect_close(m.es(0.95), o.values[4], 1e-9, tag + " ES(0.95)");
    expect_close(m.es(0.995), o.values[5], 1e-9, tag + " ES(0.995)");
    expect_close(m.mean(), o.values[6], 1e-12, tag + " mean");
  }
}

TEST(Distributions, ClosedThetaAgreesWithDefinition) {
  for (const auto& m : zoo()) {
    for (double p : {0.9, 0.95, 0.99, 0.995}) {
      if (!(p > m.dx_lower_bound())) continue;
      const double closed = m.theta_closed(p);
      const double defined = theta_by_definition(m, p);
      EXPECT_NEAR(closed, defined, 1e-9 * std::max(1.0, defined)) << m.describe() << " p=" << p;
    }
  }
}

TEST(Distributions, QuantileInvertsCdf) {
  for (const auto& m : zoo()) {
    for (double p : {0.01, 0.3, 0.5, 0.9, 0.999}) {
      EXPECT_NEAR(m.cdf(m.quantile(p)), p, 1e-11) << m.describe() << " p=" << p;
    }
  }
}

TEST(Distributions, TailQuantileMatchesQuantile) {
  for (const auto& m : zoo()) {
    for (double s : {0.4, 0.05, 1e-3}) {
      const double a = m.tail_quantile(s);
      const double b = m.quantile(1.0 - s);
      EXPECT_NEAR(a, b, 1e-10 * std::max(1.0, std::abs(b))) << m.describe() << " s=" << s;
    }
  }
}

TEST(Distributions, PdfIntegratesCdfSlope) {
  for (const auto& m : zoo()) {
    const double x = m.quantile(0.7);
    const double h = 1e-5 * std::max(1.0, std::abs(x));
    const double slope = (m.cdf(x + h) - m.cdf(x - h)) / (2 * h);
    EXPECT_NEAR(m.pdf(x), slope, 1e-5 * std::max(1.0, slope)) << m.describe();
  }
}

TEST(Distributions, DxBoundIsCdfAtMean) {
  EXPECT_NEAR(LossModel::exponential(3).dx_lower_bound(), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_DOUBLE_EQ(LossModel::normal(5, 2).dx_lower_bound(), 0.5);
  EXPECT_DOUBLE_EQ(LossModel::uniform(-1, 3).dx_lower_bound(), 0.5);
}

TEST(Distributions, ExponentialThetaClosedForm) {
  // theta_p = (1-p) / (-ln(1-p) - 1)
  for (double p : {0.9, 0.99}) {
    EXPECT_NEAR(LossModel::exponential(0.37).theta_closed(p), (1 - p) / (-std::log(1 - p) - 1), 1e-14);
  }
}

TEST(Distributions, AffineMapKeepsTheta) {
  const auto base = LossModel::lognormal(0.1, 0.6);
  const auto moved = base.affine(3.5, -20.0);
  EXPECT_NEAR(moved.quantile(0.9), 3.5 * base.quantile(0.9) - 20.0, 1e-12);
  EXPECT_NEAR(moved.mean(), 3.5 * base.mean() - 20.0, 1e-12);
  EXPECT_NEAR(moved.theta_closed(0.97), base.theta_closed(0.97), 1e-12);
  EXPECT_THROW(base.affine(0.0, 1.0), DomainError);
  EXPECT_THROW(base.affine(-1.0, 1.0), DomainError);
}

TEST(Distributions, GeneralizedParetoThetaFormula) {
  const auto m = LossModel::generalized_pareto(0.3, 2.0);
  EXPECT_NEAR(m.theta_closed(0.95), gp_theta(0.3, 2.0, 0.95), 1e-12);
  EXPECT_NEAR(theta_by_definition(m, 0.95), gp_theta(0.3, 2.0, 0.95), 1e-9);
}

TEST(Distributions, GeneralizedParetoSpecialCases) {
  // the omega-uniform member is exactly Uniform(0, omega)
  const auto g = LossModel::gp_uniform(2.0);
  const auto u = LossModel::uniform(0.0, 2.0);
  for (double p : {0.6, 0.9, 0.99}) {
    EXPECT_NEAR(g.quantile(p), u.quantile(p), 1e-12);
    EXPECT_NEAR(g.theta_closed(p), u.theta_closed(p), 1e-12);
  }
  const auto e = LossModel::gp_exponential(0.5);
  EXPECT_NEAR(e.theta_closed(0.95), LossModel::exponential(0.5).theta_closed(0.95), 1e-12);
  const auto l = LossModel::gp_lomax(3.0, 2.0);
  EXPECT_NEAR(l.theta_closed(0.95), LossModel::pareto2(3.0, 2.0).theta_closed(0.95), 1e-12);
}

TEST(Distributions, GevInfiniteMeanRegime) {
  const auto m = LossModel::gev(0, 1, 1.5);
  EXPECT_FALSE(m.warnings().empty());
  EXPECT_TRUE(std::isinf(m.mean()));
  EXPECT_EQ(m.theta_closed(0.99), 0.0);
  EXPECT_EQ(m.dx_lower_bound(), 1.0);
}

TEST(Distributions, InvalidParametersThrow) {
  EXPECT_THROW(LossModel::uniform(1, 1), DomainError);
  EXPECT_THROW(LossModel::normal(0, 0), DomainError);
  EXPECT_THROW(LossModel::exponential(-1), DomainError);
  EXPECT_THROW(LossModel::student_t(0), DomainError);
  EXPECT_THROW(LossModel::gamma(0, 1), DomainError);
  EXPECT_THROW(LossModel::weibull(1, 0), DomainError);
  EXPECT_THROW(LossModel::pareto2(0.5, 1), DomainError);
  EXPECT_THROW(LossModel::lognormal(0, -1), DomainError);
}

TEST(Distributions, LevelsOutsideUnitIntervalThrow) {
  const auto m = LossModel::normal(0, 1);
  EXPECT_THROW(m.quantile(0.0), DomainError);
  EXPECT_THROW(m.quantile(1.0), DomainError);
  EXPECT_THROW(m.es(1.5), DomainError);
}

TEST(Distributions, ThetaOutsideDomainThrows) {
  const auto m = LossModel::exponential(1);
  EXPECT_THROW(m.theta_closed(0.5), DomainError);
}

TEST(Distributions, StudentTWithTwoDegreesHasClosedTheta) {
  const auto m = LossModel::student_t(2);
  EXPECT_NEAR(m.theta_closed(0.9), 0.1250, 5e-5);
  EXPECT_NEAR(m.theta_closed(0.9), theta_by_definition(m, 0.9), 1e-9);
}

TEST(Distributions, DescribeNamesTheFamily) {
  EXPECT_NE(LossModel::pareto2(2, 100).describe().find("ParetoII"), std::string::npos);
  EXPECT_EQ(family_name(Family::Normal), "Normal");
}
