#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pelvar/distributions.hpp"
#include "pelvar/euler_allocation.hpp"

namespace pelvar {

enum class CopulaKind { Gaussian, StudentT, Gumbel };

/// Gaussian and t copulas use a compound-symmetric correlation matrix
/// (unit diagonal, common off-diagonal r); Gumbel has intensity xi >= 1.
struct CopulaSpec {
  CopulaKind kind = CopulaKind::Gaussian;
  double r = 0.0;
  int nu = 2;
  double xi = 1.0;

  static CopulaSpec gaussian(double r);
  static CopulaSpec student_t(double r, int nu = 2);
  static CopulaSpec gumbel(double xi);

  /// Throws DomainError when the d x d correlation matrix is not positive definite.
  void validate(std::size_t d) const;
  std::string describe() const;
};

/// Lower Cholesky factor of the d x d compound-symmetric matrix, row-major.
std::vector<double> compound_cholesky(double r, std::size_t d);

/// n joint draws with the given marginals. `repetition` selects an
/// independent family of RNG streams under the same seed.
PortfolioSample sample_copula(const CopulaSpec& spec, const std::vector<LossModel>& marginals, std::size_t n,
                              std::uint64_t seed, std::uint64_t repetition = 0);

/// Latent uniforms only (n x d, column-wise); used for dependence diagnostics.
std::vector<std::vector<double>> sample_copula_uniforms(const CopulaSpec& spec, std::size_t d, std::size_t n,
                                                        std::uint64_t seed, std::uint64_t repetition = 0);

struct ScenarioConfig {
  std::vector<LossModel> marginals;
  std::vector<std::string> labels;
  CopulaSpec copula;
  std::size_t n = 1000000;
  std::vector<double> levels{0.9, 0.95, 0.975, 0.99, 0.995};
  std::uint64_t seed = 20240101;
};

/// Marginal sets (a)-(d) of the three-component allocation study; every
/// component has mean 100.
std::vector<LossModel> scenario_marginals(char scenario);
/// Default stress-test marginals Exp(0.01), N(100, 20), ParetoII(2, 100).
std::vector<LossModel> stress_marginals();

std::vector<AllocationReport> run_allocation_scenario(const ScenarioConfig& cfg, VarScheme scheme);

struct StressCell {
  double p = 0.0;
  int var = 0;
  int pelvar = 0;
  int es = 0;
};

struct StressReport {
  CopulaSpec copula;
  std::size_t n = 0;
  int repetitions = 0;
  std::uint64_t seed = 0;
  std::vector<StressCell> cells;
};

/// For each copula, counts repetitions in which the aggregate's empirical
/// VaR, PELVaR and ES exceed the sum of the marginal values.
std::vector<StressReport> run_stress(const std::vector<LossModel>& marginals, const std::vector<CopulaSpec>& copulas,
                                     const std::vector<double>& levels, std::size_t n, int repetitions,
                                     std::uint64_t seed);

}  // namespace pelvar
