#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fconv/convolution.hpp"
#include "fconv/metrics.hpp"

namespace fconv {

/// Shared knobs of the randomized verification suites. A check tolerance is
/// derived from engine_tol and the chosen distance; everything else is
/// reproducible from rng_seed.
struct TrialConfig {
  std::uint64_t rng_seed = 42;
  int trials = 100;
  int set_size = 5;
  double p = 2.0;  // distance exponent; may be infinity
  double lo = 0.0;
  double hi = 1.0;
  int subintervals = 4;
  int samples_per_cell = 256;
  double lambda_lo = 0.1;
  double lambda_hi = 0.49;
  double engine_tol = 1e-10;
  int max_iter = 600;

  NormSpec norm() const { return NormSpec::lp(p); }
  Partition partition() const { return Partition::uniform(lo, hi, subintervals); }
};

struct CheckResult {
  std::string name;
  int trials = 0;
  int violations = 0;
  double worst_slack = 0.0;  // min over trials of (rhs + tolerance - lhs)
  double tolerance = 0.0;    // largest comparison tolerance used
};

struct SuiteReport {
  std::string suite;
  TrialConfig config;
  std::vector<CheckResult> checks;
  std::map<std::string, std::vector<double>> series;

  int total_violations() const;
  nlohmann::json to_json() const;
};

/// Contraction of the convolution toward the seed: the distance bound on
/// dist(f*b, f), exactness when base equals seed, and exactness under null
/// scale functions.
SuiteReport verify_contraction_bounds(const TrialConfig& tc);

/// Joint continuity in seed and base: the two partial Lipschitz bounds,
/// their combination, and the product-space norm bound.
SuiteReport verify_lipschitz_bounds(const TrialConfig& tc);

/// The null-seed and null-base operators: norm and identity-distance
/// bounds, the self-referential bound, lower bounds, the signed-constant
/// equality, and decay of repeated null-seed convolution. The primary
/// checks run in the sup norm, where the defining identities bind
/// samplewise on the grid; "_lp" twins honor tc.p with a discretization
/// allowance.
SuiteReport verify_partial_null(const TrialConfig& tc);

/// Distance bounds for one concrete pair of convolution sets (checks that
/// need no second pair of sets).
SuiteReport verify_set_inequalities(const FunctionSet& seed_set, const FunctionSet& base_set,
                                    const GridFunction& f, const GridFunction& b,
                                    const ScaleVector& scale, const TrialConfig& tc);

/// Randomized driver over random compact set pairs; adds the swapped-set
/// Hausdorff bounds that need two pairs.
SuiteReport verify_set_inequalities(const TrialConfig& tc);

/// Membership of shared elements in convolution sets, for one concrete
/// pair of sets sharing a scale vector.
SuiteReport verify_convolution_set_membership(const FunctionSet& seed_set,
                                              const FunctionSet& base_set,
                                              const ScaleVector& scale, const TrialConfig& tc);

SuiteReport verify_convolution_set_membership(const TrialConfig& tc);

/// Node interpolation: the closed node recursion against the data, the
/// engine against the recursion, seam continuity under grid refinement,
/// and the endpoint-mismatch node bound.
SuiteReport verify_interpolation(std::span<const std::pair<double, double>> data,
                                 const TrialConfig& tc);

/// dist(f*b, f) against its vanishing envelope along a schedule of
/// contraction factors.
SuiteReport lambda_convergence_study(const GridFunction& f, const GridFunction& b,
                                     std::span<const double> lambdas, const TrialConfig& tc);

/// Every suite with its default inputs, in a fixed order.
std::vector<SuiteReport> run_all_suites(const TrialConfig& tc);

std::vector<std::pair<double, double>> default_interpolation_data(double lo, double hi);

/// Trial generators (exposed for tests). Scale draws attain their sup on
/// the coarse grid, so the reported contraction factor is exact.
GridFunction random_trig_poly(std::mt19937_64& rng, const Partition& partition,
                              int samples_per_cell);
GridFunction random_piecewise_linear(std::mt19937_64& rng, const Partition& partition,
                                     int samples_per_cell);
ScaleVector random_scale(std::mt19937_64& rng, const Partition& partition, int samples_per_cell,
                         double lambda);
ScaleVector random_signed_constant_scale(std::mt19937_64& rng, const Partition& partition,
                                         int samples_per_cell, double lambda);
ScaleVector random_constant_scale(std::mt19937_64& rng, const Partition& partition,
                                  int samples_per_cell, double lambda_cap);

}  // namespace fconv
