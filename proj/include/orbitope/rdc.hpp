#pragma once

// The residual-dipolar-coupling data path that motivates the hull machinery:
// the forward model delta = (C/|r|^5) r^T chi r, the mean tensor of an
// orientation measure, least-squares estimation of the mean tensor from
// observations, and the maximal weight p_max an orientation can carry in any
// measure reproducing a given mean.

#include <cstdint>
#include <vector>

#include "orbitope/pair_hull.hpp"
#include "orbitope/single_ion.hpp"
#include "orbitope/tensor.hpp"

namespace orbitope {

struct DipoleObservation {
  Vec3 r{};           // displacement vector, nonzero
  double delta = 0.0; // measured mean coupling
  double C = 1.0;     // physical constant
};

// (C/|r|^5) r^T chi r.  Throws std::invalid_argument for |r| = 0.
double forward_rdc(const AnisoTensor& chi, const Vec3& r, double C = 1.0);

// Discrete mean sum p_j act(R_j, chi); always a member of the hull of chi.
AnisoTensor mean_tensor(const AtomicMeasure& measure, const AnisoTensor& chi);

struct EstimateResult {
  AnisoTensor chi;
  double rms_residual = 0.0;
  double condition = 0.0;      // condition number of the design matrix
  bool ill_conditioned = false;  // condition above 1e8
};

// Linear least squares for the 5 tensor coordinates; each observation
// contributes one row.  Throws std::domain_error with fewer than 5
// observations or a rank-deficient design.
EstimateResult estimate_tensor(const std::vector<DipoleObservation>& obs);

// Largest p with (target - p act(R, chi)) / (1 - p) still inside the hull
// (bisection to p_tol; equals 1 exactly when target = act(R, chi)).
// Throws std::domain_error when the target is outside.
double p_max(const HullSpec& hull, const AnisoTensor& target,
             const Rotation& rotation, double p_tol = 1e-10);

// Upper bound on the pair p_max: the minimum of the single-ion p_max over a
// sweep of projection directions.  Monotone non-increasing as the sweep is
// refined (for nested sweeps).  Throws std::domain_error if the necessary
// membership sweep fails.
double p_max_pair_upper(const TensorPair& pair, const TensorPair& target,
                        const Rotation& rotation, int n_alpha = 720);

// Synthetic observations from a mean tensor: random unit dipoles with
// additive gaussian noise on delta (seeded).
std::vector<DipoleObservation> synthesize_observations(
    const AnisoTensor& mean, int count, double noise_sigma, double C,
    std::uint64_t seed);

}  // namespace orbitope
