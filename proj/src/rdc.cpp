#include "orbitope/rdc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "orbitope/numeric.hpp"

namespace orbitope {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

// Row of the linear model: delta = (C/|r|^5) r^T chi(v,w,x,y,z) r expanded
// in the 5 coordinates.
std::array<double, 5> design_row(const Vec3& r, double C) {
  double n = norm(r);
  double f = C / (n * n * n * n * n);
  return {f * (r[0] * r[0] - 0.5 * (r[1] * r[1] + r[2] * r[2])),
          f * 2.0 * r[0] * r[1],
          f * 2.0 * r[0] * r[2],
          f * (r[1] * r[1] - r[2] * r[2]),
          f * 2.0 * r[1] * r[2]};
}

}  // namespace

double forward_rdc(const AnisoTensor& chi, const Vec3& r, double C) {
  double n = norm(r);
  if (n == 0.0)
    throw std::invalid_argument("dipole displacement must be nonzero");
  Vec3 mr = chi.matrix() * r;
  return C / (n * n * n * n * n) * dot(r, mr);
}

AnisoTensor mean_tensor(const AtomicMeasure& measure, const AnisoTensor& chi) {
  return evaluate(measure, chi);
}

EstimateResult estimate_tensor(const std::vector<DipoleObservation>& obs) {
  int n = static_cast<int>(obs.size());
  if (n < 5)
    throw std::domain_error("tensor estimation needs at least 5 observations");
  std::vector<double> a;
  a.reserve(static_cast<std::size_t>(n) * 5);
  std::vector<double> rhs;
  rhs.reserve(static_cast<std::size_t>(n));
  for (const auto& o : obs) {
    if (norm(o.r) == 0.0)
      throw std::invalid_argument("dipole displacement must be nonzero");
    auto row = design_row(o.r, o.C);
    for (double c : row) a.push_back(c);
    rhs.push_back(o.delta);
  }
  std::vector<double> sv = num::singular_values(a, n, 5);
  if (num::rank_from_singular(sv, 1e-8) < 5)
    throw std::domain_error("design matrix is rank-deficient");
  EstimateResult out;
  out.condition = sv.front() / sv.back();
  out.ill_conditioned = out.condition > 1e8;

  // Normal equations; the system is 5x5 and full rank by the check above.
  std::vector<double> ata(25, 0.0), atb(5, 0.0);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        s += a[static_cast<std::size_t>(k * 5 + i)] * a[static_cast<std::size_t>(k * 5 + j)];
      ata[static_cast<std::size_t>(i * 5 + j)] = s;
    }
    double s = 0.0;
    for (int k = 0; k < n; ++k)
      s += a[static_cast<std::size_t>(k * 5 + i)] * rhs[static_cast<std::size_t>(k)];
    atb[static_cast<std::size_t>(i)] = s;
  }
  std::vector<double> x = num::solve_dense(ata, atb, 5);
  out.chi = AnisoTensor::from_coords({x[0], x[1], x[2], x[3], x[4]});
  double ss = 0.0;
  for (int k = 0; k < n; ++k) {
    double pred = 0.0;
    for (int i = 0; i < 5; ++i)
      pred += a[static_cast<std::size_t>(k * 5 + i)] * x[static_cast<std::size_t>(i)];
    double d = pred - rhs[static_cast<std::size_t>(k)];
    ss += d * d;
  }
  out.rms_residual = std::sqrt(ss / n);
  return out;
}

double p_max(const HullSpec& hull, const AnisoTensor& target,
             const Rotation& rotation, double p_tol) {
  if (membership(hull, target).region == Region::outside)
    throw std::domain_error("target lies outside the hull");
  AnisoTensor vertex = act(rotation, hull.chi);
  double scale = std::max(1.0, norm_inf(vertex));
  if (norm_inf(target - vertex) <= 1e-10 * scale) return 1.0;

  // The feasible set of p is an interval containing 0, since the hull is
  // convex; the expression degenerates as p -> 1, which only happens in the
  // vertex-equality case handled above.
  auto feasible = [&](double p) {
    AnisoTensor rest = (1.0 / (1.0 - p)) * (target - p * vertex);
    return membership(hull, rest).region != Region::outside;
  };
  double lo = 0.0, hi = 1.0 - 1e-12;
  if (feasible(hi)) return hi;
  while (hi - lo > p_tol) {
    double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

double p_max_pair_upper(const TensorPair& pair, const TensorPair& target,
                        const Rotation& rotation, int n_alpha) {
  AlphaSweepResult sweep = necessary_membership(pair, target, n_alpha);
  if (!sweep.pass)
    throw std::domain_error("target fails the necessary membership sweep");
  double scale = std::max({1e-300, pair.chi1.norm(), pair.chi2.norm()});
  double best = 1.0;
  for (int k = 0; k < n_alpha; ++k) {
    AlphaDirection alpha = AlphaDirection::from_angle(kTwoPi * k / n_alpha);
    AnisoTensor chi_a = project_alpha(pair, alpha);
    if (chi_a.norm() <= 1e-12 * scale) continue;
    best = std::min(best, p_max(HullSpec::from_tensor(chi_a),
                                project_alpha(target, alpha), rotation));
  }
  return best;
}

std::vector<DipoleObservation> synthesize_observations(
    const AnisoTensor& mean, int count, double noise_sigma, double C,
    std::uint64_t seed) {
  Rng rng(seed);
  std::vector<DipoleObservation> obs;
  obs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Vec3 r{};
    double n = 0.0;
    do {
      for (auto& c : r) c = rng.gaussian();
      n = norm(r);
    } while (n < 1e-6);
    r = {r[0] / n, r[1] / n, r[2] / n};
    DipoleObservation o;
    o.r = r;
    o.C = C;
    o.delta = forward_rdc(mean, r, C) + noise_sigma * rng.gaussian();
    obs.push_back(o);
  }
  return obs;
}

}  // namespace orbitope
