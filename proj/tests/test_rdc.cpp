#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "orbitope/rdc.hpp"
#include "test_util.hpp"

using namespace orbitope;
using testutil::random_generator;
using testutil::random_measure;
using testutil::random_tensor;
using testutil::random_unit;

namespace {

AnisoTensor diag_tensor(double a, double b, double c) {
  Mat3 m;
  m.m = {{{a, 0, 0}, {0, b, 0}, {0, 0, c}}};
  return AnisoTensor::from_matrix(m);
}

}  // namespace

TEST_CASE("forward model") {
  AnisoTensor chi = diag_tensor(1, 0, -1);
  CHECK(forward_rdc(chi, {1, 0, 0}) == doctest::Approx(1.0));
  double s = 1.0 / std::sqrt(2.0);
  CHECK(forward_rdc(chi, {s, s, 0}) == doctest::Approx(0.5));
  CHECK(forward_rdc(AnisoTensor(), {0.3, 0.4, 0.5}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(forward_rdc(chi, {0, 0, 0}), std::invalid_argument);

  // linearity through the mean tensor
  Rng rng(191);
  AtomicMeasure m = random_measure(rng, 4);
  Vec3 r = random_unit(rng);
  double via_mean = forward_rdc(mean_tensor(m, chi), r);
  double via_atoms = 0.0;
  for (const auto& atom : m.atoms)
    via_atoms += atom.weight * forward_rdc(act(atom.rotation, chi), r);
  CHECK(via_mean == doctest::Approx(via_atoms).epsilon(1e-12));
}

TEST_CASE("mean tensor stays in the hull") {
  Rng rng(193);
  HullSpec h = HullSpec::from_tensor(random_generator(rng, 1.0, -1.2));
  AtomicMeasure point;
  point.atoms = {{1.0, Rotation()}};
  CHECK(norm_inf(mean_tensor(point, h.chi) - h.chi) < 1e-15);
  for (int i = 0; i < 500; ++i) {
    AnisoTensor bar = mean_tensor(random_measure(rng, 1 + static_cast<int>(rng.below(6))), h.chi);
    CHECK(membership(h, bar).region != Region::outside);
  }
}

TEST_CASE("estimation: exact recovery, rank deficiency, noise behaviour") {
  Rng rng(197);
  AnisoTensor truth = random_tensor(rng);
  std::vector<DipoleObservation> obs;
  for (int i = 0; i < 20; ++i) {
    DipoleObservation o;
    o.r = random_unit(rng);
    o.C = 1.0;
    o.delta = forward_rdc(truth, o.r);
    obs.push_back(o);
  }
  EstimateResult r = estimate_tensor(obs);
  CHECK(norm_inf(r.chi - truth) < 1e-10);
  CHECK(r.rms_residual < 1e-10);

  std::vector<DipoleObservation> degenerate(5, {{1, 0, 0}, 1.0, 1.0});
  CHECK_THROWS_AS(estimate_tensor(degenerate), std::domain_error);
  obs.resize(4);
  CHECK_THROWS_AS(estimate_tensor(obs), std::domain_error);

  // gaussian noise: residual tracks sigma, error shrinks with more data
  double sigma = 0.05;
  auto noisy = [&](int n, std::uint64_t seed) {
    auto o = synthesize_observations(truth, n, sigma, 1.0, seed);
    return estimate_tensor(o);
  };
  double err_small = 0.0, err_big = 0.0, res_mean = 0.0;
  int trials = 40;
  for (int t = 0; t < trials; ++t) {
    EstimateResult a = noisy(10, 1000 + static_cast<std::uint64_t>(t));
    EstimateResult b = noisy(320, 5000 + static_cast<std::uint64_t>(t));
    err_small += norm_inf(a.chi - truth);
    err_big += norm_inf(b.chi - truth);
    res_mean += b.rms_residual;
  }
  err_small /= trials;
  err_big /= trials;
  res_mean /= trials;
  CHECK(err_big < err_small);
  CHECK(res_mean == doctest::Approx(sigma).epsilon(0.25));
}

TEST_CASE("p_max: vertex, analytic half, planted lower bounds") {
  HullSpec h = HullSpec::from_tensor(diag_tensor(1, 0, -1));
  Rng rng(199);
  Rotation r0 = random_rotation(rng);
  CHECK(p_max(h, act(r0, h.chi), r0) == doctest::Approx(1.0));
  CHECK(p_max(h, AnisoTensor(), r0) == doctest::Approx(0.5).epsilon(1e-9));

  for (int i = 0; i < 100; ++i) {
    double M = rng.uniform(0.5, 1.5);
    HullSpec hull = HullSpec::from_tensor(random_generator(rng, M, rng.uniform(-2 * M, -0.5 * M)));
    double p0 = rng.uniform(0.05, 0.9);
    Rotation planted = random_rotation(rng);
    AnisoTensor rest = evaluate(random_measure(rng, 3), hull.chi);
    AnisoTensor bar = p0 * act(planted, hull.chi) + (1.0 - p0) * rest;
    CHECK(p_max(hull, bar, planted) >= p0 - 1e-8);
  }
  CHECK_THROWS_AS(p_max(h, 1.5 * h.chi, r0), std::domain_error);
}

TEST_CASE("decomposition weights never exceed p_max") {
  Rng rng(211);
  for (int i = 0; i < 30; ++i) {
    HullSpec hull = HullSpec::from_tensor(random_generator(rng, 1.0, rng.uniform(-1.9, -0.6)));
    AnisoTensor bar = evaluate(random_measure(rng, 5), hull.chi);
    AtomicMeasure m = decompose(hull, bar);
    for (const auto& atom : m.atoms)
      CHECK(atom.weight <= p_max(hull, bar, atom.rotation) + 1e-8);
  }
}

TEST_CASE("pair p_max upper bound") {
  Rng rng(223);
  TensorPair pair(act(random_rotation(rng), diag_tensor(1, 0, -1)),
                  act(random_rotation(rng), random_tensor(rng)));
  Rotation r0 = random_rotation(rng);
  TensorPair vertex(act(r0, pair.chi1), act(r0, pair.chi2));
  CHECK(p_max_pair_upper(pair, vertex, r0, 16) == doctest::Approx(1.0));

  for (int i = 0; i < 10; ++i) {
    double p0 = rng.uniform(0.1, 0.8);
    AtomicMeasure m = random_measure(rng, 3);
    for (auto& atom : m.atoms) atom.weight *= (1.0 - p0);
    m.atoms.push_back({p0, r0});
    TensorPair bar(evaluate(m, pair.chi1), evaluate(m, pair.chi2));
    double upper_fine = p_max_pair_upper(pair, bar, r0, 720);
    double upper_coarse = p_max_pair_upper(pair, bar, r0, 8);
    CHECK(upper_fine <= upper_coarse + 1e-12);  // nested sweeps are monotone
    CHECK(upper_fine >= p0 - 1e-8);
  }
}
