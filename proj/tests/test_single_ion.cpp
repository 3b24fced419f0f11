#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "orbitope/single_ion.hpp"
#include "test_util.hpp"

using namespace orbitope;
using testutil::random_generator;
using testutil::random_measure;
using testutil::random_tensor;
using testutil::random_unit;

namespace {

const double kPi = 3.14159265358979323846;

AnisoTensor diag_tensor(double a, double b, double c) {
  Mat3 m;
  m.m = {{{a, 0, 0}, {0, b, 0}, {0, 0, c}}};
  return AnisoTensor::from_matrix(m);
}

HullSpec std_hull() { return HullSpec::from_tensor(diag_tensor(1, 0, -1)); }

}  // namespace

TEST_CASE("hull spec geometry") {
  HullSpec h = HullSpec::from_tensor(diag_tensor(2, -1, -1));
  CHECK(h.max_eig == doctest::Approx(2.0));
  CHECK(h.min_eig == doctest::Approx(-1.0));
  CHECK(h.alpha_geom == doctest::Approx(1.5));
  CHECK(h.gamma_geom == doctest::Approx(0.0));
  CHECK_THROWS_AS(HullSpec::from_tensor(AnisoTensor()), std::invalid_argument);
}

TEST_CASE("membership: vertex, origin, scaled copy") {
  HullSpec h = std_hull();
  CHECK(membership(h, h.chi).region == Region::boundary);
  MembershipResult zero = membership(h, AnisoTensor());
  CHECK(zero.region == Region::inside);
  CHECK(zero.margin == doctest::Approx(1.0));
  CHECK(membership(h, 1.1 * h.chi).region == Region::outside);
}

TEST_CASE("membership agrees with the sampling oracle") {
  Rng rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    double M = rng.uniform(0.5, 2.0);
    double m = rng.uniform(-2.0 * M, -0.5 * M);
    HullSpec h = HullSpec::from_tensor(random_generator(rng, M, m));
    for (int i = 0; i < 500; ++i) {
      AnisoTensor bar = evaluate(random_measure(rng, 1 + static_cast<int>(rng.below(5))), h.chi);
      CHECK(membership(h, bar).region != Region::outside);
    }
  }
}

TEST_CASE("eigenvalue bound L_e over sampled members") {
  Rng rng(73);
  HullSpec h = HullSpec::from_tensor(random_generator(rng, 1.0, -0.8));
  for (int i = 0; i < 200; ++i) {
    AnisoTensor bar = evaluate(random_measure(rng, 4), h.chi);
    Vec3 e = random_unit(rng);
    double v = L_e(bar, e);
    CHECK(v <= h.max_eig + 1e-10);
    CHECK(v >= h.min_eig - 1e-10);
  }
}

TEST_CASE("invariants: values, negation, conjugation invariance") {
  CharPolyInvariants i1 = invariants(diag_tensor(1, 0, -1));
  CHECK(i1.alpha == doctest::Approx(1.0));
  CHECK(i1.det == doctest::Approx(0.0));

  CharPolyInvariants i2 = invariants(diag_tensor(0.5, 0.5, -1));
  CHECK(i2.alpha == doctest::Approx(0.75));
  CHECK(i2.det == doctest::Approx(-0.25));
  CharPolyInvariants i3 = invariants(-diag_tensor(0.5, 0.5, -1));
  CHECK(i3.alpha == doctest::Approx(0.75));
  CHECK(i3.det == doctest::Approx(0.25));

  Rng rng(79);
  for (int i = 0; i < 50; ++i) {
    AnisoTensor t = random_tensor(rng);
    CharPolyInvariants a = invariants(t);
    CharPolyInvariants b = invariants(act(random_rotation(rng), t));
    CHECK(a.alpha == doctest::Approx(b.alpha).epsilon(1e-12));
    CHECK(a.det == doctest::Approx(b.det).epsilon(1e-12));
  }
}

TEST_CASE("orbit test: equal invariants iff an aligning rotation exists") {
  Rng rng(83);
  for (int i = 0; i < 30; ++i) {
    AnisoTensor a = random_tensor(rng);
    AnisoTensor b = act(random_rotation(rng), a);
    auto u = orbit_alignment(a, b);
    REQUIRE(u.has_value());
    CHECK(norm_inf(act(*u, a) - b) < 1e-9);
    // different orbit: scaled copy
    CHECK(!orbit_alignment(a, 1.5 * a).has_value());
  }
}

TEST_CASE("region X membership") {
  CHECK(region_x_contains(1.0, 0.0));
  CHECK(region_x_contains(0.75, 0.25));
  CHECK(!region_x_contains(1.0, 0.5));
  // tangency point of the face-split curve and the cubic boundary
  CHECK(region_x_face_split_det(1.0 / 3.0) == doctest::Approx(2.0 / 27.0).epsilon(1e-12));
}

TEST_CASE("f_map: pinned values and image containment") {
  auto at = f_map(0.0, 0.37, 0.91);
  CHECK(at[0] == doctest::Approx(1.0));
  CHECK(at[1] == doctest::Approx(0.0));
  auto mid = f_map(0.5, 1.0, 1.0);
  CHECK(mid[0] == doctest::Approx(0.25));
  CHECK(mid[1] == doctest::Approx(0.0));
  CHECK_THROWS_AS(f_map(1.2, 0.0, 0.0), std::invalid_argument);

  // image of the segment lambda = 1/3, u = 1 lies on 3 det = alpha - 1/9
  for (double v = 0.0; v <= 1.0; v += 0.05) {
    auto p = f_map(1.0 / 3.0, 1.0, v);
    CHECK(3.0 * p[1] == doctest::Approx(p[0] - 1.0 / 9.0).epsilon(1e-12));
  }

  // cube containment on a 50^3 grid
  int outside = 0;
  for (int i = 0; i <= 50; ++i)
    for (int j = 0; j <= 50; ++j)
      for (int k = 0; k <= 50; ++k) {
        auto p = f_map(i / 50.0, j / 50.0, k / 50.0);
        if (!region_x_contains(p[0], std::abs(p[1]), 1e-9)) ++outside;
      }
  CHECK(outside == 0);
}

TEST_CASE("f_map inversion on targets sampled from the image") {
  Rng rng(89);
  for (int i = 0; i < 300; ++i) {
    auto p = f_map(rng.uniform(), rng.uniform(), rng.uniform());
    if (p[1] < 0.0) p[1] = -p[1];
    FMapPreimage pre = invert_f_map(p[0], p[1]);
    auto q = f_map(pre.lambda, pre.u, pre.v);
    CHECK(std::abs(q[0] - p[0]) < 1e-9);
    CHECK(std::abs(q[1] - p[1]) < 1e-9);
  }
  CHECK_THROWS_AS(invert_f_map(1.0, 0.5), std::domain_error);
}

TEST_CASE("two-atom decomposition: vertex, origin, random round trips") {
  HullSpec h = std_hull();

  AtomicMeasure vertex = decompose_zero_eig(h, h.chi);
  CHECK(vertex.atoms.size() == 1);
  CHECK(vertex.atoms[0].weight == doctest::Approx(1.0));

  AtomicMeasure origin = decompose_zero_eig(h, AnisoTensor());
  CHECK(origin.atoms.size() == 2);
  CHECK(origin.atoms[0].weight == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(norm_inf(evaluate(origin, h.chi)) < 1e-10);

  // the half turn about e2 carries the standard generator to its negative,
  // which is what makes the origin a two-atom point
  Rotation half = coaxial_rotation({0, 1, 0}, kPi / 2.0);
  CHECK(norm_inf(act(half, h.chi) + h.chi) < 1e-12);

  Rng rng(97);
  for (int i = 0; i < 200; ++i) {
    Rotation frame = random_rotation(rng);
    double s = rng.uniform(0.5, 2.0);
    HullSpec hull = HullSpec::from_tensor(act(frame, s * diag_tensor(1, 0, -1)));
    AnisoTensor target = evaluate(random_measure(rng, 2 + static_cast<int>(rng.below(3))), hull.chi);
    AtomicMeasure m = decompose_zero_eig(hull, target);
    CHECK(m.atoms.size() <= 2);
    CHECK(norm_inf(evaluate(m, hull.chi) - target) < 1e-8 * s);
  }

  CHECK_THROWS_AS(decompose_zero_eig(h, 1.5 * h.chi), std::domain_error);
  CHECK_THROWS_AS(
      decompose_zero_eig(HullSpec::from_tensor(diag_tensor(2, -1, -1)),
                         AnisoTensor()),
      std::invalid_argument);
}

TEST_CASE("three-atom decomposition: facet points and random round trips") {
  HullSpec h = std_hull();  // gamma = 1/2

  // center of the max facet: two atoms with weight 1/2
  AnisoTensor center = diag_tensor(1.0, -0.5, -0.5);
  AtomicMeasure cm = decompose(h, center);
  CHECK(cm.atoms.size() == 2);
  CHECK(cm.atoms[0].weight == doctest::Approx(0.5));
  CHECK(norm_inf(evaluate(cm, h.chi) - center) < 1e-9);

  // a facet point at full radius is a vertex
  AtomicMeasure vm = decompose(h, h.chi);
  CHECK(vm.atoms.size() == 1);

  Rng rng(101);
  for (int i = 0; i < 200; ++i) {
    double M = rng.uniform(0.5, 1.5);
    double m = rng.uniform(-2.0 * M, -0.5 * M);
    HullSpec hull = HullSpec::from_tensor(random_generator(rng, M, m));
    AnisoTensor target = evaluate(random_measure(rng, 5), hull.chi);
    AtomicMeasure meas = decompose(hull, target);
    CHECK(meas.atoms.size() <= 3);
    double total = 0.0;
    for (const auto& atom : meas.atoms) {
      CHECK(atom.weight >= 0.0);
      total += atom.weight;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(norm_inf(evaluate(meas, hull.chi) - target) < 1e-8);
  }

  CHECK_THROWS_AS(decompose(h, 1.5 * h.chi), std::domain_error);
}

TEST_CASE("decomposition handles generators with a repeated eigenvalue") {
  Rng rng(103);
  HullSpec h = HullSpec::from_tensor(act(random_rotation(rng), diag_tensor(2, -1, -1)));
  for (int i = 0; i < 50; ++i) {
    AnisoTensor target = evaluate(random_measure(rng, 4), h.chi);
    AtomicMeasure m = decompose(h, target);
    CHECK(m.atoms.size() <= 3);
    CHECK(norm_inf(evaluate(m, h.chi) - target) < 1e-8 * 2.0);
  }
}

TEST_CASE("facet descriptors") {
  HullSpec h = std_hull();
  FacetDisk top = facet(h, {1, 0, 0}, +1);
  CHECK(top.radius == doctest::Approx(0.5));
  CHECK(!top.degenerate);
  CHECK(L_e(top.center, {1, 0, 0}) == doctest::Approx(1.0).epsilon(1e-12));

  HullSpec prolate = HullSpec::from_tensor(diag_tensor(2, -1, -1));
  CHECK(facet(prolate, {1, 0, 0}, -1).radius == doctest::Approx(1.5));
  FacetDisk degen = facet(prolate, {1, 0, 0}, +1);
  CHECK(degen.radius == doctest::Approx(0.0));
  CHECK(degen.degenerate);

  // every point of the facet satisfies the supporting equation L_e = M
  Rng rng(107);
  Vec3 e = random_unit(rng);
  FacetDisk f = facet(h, e, +1);
  Rotation to_axis = rotation_from_to({1, 0, 0}, e);
  for (int i = 0; i < 20; ++i) {
    double rho = f.radius * std::sqrt(rng.uniform());
    double psi = rng.uniform(0.0, 2 * kPi);
    AnisoTensor pt =
        f.center + act(to_axis, AnisoTensor::from_coords(
                                    {0, 0, 0, rho * std::cos(psi), rho * std::sin(psi)}));
    CHECK(L_e(pt, e) == doctest::Approx(h.max_eig).epsilon(1e-10));
    CHECK(membership(h, pt).region != Region::outside);
  }
  CHECK_THROWS_AS(facet(h, {1, 1, 0}, +1), std::invalid_argument);
  CHECK_THROWS_AS(facet(h, {1, 0, 0}, 0), std::invalid_argument);
}
