#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <complex>

#include "orbitope/moments.hpp"
#include "orbitope/rng.hpp"

using namespace orbitope;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("moment matrix: pinned examples") {
  MomentMatrix zero = moment_matrix({0, 0}, {0, 0});
  CHECK(zero.psd);
  CHECK(zero.rank == 3);

  MomentMatrix point = moment_matrix({1, 0}, {1, 0});
  CHECK(point.psd);
  CHECK(point.rank == 1);

  MomentMatrix sym = moment_matrix({0, 0}, {1, 0});
  CHECK(sym.psd);
  CHECK(sym.rank == 2);

  CHECK(!moment_matrix({1.2, 0}, {0, 0}).psd);
}

TEST_CASE("moment matrix boundary identity") {
  // on the boundary, 1 + conj(a)^2 b + a^2 conj(b) - 2|a|^2 - |b|^2 = 0
  // coincides with a zero eigenvalue of the matrix
  Rng rng(113);
  for (int i = 0; i < 200; ++i) {
    Complex a = std::polar(rng.uniform(), rng.uniform(0.0, 2 * kPi));
    Complex b = std::polar(rng.uniform(), rng.uniform(0.0, 2 * kPi));
    double det_cond = 1.0 + (std::conj(a) * std::conj(a) * b).real() * 2.0 -
                      2.0 * std::norm(a) - std::norm(b);
    if (std::abs(det_cond) < 1e-8) continue;  // too close to call either way
    MomentMatrix m = moment_matrix(a, b);
    bool by_minors = det_cond >= 0.0 && std::norm(a) <= 1.0 &&
                     std::norm(b) <= 1.0;
    CHECK(by_minors == m.psd);
  }
}

TEST_CASE("decompose: point mass and the antipodal pair") {
  for (double phi : {0.0, 0.7, -2.1}) {
    auto atoms = circle_hull_decompose(std::polar(1.0, phi),
                                       std::polar(1.0, 2.0 * phi));
    REQUIRE(atoms.size() == 1);
    CHECK(atoms[0].weight == doctest::Approx(1.0));
    CHECK(std::abs(std::remainder(atoms[0].theta - phi, 2 * kPi)) < 1e-10);
  }

  auto pair = circle_hull_decompose({0, 0}, {1, 0});
  REQUIRE(pair.size() == 2);
  CHECK(pair[0].weight == doctest::Approx(0.5));
  auto m = circle_moments(pair);
  CHECK(std::abs(m[0]) < 1e-10);
  CHECK(std::abs(m[1] - Complex(1, 0)) < 1e-10);

  CHECK_THROWS_AS(circle_hull_decompose({1.5, 0}, {0, 0}), std::domain_error);
}

TEST_CASE("decompose: random measures round trip") {
  Rng rng(127);
  for (int i = 0; i < 500; ++i) {
    int n = 1 + static_cast<int>(rng.below(3));
    Complex a(0, 0), b(0, 0);
    double total = 0.0;
    std::vector<double> w(static_cast<std::size_t>(n));
    for (auto& x : w) {
      x = rng.uniform(0.05, 1.0);
      total += x;
    }
    for (int k = 0; k < n; ++k) {
      double th = rng.uniform(0.0, 2 * kPi);
      a += w[static_cast<std::size_t>(k)] / total * std::polar(1.0, th);
      b += w[static_cast<std::size_t>(k)] / total * std::polar(1.0, 2 * th);
    }
    auto atoms = circle_hull_decompose(a, b);
    CHECK(atoms.size() <= 3);
    auto m = circle_moments(atoms);
    CHECK(std::abs(m[0] - a) < 1e-8);
    CHECK(std::abs(m[1] - b) < 1e-8);
    for (const auto& at : atoms) CHECK(at.weight >= 0.0);
  }
}

TEST_CASE("rank equals the deduplicated atom count on a grid") {
  // brute force: all 2-atom measures over a 12-point angle grid and a
  // coarse weight grid
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j)
      for (int wi = 1; wi < 5; ++wi) {
        double w = wi / 5.0;
        double t1 = 2 * kPi * i / 12, t2 = 2 * kPi * j / 12;
        Complex a = w * std::polar(1.0, t1) + (1 - w) * std::polar(1.0, t2);
        Complex b = w * std::polar(1.0, 2 * t1) + (1 - w) * std::polar(1.0, 2 * t2);
        MomentMatrix m = moment_matrix(a, b);
        CHECK(m.psd);
        CHECK(m.rank == 2);
      }
}
