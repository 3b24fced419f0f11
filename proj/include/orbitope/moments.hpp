#pragma once

// Truncated trigonometric moment problem on the circle: given the first two
// moments (a, b) of a candidate probability measure, the 3x3 Hermitian moment
// matrix decides membership in the hull of the curve (e^{i theta},
// e^{2i theta}) — positive semidefiniteness is exact (Curto-Fialkow) and the
// rank is the minimal number of atoms.  circle_hull_decompose recovers such a
// minimal atomic measure.

#include <array>
#include <complex>
#include <vector>

#include "orbitope/tensor.hpp"

namespace orbitope {

using Complex = std::complex<double>;

struct MomentMatrix {
  Complex a;
  Complex b;
  std::array<double, 3> eigenvalues{};  // descending
  bool psd = false;
  int rank = 0;

  // The Hermitian matrix [[1, a, conj(a)], [conj(a), 1, conj(b)], [a, b, 1]].
  std::array<std::array<Complex, 3>, 3> matrix() const;
};

// psd iff the smallest eigenvalue is >= -1e-10; rank counts eigenvalues
// above 1e-9 (the matrix has unit diagonal, so absolute thresholds are
// already scale-correct).
MomentMatrix moment_matrix(Complex a, Complex b);

struct CircleAtom {
  double weight = 0.0;
  double theta = 0.0;
};

// Atoms (lambda_j, theta_j) with sum lambda_j e^{i theta_j} = a and
// sum lambda_j e^{2 i theta_j} = b, rank-many of them (<= 3).  Rank 1 and 2
// read off directly from the moment recurrence; rank 3 goes through a flat
// extension of the moment matrix and the roots of the degree-3 support
// polynomial.  Throws std::domain_error("outside B") when not psd.
std::vector<CircleAtom> circle_hull_decompose(Complex a, Complex b);

// Forward moments of an atom list (test oracle convenience).
std::array<Complex, 2> circle_moments(const std::vector<CircleAtom>& atoms);

}  // namespace orbitope
