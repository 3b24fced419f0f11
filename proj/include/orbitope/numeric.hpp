#pragma once

// Small dense numerical kernels shared by the library: cyclic Jacobi
// eigensolvers, singular values / ranks of small matrices, dense linear
// solves and complex cubic roots.  Everything here is sized for n <= ~16.

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace orbitope::num {

// Cyclic Jacobi sweeps on a symmetric n x n matrix stored row-major in `a`.
// On return the diagonal of `a` holds the eigenvalues and the columns of `v`
// the eigenvectors.  Off-diagonal mass is driven below tol * ||A||_F.
void jacobi_symmetric(std::vector<double>& a, std::vector<double>& v, int n,
                      double tol = 1e-14);

struct Eigen3 {
  std::array<double, 3> values{};                    // descending
  std::array<std::array<double, 3>, 3> vectors{};    // vectors[k] <-> values[k]
};

Eigen3 eigen_sym3(const std::array<std::array<double, 3>, 3>& m);

// Eigenvalues of a 3x3 Hermitian matrix, descending (via the 6x6 real
// symmetric embedding [[Re, -Im], [Im, Re]], whose spectrum is doubled).
std::array<double, 3> eigen_herm3(
    const std::array<std::array<std::complex<double>, 3>, 3>& h);

// Singular values, descending, of a rows x cols matrix stored row-major
// (computed from the Gram matrix; fine at these sizes and tolerances).
std::vector<double> singular_values(const std::vector<double>& x, int rows,
                                    int cols);

// Count of singular values above rel_tol * sigma_max (plus an absolute floor).
int rank_from_singular(const std::vector<double>& sv, double rel_tol,
                       double abs_floor = 0.0);

// Affine rank of a point cloud (rows = points) after centroid subtraction.
int affine_rank(const std::vector<double>& pts, int rows, int cols,
                double rel_tol = 1e-8, double abs_floor = 0.0);

// Gaussian elimination with partial pivoting.  Throws std::domain_error on a
// (numerically) singular system.
template <class T>
std::vector<T> solve_dense(std::vector<T> a, std::vector<T> b, int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  auto at = [&](int r, int c) -> T& {
    return a[static_cast<std::size_t>(r * n + c)];
  };
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(at(col, col));
    for (int r = col + 1; r < n; ++r) {
      double m = std::abs(at(r, col));
      if (m > best) { best = m; piv = r; }
    }
    if (!(best > 0.0)) throw std::domain_error("solve_dense: singular system");
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(at(piv, c), at(col, c));
      std::swap(b[static_cast<std::size_t>(piv)], b[static_cast<std::size_t>(col)]);
    }
    for (int r = col + 1; r < n; ++r) {
      T f = at(r, col) / at(col, col);
      at(r, col) = T(0);
      for (int c = col + 1; c < n; ++c) at(r, c) -= f * at(col, c);
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  std::vector<T> x(static_cast<std::size_t>(n));
  for (int r = n - 1; r >= 0; --r) {
    T s = b[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < n; ++c) s -= at(r, c) * x[static_cast<std::size_t>(c)];
    x[static_cast<std::size_t>(r)] = s / at(r, r);
  }
  return x;
}

// Roots of the monic cubic z^3 + c2 z^2 + c1 z + c0 with complex
// coefficients (Durand-Kerner iteration plus a Newton polish).
std::array<std::complex<double>, 3> cubic_roots(std::complex<double> c2,
                                                std::complex<double> c1,
                                                std::complex<double> c0);

}  // namespace orbitope::num
