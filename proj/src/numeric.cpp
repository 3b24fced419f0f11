#include "orbitope/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace orbitope::num {

namespace {

double off_diagonal_norm(const std::vector<double>& a, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double x = a[static_cast<std::size_t>(i * n + j)];
      s += 2.0 * x * x;
    }
  return std::sqrt(s);
}

double frobenius(const std::vector<double>& a, int n) {
  double s = 0.0;
  for (int i = 0; i < n * n; ++i) s += a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(i)];
  return std::sqrt(s);
}

}  // namespace

void jacobi_symmetric(std::vector<double>& a, std::vector<double>& v, int n,
                      double tol) {
  v.assign(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i * n + i)] = 1.0;
  const double fnorm = frobenius(a, n);
  if (fnorm == 0.0) return;
  auto at = [&](std::vector<double>& m, int r, int c) -> double& {
    return m[static_cast<std::size_t>(r * n + c)];
  };
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a, n) <= tol * fnorm) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = at(a, p, q);
        if (std::abs(apq) <= 1e-300) continue;
        double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        double tau = s / (1.0 + c);
        double app = at(a, p, p), aqq = at(a, q, q);
        at(a, p, p) = app - t * apq;
        at(a, q, q) = aqq + t * apq;
        at(a, p, q) = at(a, q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k != p && k != q) {
            double akp = at(a, k, p), akq = at(a, k, q);
            at(a, k, p) = at(a, p, k) = akp - s * (akq + tau * akp);
            at(a, k, q) = at(a, q, k) = akq + s * (akp - tau * akq);
          }
          double vkp = at(v, k, p), vkq = at(v, k, q);
          at(v, k, p) = vkp - s * (vkq + tau * vkp);
          at(v, k, q) = vkq + s * (vkp - tau * vkq);
        }
      }
    }
  }
}

Eigen3 eigen_sym3(const std::array<std::array<double, 3>, 3>& m) {
  std::vector<double> a(9), v;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[static_cast<std::size_t>(i * 3 + j)] = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  jacobi_symmetric(a, v, 3);
  std::array<int, 3> order = {0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return a[static_cast<std::size_t>(x * 3 + x)] > a[static_cast<std::size_t>(y * 3 + y)];
  });
  Eigen3 out;
  for (int k = 0; k < 3; ++k) {
    int c = order[static_cast<std::size_t>(k)];
    out.values[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(c * 3 + c)];
    for (int r = 0; r < 3; ++r)
      out.vectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)] = v[static_cast<std::size_t>(r * 3 + c)];
  }
  return out;
}

std::array<double, 3> eigen_herm3(
    const std::array<std::array<std::complex<double>, 3>, 3>& h) {
  // [[Re, -Im], [Im, Re]] is symmetric when h is Hermitian; each eigenvalue
  // of h appears twice in its spectrum.
  std::vector<double> a(36, 0.0), v;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double re = h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].real();
      double im = h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].imag();
      a[static_cast<std::size_t>(i * 6 + j)] = re;
      a[static_cast<std::size_t>((i + 3) * 6 + j + 3)] = re;
      a[static_cast<std::size_t>(i * 6 + j + 3)] = -im;
      a[static_cast<std::size_t>((i + 3) * 6 + j)] = im;
    }
  jacobi_symmetric(a, v, 6);
  std::array<double, 6> d;
  for (int i = 0; i < 6; ++i) d[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i * 6 + i)];
  std::sort(d.begin(), d.end(), std::greater<double>());
  return {d[0], d[2], d[4]};
}

std::vector<double> singular_values(const std::vector<double>& x, int rows,
                                    int cols) {
  // One-sided Jacobi: rotate column pairs until they are mutually
  // orthogonal.  Working on the matrix itself (not the Gram matrix) keeps
  // singular values down to eps * sigma_max resolvable, which the 1e-8 rank
  // thresholds rely on.
  std::vector<double> a = x;
  auto col = [&](int r, int c) -> double& {
    return a[static_cast<std::size_t>(r * cols + c)];
  };
  auto dot = [&](int i, int j) {
    double s = 0.0;
    for (int r = 0; r < rows; ++r) s += col(r, i) * col(r, j);
    return s;
  };
  for (int sweep = 0; sweep < 60; ++sweep) {
    double worst = 0.0;
    for (int i = 0; i < cols - 1; ++i)
      for (int j = i + 1; j < cols; ++j) {
        double app = dot(i, i), aqq = dot(j, j), apq = dot(i, j);
        double denom = std::sqrt(app * aqq);
        if (denom <= 0.0 || std::abs(apq) <= 1e-15 * denom) continue;
        worst = std::max(worst, std::abs(apq) / denom);
        double theta = (aqq - app) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        for (int r = 0; r < rows; ++r) {
          double xi = col(r, i), xj = col(r, j);
          col(r, i) = c * xi - s * xj;
          col(r, j) = s * xi + c * xj;
        }
      }
    if (worst <= 1e-14) break;
  }
  std::vector<double> sv(static_cast<std::size_t>(cols));
  for (int i = 0; i < cols; ++i) sv[static_cast<std::size_t>(i)] = std::sqrt(std::max(dot(i, i), 0.0));
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

int rank_from_singular(const std::vector<double>& sv, double rel_tol,
                       double abs_floor) {
  if (sv.empty()) return 0;
  double cut = std::max(rel_tol * sv.front(), abs_floor);
  int r = 0;
  for (double s : sv)
    if (s > cut) ++r;
  return r;
}

int affine_rank(const std::vector<double>& pts, int rows, int cols,
                double rel_tol, double abs_floor) {
  if (rows < 2) return 0;
  std::vector<double> centered(static_cast<std::size_t>(rows * cols));
  for (int c = 0; c < cols; ++c) {
    double mean = 0.0;
    for (int r = 0; r < rows; ++r) mean += pts[static_cast<std::size_t>(r * cols + c)];
    mean /= rows;
    for (int r = 0; r < rows; ++r)
      centered[static_cast<std::size_t>(r * cols + c)] = pts[static_cast<std::size_t>(r * cols + c)] - mean;
  }
  return rank_from_singular(singular_values(centered, rows, cols), rel_tol,
                            abs_floor);
}

std::array<std::complex<double>, 3> cubic_roots(std::complex<double> c2,
                                                std::complex<double> c1,
                                                std::complex<double> c0) {
  using C = std::complex<double>;
  auto p = [&](C z) { return ((z + c2) * z + c1) * z + c0; };
  auto dp = [&](C z) { return (3.0 * z + 2.0 * c2) * z + c1; };
  std::array<C, 3> r;
  const C seed(0.4, 0.9);
  r[0] = seed;
  r[1] = seed * seed;
  r[2] = seed * seed * seed;
  for (int it = 0; it < 200; ++it) {
    double moved = 0.0;
    for (int i = 0; i < 3; ++i) {
      C denom(1.0, 0.0);
      for (int j = 0; j < 3; ++j)
        if (j != i) denom *= r[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(j)];
      if (std::abs(denom) < 1e-300) denom = C(1e-300, 0.0);
      C delta = p(r[static_cast<std::size_t>(i)]) / denom;
      r[static_cast<std::size_t>(i)] -= delta;
      moved = std::max(moved, std::abs(delta));
    }
    if (moved < 1e-15) break;
  }
  for (auto& z : r)
    for (int it = 0; it < 3; ++it) {
      C d = dp(z);
      if (std::abs(d) < 1e-300) break;
      z -= p(z) / d;
    }
  return r;
}

}  // namespace orbitope::num
