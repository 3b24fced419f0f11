#include "orbitope/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "orbitope/numeric.hpp"

namespace orbitope {

namespace {

Complex unit(Complex z) {
  double m = std::abs(z);
  return m > 0.0 ? z / m : Complex(1.0, 0.0);
}

std::array<Complex, 2> moments_of(const std::vector<CircleAtom>& atoms) {
  Complex a(0.0, 0.0), b(0.0, 0.0);
  for (const auto& at : atoms) {
    a += at.weight * std::polar(1.0, at.theta);
    b += at.weight * std::polar(1.0, 2.0 * at.theta);
  }
  return {a, b};
}

double moment_residual(const std::vector<CircleAtom>& atoms, Complex a,
                       Complex b) {
  auto m = moments_of(atoms);
  double ws = 0.0;
  for (const auto& at : atoms) ws += at.weight;
  return std::max({std::abs(m[0] - a), std::abs(m[1] - b), std::abs(ws - 1.0)});
}

// Gauss-Newton refinement of the atoms against the target moments; fixes the
// precision lost when the rank classification sits near a threshold (two
// nearly-coincident atoms, nearly-flat extensions).
void polish(std::vector<CircleAtom>& atoms, Complex a, Complex b) {
  int n = static_cast<int>(atoms.size());
  if (n == 0) return;
  double res = moment_residual(atoms, a, b);
  for (int it = 0; it < 25 && res > 1e-13; ++it) {
    // residuals: Re/Im of both moment errors plus the weight-sum error
    int rows = 5, cols = 2 * n;
    std::vector<double> jac(static_cast<std::size_t>(rows * cols), 0.0), r(5, 0.0);
    auto m = moments_of(atoms);
    r[0] = (m[0] - a).real();
    r[1] = (m[0] - a).imag();
    r[2] = (m[1] - b).real();
    r[3] = (m[1] - b).imag();
    double ws = 0.0;
    for (const auto& at : atoms) ws += at.weight;
    r[4] = ws - 1.0;
    for (int k = 0; k < n; ++k) {
      const auto& at = atoms[static_cast<std::size_t>(k)];
      Complex e1 = std::polar(1.0, at.theta), e2 = std::polar(1.0, 2.0 * at.theta);
      // d/dweight
      jac[static_cast<std::size_t>(0 * cols + 2 * k)] = e1.real();
      jac[static_cast<std::size_t>(1 * cols + 2 * k)] = e1.imag();
      jac[static_cast<std::size_t>(2 * cols + 2 * k)] = e2.real();
      jac[static_cast<std::size_t>(3 * cols + 2 * k)] = e2.imag();
      jac[static_cast<std::size_t>(4 * cols + 2 * k)] = 1.0;
      // d/dtheta
      Complex d1 = at.weight * Complex(0.0, 1.0) * e1;
      Complex d2 = at.weight * Complex(0.0, 2.0) * e2;
      jac[static_cast<std::size_t>(0 * cols + 2 * k + 1)] = d1.real();
      jac[static_cast<std::size_t>(1 * cols + 2 * k + 1)] = d1.imag();
      jac[static_cast<std::size_t>(2 * cols + 2 * k + 1)] = d2.real();
      jac[static_cast<std::size_t>(3 * cols + 2 * k + 1)] = d2.imag();
    }
    std::vector<double> ata(static_cast<std::size_t>(cols * cols), 0.0), atb(static_cast<std::size_t>(cols), 0.0);
    for (int i = 0; i < cols; ++i) {
      for (int j = 0; j < cols; ++j) {
        double s = 0.0;
        for (int k = 0; k < rows; ++k)
          s += jac[static_cast<std::size_t>(k * cols + i)] * jac[static_cast<std::size_t>(k * cols + j)];
        ata[static_cast<std::size_t>(i * cols + j)] = s;
      }
      ata[static_cast<std::size_t>(i * cols + i)] += 1e-12;
      double s = 0.0;
      for (int k = 0; k < rows; ++k) s += jac[static_cast<std::size_t>(k * cols + i)] * r[static_cast<std::size_t>(k)];
      atb[static_cast<std::size_t>(i)] = s;
    }
    std::vector<double> step;
    try {
      step = num::solve_dense(ata, atb, cols);
    } catch (const std::domain_error&) {
      return;
    }
    double damp = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 25 && !improved; ++halving) {
      std::vector<CircleAtom> trial = atoms;
      for (int k = 0; k < n; ++k) {
        trial[static_cast<std::size_t>(k)].weight -= damp * step[static_cast<std::size_t>(2 * k)];
        trial[static_cast<std::size_t>(k)].theta -= damp * step[static_cast<std::size_t>(2 * k + 1)];
      }
      double rn = moment_residual(trial, a, b);
      if (rn < res) {
        atoms = trial;
        res = rn;
        improved = true;
      }
      damp *= 0.5;
    }
    if (!improved) return;
  }
}

std::vector<CircleAtom> solve_rank1(Complex a, Complex /*b*/) {
  return {{1.0, std::arg(unit(a))}};
}

std::vector<CircleAtom> solve_rank2(Complex a, Complex b) {
  // Atoms satisfy z^2 = p1 z + p0 on the support; pairing the recurrence at
  // shifts 0 and -1 gives a 2x2 system in (p0, p1).
  double det = std::norm(a) - 1.0;
  if (std::abs(det) < 1e-13) return solve_rank1(a, b);
  Complex p1 = (b * std::conj(a) - a) / det;
  Complex p0 = (a * a - b) / det;
  Complex disc = std::sqrt(p1 * p1 + 4.0 * p0);
  Complex z1 = 0.5 * (p1 + disc), z2 = 0.5 * (p1 - disc);
  double w1 = 0.5;
  if (std::abs(z1 - z2) > 1e-13) w1 = ((a - z2) / (z1 - z2)).real();
  return {{w1, std::arg(unit(z1))}, {1.0 - w1, std::arg(unit(z2))}};
}

std::vector<CircleAtom> solve_rank3(Complex a, Complex b) {
  // Flat extension: pick the third moment g3 on the boundary circle of the
  // admissible disk, which forces the extended 4x4 moment matrix to have
  // rank 3; the support polynomial then comes from the recurrence.
  std::vector<Complex> t = {Complex(1, 0), a, b,
                            std::conj(a), Complex(1, 0), a,
                            std::conj(b), std::conj(a), Complex(1, 0)};
  auto solve3 = [&](const std::vector<Complex>& rhs) {
    return num::solve_dense(t, rhs, 3);
  };
  // Columns of T^-1 applied to e = (1,0,0) and w = (0,b,a).
  std::vector<Complex> x_e = solve3({Complex(1, 0), Complex(0, 0), Complex(0, 0)});
  std::vector<Complex> x_w = solve3({Complex(0, 0), b, a});
  Complex e_cols[3] = {Complex(1, 0), Complex(0, 0), Complex(0, 0)};
  Complex w_cols[3] = {Complex(0, 0), b, a};
  Complex A(0, 0), B(0, 0), C(0, 0);
  for (int i = 0; i < 3; ++i) {
    A += std::conj(e_cols[i]) * x_e[static_cast<std::size_t>(i)];
    B += std::conj(e_cols[i]) * x_w[static_cast<std::size_t>(i)];
    C += std::conj(w_cols[i]) * x_w[static_cast<std::size_t>(i)];
  }
  double Ar = A.real(), Cr = C.real();
  double rad2 = (1.0 - Cr + std::norm(B) / Ar) / Ar;
  Complex g3 = -B / Ar + std::sqrt(std::max(rad2, 0.0));

  // z^3 = q2 z^2 + q1 z + q0 on the support, from the recurrence at shifts
  // -2, -1, 0.
  std::vector<Complex> rec = {std::conj(b), std::conj(a), Complex(1, 0),
                              std::conj(a), Complex(1, 0), a,
                              Complex(1, 0), a, b};
  std::vector<Complex> q = num::solve_dense(rec, {a, b, g3}, 3);
  auto roots = num::cubic_roots(-q[2], -q[1], -q[0]);
  std::vector<Complex> zs = {unit(roots[0]), unit(roots[1]), unit(roots[2])};
  // Weights from the Vandermonde system on moments 0..2.
  std::vector<Complex> vdm = {Complex(1, 0), Complex(1, 0), Complex(1, 0),
                              zs[0], zs[1], zs[2],
                              zs[0] * zs[0], zs[1] * zs[1], zs[2] * zs[2]};
  std::vector<Complex> w = num::solve_dense(vdm, {Complex(1, 0), a, b}, 3);
  std::vector<CircleAtom> atoms;
  for (int i = 0; i < 3; ++i)
    atoms.push_back({w[static_cast<std::size_t>(i)].real(), std::arg(zs[static_cast<std::size_t>(i)])});
  return atoms;
}

}  // namespace

std::array<std::array<Complex, 3>, 3> MomentMatrix::matrix() const {
  return {{{Complex(1, 0), a, std::conj(a)},
           {std::conj(a), Complex(1, 0), std::conj(b)},
           {a, b, Complex(1, 0)}}};
}

MomentMatrix moment_matrix(Complex a, Complex b) {
  MomentMatrix m;
  m.a = a;
  m.b = b;
  m.eigenvalues = num::eigen_herm3(m.matrix());
  m.psd = m.eigenvalues[2] >= -1e-10;
  m.rank = 0;
  for (double ev : m.eigenvalues)
    if (ev > 1e-9) ++m.rank;
  return m;
}

std::vector<CircleAtom> circle_hull_decompose(Complex a, Complex b) {
  MomentMatrix m = moment_matrix(a, b);
  if (!m.psd) throw std::domain_error("outside B");
  int rank = std::max(m.rank, 1);

  std::vector<CircleAtom> best;
  double best_res = -1.0;
  // The classified rank first, then the neighbours: near a rank threshold
  // either bracket can be the numerically better representation.
  std::vector<int> tries = {rank};
  for (int r : {1, 2, 3})
    if (r != rank) tries.push_back(r);
  for (int r : tries) {
    std::vector<CircleAtom> atoms;
    try {
      if (r == 1)
        atoms = solve_rank1(a, b);
      else if (r == 2)
        atoms = solve_rank2(a, b);
      else
        atoms = solve_rank3(a, b);
    } catch (const std::domain_error&) {
      continue;
    }
    polish(atoms, a, b);
    bool weights_ok = true;
    for (const auto& at : atoms)
      if (!(at.weight > -1e-9)) weights_ok = false;
    if (!weights_ok) continue;
    double res = moment_residual(atoms, a, b);
    if (best_res < 0.0 || res < best_res) {
      best = atoms;
      best_res = res;
    }
    if (best_res >= 0.0 && best_res < 1e-10) break;
  }
  if (best_res < 0.0 || best_res > 1e-8)
    throw std::domain_error("moment decomposition failed to converge");
  double ws = 0.0;
  for (auto& at : best) {
    at.weight = std::max(at.weight, 0.0);
    ws += at.weight;
  }
  for (auto& at : best) at.weight /= ws;
  return best;
}

std::array<Complex, 2> circle_moments(const std::vector<CircleAtom>& atoms) {
  return moments_of(atoms);
}

}  // namespace orbitope
