// spectral.hpp — complex spectra, point-gap diagnostics, generalized
// Brillouin zone, and the non-Bloch winding number.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nhbath/core.hpp"
#include "nhbath/model.hpp"

namespace nhbath {

/// Eigen-decomposition of a non-Hermitian operator. Columns of `right` and
/// `left` are paired; left.col(m).adjoint() * right.col(n) = delta_mn.
/// Eigenvalues are sorted by (Re, Im) ascending.
struct ComplexSpectrum {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd right;
  Eigen::MatrixXcd left;
};

/// GBZ characteristic data at a given energy: the two beta solutions
/// (sorted by modulus, ties by argument), the GBZ radius, and the non-Bloch
/// winding number of the bath.
struct GbzData {
  cplx beta1;
  cplx beta2;
  double radius = 1.0;
  int winding = 0;
};

namespace detail {

// Parlett-Reinsch diagonal balancing with radix-2 scale factors. Returns d
// with A <- D^{-1} A D, D = diag(d); eigenvalues are preserved exactly.
inline Eigen::VectorXd balance_in_place(Eigen::MatrixXcd& A) {
  const int n = static_cast<int>(A.rows());
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(A(j, i));
        r += std::abs(A(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      while (c < r / 2.0) { c *= 2.0; r /= 2.0; f *= 2.0; }
      while (c >= r * 2.0) { c /= 2.0; r *= 2.0; f /= 2.0; }
      if (f != 1.0 && c + r < 0.95 * s) {
        done = false;
        d(i) *= f;
        A.row(i) /= f;
        A.col(i) *= f;
      }
    }
  }
  return d;
}

// Total phase accumulated by a closed loop of nonvanishing samples,
// including the closing segment back to the first sample.
inline double accumulated_phase(const std::vector<cplx>& f) {
  double total = 0.0;
  const size_t n = f.size();
  for (size_t i = 0; i < n; ++i) {
    const cplx a = f[i];
    const cplx b = f[(i + 1) % n];
    if (std::abs(a) == 0.0 || std::abs(b) == 0.0)
      throw OnSpectrum("winding sample vanished on the contour");
    total += std::arg(b / a);
  }
  return total;
}

inline std::vector<int> sort_permutation(const Eigen::VectorXcd& vals) {
  std::vector<int> idx(vals.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (vals(a).real() != vals(b).real()) return vals(a).real() < vals(b).real();
    return vals(a).imag() < vals(b).imag();
  });
  return idx;
}

}  // namespace detail

/// Dense eigen-decomposition with paired biorthonormal left/right vectors.
/// The matrix is balanced first; left vectors come from the inverse of the
/// right-vector matrix, so biorthonormality holds by construction.
inline ComplexSpectrum obc_spectrum(const Eigen::MatrixXcd& matrix) {
  if (matrix.rows() != matrix.cols())
    throw std::invalid_argument("obc_spectrum: matrix must be square");
  const int n = static_cast<int>(matrix.rows());

  Eigen::MatrixXcd A = matrix;
  const Eigen::VectorXd d = detail::balance_in_place(A);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, true);
  if (es.info() != Eigen::Success)
    throw NoConvergence("complex Schur iteration did not converge (dim=" +
                        std::to_string(n) + ")");

  Eigen::VectorXcd vals = es.eigenvalues();
  Eigen::MatrixXcd vecs = es.eigenvectors();
  for (int i = 0; i < n; ++i) vecs.row(i) *= d(i);  // undo balancing
  for (int m = 0; m < n; ++m) vecs.col(m).normalize();

  const auto idx = detail::sort_permutation(vals);
  ComplexSpectrum out;
  out.eigenvalues.resize(n);
  out.right.resize(n, n);
  for (int m = 0; m < n; ++m) {
    out.eigenvalues(m) = vals(idx[m]);
    out.right.col(m) = vecs.col(idx[m]);
  }
  // left.col(m)^H = row m of right^{-1}
  const Eigen::MatrixXcd inv = out.right.partialPivLu().solve(
      Eigen::MatrixXcd::Identity(n, n));
  out.left = inv.adjoint();
  return out;
}

struct BlochEigenvalues {
  double k;
  std::array<cplx, 2> E;  // sorted by (Re, Im)
};

/// Bloch eigenvalues -i kappa/2 +- sqrt(h_ab h_ba) on a uniform k-grid over
/// [-pi, pi).
inline std::vector<BlochEigenvalues> pbc_spectrum(const BathParams& params, int nk) {
  params.validate();
  if (nk < 4) throw std::invalid_argument("pbc_spectrum: nk must be >= 4");
  std::vector<BlochEigenvalues> out;
  out.reserve(nk);
  const double pi = std::acos(-1.0);
  for (int m = 0; m < nk; ++m) {
    const double k = -pi + 2.0 * pi * m / nk;
    const auto [hab, hba] = bloch_offdiag(params, k);
    const cplx w = std::sqrt(hab * hba);
    const cplx base = -iu * (params.kappa / 2.0);
    cplx e1 = base - w, e2 = base + w;
    if (e1.real() > e2.real() ||
        (e1.real() == e2.real() && e1.imag() > e2.imag()))
      std::swap(e1, e2);
    out.push_back({k, {e1, e2}});
  }
  return out;
}

/// Minimum distance from E to the sampled PBC spectrum of the bath.
inline double distance_to_pbc_spectrum(const BathParams& params, cplx E,
                                       int nk = 2048) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pt : pbc_spectrum(params, nk)) {
    best = std::min(best, std::abs(pt.E[0] - E));
    best = std::min(best, std::abs(pt.E[1] - E));
  }
  return best;
}

/// Spectral winding number of det(H_k - E) around zero as k traverses
/// [0, 2pi). The grid is doubled until two successive estimates agree to
/// 1e-6; the residual to the nearest integer must close to the same
/// tolerance.
inline int point_gap_winding(const BathParams& params, cplx E, int nk = 2048) {
  params.validate();
  if (nk < 16) nk = 16;
  if (distance_to_pbc_spectrum(params, E, std::max(nk, 2048)) < 1e-6)
    throw OnSpectrum("point_gap_winding: E lies on the PBC spectrum");

  const double pi = std::acos(-1.0);
  auto estimate = [&](int n) {
    std::vector<cplx> f(n);
    for (int m = 0; m < n; ++m) {
      const double k = 2.0 * pi * m / n;
      const auto [hab, hba] = bloch_offdiag(params, k);
      const cplx diag = -iu * (params.kappa / 2.0) - E;
      f[m] = diag * diag - hab * hba;
    }
    return detail::accumulated_phase(f) / (2.0 * pi);
  };

  double prev = estimate(nk);
  for (int n = 2 * nk; n <= (1 << 22); n *= 2) {
    const double cur = estimate(n);
    if (std::abs(cur - prev) < 1e-6) {
      const double nearest = std::round(cur);
      if (std::abs(cur - nearest) > 1e-6)
        throw NoConvergence("point_gap_winding: phase did not close to an integer");
      return static_cast<int>(nearest);
    }
    prev = cur;
  }
  throw NoConvergence("point_gap_winding: quadrature did not converge");
}

/// GBZ radius r = sqrt(|(J1 + kappa/2) / (J1 - kappa/2)|). The Hermitian
/// limit kappa = 0 gives the unit circle.
inline double gbz_radius(const BathParams& params) {
  params.validate();
  if (params.kappa == 0.0) return 1.0;
  const double denom = params.J1 - params.kappa / 2.0;
  const double numer = params.J1 + params.kappa / 2.0;
  if (std::abs(std::abs(params.J1) - params.kappa / 2.0) <
      1e-14 * (1.0 + std::abs(params.J1)))
    throw DegenerateGbz("gbz_radius: |J1| = kappa/2");
  return std::sqrt(std::abs(numer / denom));
}

/// Topological phase boundary +-sqrt(J2^2 + kappa^2/4) of the bath.
inline std::pair<double, double> transition_points(const BathParams& params) {
  params.validate();
  const double t = std::sqrt(params.J2 * params.J2 +
                             params.kappa * params.kappa / 4.0);
  return {t, -t};
}

/// Non-Bloch winding number computed by integrating dq/q of the generalized
/// Q-matrix off-diagonal q(beta) around the GBZ circle |beta| = r. With the
/// chiral blocks R-(beta) = J1 - kappa/2 + J2/beta and
/// R+(beta) = J1 + kappa/2 + J2 beta one has q^2 = R-/R+, so the phase of
/// u = R-/R+ is tracked and W = -arg_total(u) / (4 pi).
inline int non_bloch_winding(const BathParams& params) {
  params.validate();
  const auto [tp, tm] = transition_points(params);
  if (std::abs(std::abs(params.J1) - tp) < 1e-6)
    throw AtTransition("non_bloch_winding: parameters at the phase boundary");
  const double r = gbz_radius(params);

  const double pi = std::acos(-1.0);
  auto estimate = [&](int n) {
    std::vector<cplx> u(n);
    for (int m = 0; m < n; ++m) {
      const double phi = 2.0 * pi * m / n;
      const cplx beta = r * std::exp(iu * phi);
      const cplx rm = params.J1 - params.kappa / 2.0 + params.J2 / beta;
      const cplx rp = params.J1 + params.kappa / 2.0 + params.J2 * beta;
      if (std::abs(rm) < 1e-12 || std::abs(rp) < 1e-12)
        throw AtTransition("non_bloch_winding: chiral block vanishes on the GBZ");
      u[m] = rm / rp;
    }
    return detail::accumulated_phase(u) / (2.0 * pi);
  };

  double prev = estimate(2048);
  for (int n = 4096; n <= (1 << 22); n *= 2) {
    const double cur = estimate(n);
    if (std::abs(cur - prev) < 1e-6) {
      const double nearest = std::round(cur);
      if (std::abs(cur - nearest) > 1e-6)
        throw NoConvergence("non_bloch_winding: phase did not close to an integer");
      // chiral symmetry makes the winding of u even
      return -static_cast<int>(nearest) / 2;
    }
    prev = cur;
  }
  throw NoConvergence("non_bloch_winding: quadrature did not converge");
}

/// Both GBZ solutions of the characteristic equation at energy E, their
/// common modulus on the GBZ, and the bath winding number.
inline GbzData gbz_solutions(const BathParams& params, cplx E) {
  params.validate();
  const double am = params.J1 - params.kappa / 2.0;
  const double ap = params.J1 + params.kappa / 2.0;
  if (params.J2 == 0.0 || am == 0.0)
    throw DegenerateGbz("gbz_solutions: characteristic equation degenerates");
  // am*J2*beta^2 + (am*ap + J2^2 - E^2)*beta + ap*J2 = 0
  const cplx b = am * ap + params.J2 * params.J2 - E * E;
  const cplx disc = std::sqrt(b * b - 4.0 * (am * params.J2) * (ap * params.J2));
  cplx beta1 = (-b + disc) / (2.0 * am * params.J2);
  cplx beta2 = (-b - disc) / (2.0 * am * params.J2);
  if (std::abs(beta1) > std::abs(beta2) ||
      (std::abs(beta1) == std::abs(beta2) && std::arg(beta1) > std::arg(beta2)))
    std::swap(beta1, beta2);
  GbzData out;
  out.beta1 = beta1;
  out.beta2 = beta2;
  out.radius = gbz_radius(params);
  out.winding = non_bloch_winding(params);
  return out;
}

}  // namespace nhbath
