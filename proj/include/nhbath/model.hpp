// model.hpp — Hamiltonian constructors for the dissipative SSH bath and the
// coupled emitter-bath system in the single-excitation subspace.
#pragma once

#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nhbath/core.hpp"

namespace nhbath {

/// Dense complex Hamiltonian with its basis bookkeeping. Basis order is
/// [e_1..e_N, a_1, b_1, a_2, b_2, ..., a_L, b_L]; unit cells are 1-based.
struct SystemMatrix {
  Eigen::MatrixXcd entries;
  std::vector<std::string> basis_order;
  int n_emitters = 0;
  int L = 0;

  int dim() const { return static_cast<int>(entries.rows()); }

  /// 0-based matrix index of photon site (j, alpha).
  int photon_index(int j, Sublattice s) const {
    return n_emitters + 2 * (j - 1) + (s == Sublattice::B ? 1 : 0);
  }
};

namespace detail {

inline std::vector<std::string> make_basis_labels(int n_emitters, int L) {
  std::vector<std::string> labels;
  labels.reserve(n_emitters + 2 * L);
  for (int n = 1; n <= n_emitters; ++n) labels.push_back("e" + std::to_string(n));
  for (int j = 1; j <= L; ++j) {
    labels.push_back("a" + std::to_string(j));
    labels.push_back("b" + std::to_string(j));
  }
  return labels;
}

// Photonic block written into M at the given offset. Sub/superdiagonals
// alternate J1 -/+ kappa/2 (intracell) and J2 (intercell); the uniform
// -i*kappa/2 on-site term accounts for the nonlocal loss.
inline void fill_photon_block(Eigen::MatrixXcd& M, int off, const BathParams& p) {
  const cplx onsite = -iu * (p.kappa / 2.0);
  const double up = p.J1 - p.kappa / 2.0;    // a_j <- b_j
  const double down = p.J1 + p.kappa / 2.0;  // b_j <- a_j
  for (int j = 0; j < p.L; ++j) {
    const int a = off + 2 * j;
    const int b = a + 1;
    M(a, a) = onsite;
    M(b, b) = onsite;
    M(a, b) = up;
    M(b, a) = down;
    if (j + 1 < p.L) {
      M(b, b + 1) = p.J2;  // b_j <-> a_{j+1}
      M(b + 1, b) = p.J2;
    }
  }
  if (p.boundary == Boundary::PBC) {
    const int bL = off + 2 * p.L - 1;
    const int a1 = off;
    M(bL, a1) = p.J2;
    M(a1, bL) = p.J2;
  }
}

}  // namespace detail

/// Photon-only bath Hamiltonian, dim = 2L.
inline SystemMatrix build_bath(const BathParams& params) {
  params.validate();
  SystemMatrix sm;
  sm.n_emitters = 0;
  sm.L = params.L;
  sm.entries = Eigen::MatrixXcd::Zero(2 * params.L, 2 * params.L);
  detail::fill_photon_block(sm.entries, 0, params);
  sm.basis_order = detail::make_basis_labels(0, params.L);
  return sm;
}

/// Bloch Hamiltonian H_k = -i(kappa/2) tau_0 + (J1 + J2 cos k) tau_x
///                         + (J2 sin k - i kappa/2) tau_y.
inline Eigen::Matrix2cd build_bloch(const BathParams& params, double k) {
  params.validate();
  const cplx hx = params.J1 + params.J2 * std::cos(k);
  const cplx hy = params.J2 * std::sin(k) - iu * (params.kappa / 2.0);
  Eigen::Matrix2cd H;
  H(0, 0) = -iu * (params.kappa / 2.0);
  H(1, 1) = -iu * (params.kappa / 2.0);
  H(0, 1) = hx - iu * hy;  // J1 + J2 e^{-ik} - kappa/2
  H(1, 0) = hx + iu * hy;  // J1 + J2 e^{+ik} + kappa/2
  return H;
}

/// Off-diagonal Bloch entries (h_ab, h_ba) at momentum k.
inline std::pair<cplx, cplx> bloch_offdiag(const BathParams& p, double k) {
  const cplx eminus = std::exp(-iu * k);
  const cplx h_ab = p.J1 + p.J2 * eminus - p.kappa / 2.0;
  const cplx h_ba = p.J1 + p.J2 * std::conj(eminus) + p.kappa / 2.0;
  return {h_ab, h_ba};
}

/// Coupled emitter-bath Hamiltonian [[Delta diag, V], [V^T, H_p]] with one g
/// entry per emitter at its attachment site. Emitter n carries
/// Delta_n = delta0_n - i*gamma_n/2 on the diagonal.
inline SystemMatrix build_system(const BathParams& params,
                                 const std::vector<EmitterAttachment>& emitters) {
  params.validate();
  const int N = static_cast<int>(emitters.size());
  std::set<std::pair<int, int>> sites;
  for (const auto& e : emitters) {
    if (e.unit_cell < 1 || e.unit_cell > params.L)
      throw AttachmentOutOfRange("emitter unit_cell " + std::to_string(e.unit_cell) +
                                 " outside [1, " + std::to_string(params.L) + "]");
    if (e.g < 0.0 || e.gamma < 0.0)
      throw std::invalid_argument("emitter g and gamma must be >= 0");
    if (!sites.insert({e.unit_cell, e.sublattice == Sublattice::B}).second)
      throw std::invalid_argument("emitter attachment sites must be distinct");
  }

  SystemMatrix sm;
  sm.n_emitters = N;
  sm.L = params.L;
  const int dim = N + 2 * params.L;
  sm.entries = Eigen::MatrixXcd::Zero(dim, dim);
  detail::fill_photon_block(sm.entries, N, params);
  for (int n = 0; n < N; ++n) {
    const auto& e = emitters[n];
    sm.entries(n, n) = e.detuning();
    const int site = sm.photon_index(e.unit_cell, e.sublattice);
    sm.entries(n, site) = e.g;
    sm.entries(site, n) = e.g;
  }
  sm.basis_order = detail::make_basis_labels(N, params.L);
  return sm;
}

}  // namespace nhbath
