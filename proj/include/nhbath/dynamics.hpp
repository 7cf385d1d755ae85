// dynamics.hpp — non-unitary time evolution in the single-excitation
// subspace, decay probability, and two-emitter resolvent dynamics with the
// closed-form exchange asymmetry factor.
#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "nhbath/core.hpp"
#include "nhbath/dressed.hpp"
#include "nhbath/model.hpp"
#include "nhbath/spectral.hpp"

namespace nhbath {

struct Trajectory {
  Eigen::VectorXd times;
  Eigen::MatrixXcd emitter_amplitudes;               // n_emitters x n_times
  std::optional<Eigen::MatrixXcd> photon_amplitudes; // 2L x n_times
  Eigen::VectorXd norm;
  Eigen::VectorXd p_t;                               // 1 - norm^2
};

/// Propagate |psi_t> = exp(-i H t) |psi_0| by spectral decomposition (one
/// eigensolve serves all times). Near-defective matrices (eigenvector
/// condition above 1e10) fall back to a dense matrix exponential per step.
inline Trajectory evolve(const SystemMatrix& system, const Wavefunction& psi0,
                         const Eigen::VectorXd& times, bool keep_photons = false) {
  const int dim = system.dim();
  const Eigen::VectorXcd v0 = psi0.to_vector();
  if (v0.size() != dim)
    throw std::invalid_argument("evolve: psi0 dimension mismatch");
  if (std::abs(v0.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("evolve: psi0 must be normalized");
  for (int i = 1; i < times.size(); ++i)
    if (times(i) < times(i - 1))
      throw std::invalid_argument("evolve: times must be nondecreasing");

  const int nt = static_cast<int>(times.size());
  Trajectory traj;
  traj.times = times;
  traj.emitter_amplitudes.resize(system.n_emitters, nt);
  traj.norm.resize(nt);
  traj.p_t.resize(nt);
  if (keep_photons) traj.photon_amplitudes.emplace(2 * system.L, nt);

  auto record = [&](int i, const Eigen::VectorXcd& psi) {
    traj.emitter_amplitudes.col(i) = psi.head(system.n_emitters);
    const double n = psi.norm();
    traj.norm(i) = n;
    traj.p_t(i) = std::clamp(1.0 - n * n, 0.0, 1.0);
    if (traj.photon_amplitudes)
      traj.photon_amplitudes->col(i) = psi.tail(2 * system.L);
  };

  const ComplexSpectrum spec = obc_spectrum(system.entries);
  const double cond = spec.right.norm() * spec.left.norm();  // Frobenius bound
  if (cond < 1e10) {
    const Eigen::VectorXcd coeff = spec.left.adjoint() * v0;
    for (int i = 0; i < nt; ++i) {
      Eigen::VectorXcd modes =
          (-iu * times(i) * spec.eigenvalues.array()).exp() * coeff.array();
      record(i, spec.right * modes);
    }
  } else {
    Eigen::VectorXcd psi = v0;
    double t_prev = 0.0;
    for (int i = 0; i < nt; ++i) {
      const double dt = times(i) - t_prev;
      if (dt != 0.0)
        psi = (Eigen::MatrixXcd(-iu * dt * system.entries).exp() * psi).eval();
      t_prev = times(i);
      record(i, psi);
    }
  }
  return traj;
}

/// Decay probability p_t = 1 - ||psi_t||^2.
inline Eigen::VectorXd decay_probability(const Trajectory& traj) {
  return (1.0 - traj.norm.array().square()).cwiseMax(0.0).cwiseMin(1.0);
}

/// Exchange asymmetry factor of the dressed-state-mediated interaction,
/// F(alpha_1, alpha_2) = ((J1 + kappa/2)/(J1 - kappa/2))^(d/2) with
/// d = j1 - j2 + delta_{alpha1,b} - delta_{alpha2,b}.
inline double exchange_asymmetry(const BathParams& params,
                                 const EmitterAttachment& e1,
                                 const EmitterAttachment& e2) {
  params.validate();
  if (params.J1 <= params.kappa / 2.0)
    throw DegenerateGbz("exchange_asymmetry: requires J1 > kappa/2");
  const double ratio = (params.J1 + params.kappa / 2.0) /
                       (params.J1 - params.kappa / 2.0);
  const int d = e1.unit_cell - e2.unit_cell +
                (e1.sublattice == Sublattice::B ? 1 : 0) -
                (e2.sublattice == Sublattice::B ? 1 : 0);
  return std::pow(ratio, d / 2.0);
}

/// Resolvent machinery for two emitters coupled to the same bath (gamma =
/// kappa frame). Holds the analytic OBC eigenbasis and exposes the level
/// shift T, the asymmetry factors, the 2x2 constrained propagator, and the
/// finite-L residue-sum dynamics.
class TwoEmitterResolvent {
 public:
  TwoEmitterResolvent(const BathParams& params, const EmitterAttachment& e1,
                      const EmitterAttachment& e2)
      : params_(params), e1_(e1), e2_(e2) {
    params.validate();
    if (params.boundary != Boundary::OBC)
      throw PreconditionViolated("TwoEmitterResolvent: OBC only");
    if (params.J1 <= params.kappa / 2.0)
      throw DegenerateGbz("TwoEmitterResolvent: requires J1 > kappa/2");
    for (const auto* e : {&e1, &e2}) {
      if (std::abs(e->gamma - params.kappa) > 1e-12 * (1.0 + params.kappa))
        throw PreconditionViolated("TwoEmitterResolvent: requires gamma = kappa");
      if (e->unit_cell < 1 || e->unit_cell > params.L)
        throw AttachmentOutOfRange("TwoEmitterResolvent: unit_cell outside [1, L]");
    }
    r_ = std::sqrt((params.J1 + params.kappa / 2.0) /
                   (params.J1 - params.kappa / 2.0));
    const double J1bar = std::sqrt((params.J1 - params.kappa / 2.0) *
                                   (params.J1 + params.kappa / 2.0));
    basis_ = ssh_obc_eigenbasis(J1bar, params.J2, params.L);
  }

  const SshObcBasis& basis() const { return basis_; }

  double F(int n1, int n2) const {
    return exchange_asymmetry(params_, emitter(n1), emitter(n2));
  }

  /// T(n1, n2; E) = g1 g2 sum_m phi_{m,a1}(j1) phi_{m,a2}(j2) /
  ///               ((E - eps_m + i kappa/2) N_m)
  cplx T(int n1, int n2, cplx E) const {
    const auto& a = emitter(n1);
    const auto& b = emitter(n2);
    cplx sum = 0.0;
    for (int m = 0; m < 2 * params_.L; ++m) {
      const double num = basis_.amplitude(m, a.unit_cell, a.sublattice) *
                         basis_.amplitude(m, b.unit_cell, b.sublattice);
      sum += num / ((E - basis_.epsilon(m) + iu * (params_.kappa / 2.0)) *
                    basis_.norms(m));
    }
    return a.g * b.g * sum;
  }

  /// Constrained propagator G_p(E): the 2x2 matrix inverse of
  /// (E - Delta_n) delta_nm - Sigma_nm(E) with Sigma_nm = F(n,m) T(n,m).
  Eigen::Matrix2cd greens(cplx E) const {
    Eigen::Matrix2cd M;
    M(0, 0) = E - e1_.detuning() - T(0, 0, E);
    M(1, 1) = E - e2_.detuning() - T(1, 1, E);
    M(0, 1) = -F(0, 1) * T(0, 1, E);
    M(1, 0) = -F(1, 0) * T(1, 0, E);
    const cplx det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if (std::abs(det) < 1e-14 * scale * scale)
      throw SingularMatrix("two_emitter_greens: propagator singular at this E");
    Eigen::Matrix2cd G;
    G(0, 0) = M(1, 1) / det;
    G(1, 1) = M(0, 0) / det;
    G(0, 1) = -M(0, 1) / det;
    G(1, 0) = -M(1, 0) / det;
    return G;
  }

  /// Emitter amplitudes c_e(t), evaluated exactly for finite L as the
  /// residue sum over the discrete eigenmodes of the coupled system
  /// expressed in the analytic bath eigenbasis. All poles sit strictly
  /// below the real axis, which realizes the +i0+ prescription of the
  /// contour integral.
  Eigen::MatrixXcd amplitudes(const Wavefunction& psi0,
                              const Eigen::VectorXd& times) const {
    const int L = params_.L;
    const int n = 2 * L;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(2 + n, 2 + n);
    M(0, 0) = e1_.detuning();
    M(1, 1) = e2_.detuning();
    for (int m = 0; m < n; ++m) {
      M(2 + m, 2 + m) = basis_.epsilon(m) - iu * (params_.kappa / 2.0);
      for (int idx = 0; idx < 2; ++idx) {
        const auto& e = emitter(idx);
        const double phi = basis_.amplitude(m, e.unit_cell, e.sublattice);
        const double sn = std::sqrt(basis_.norms(m));
        const double rexp = e.unit_cell + (e.sublattice == Sublattice::B ? 1 : 0);
        M(idx, 2 + m) = e.g * std::pow(r_, rexp) * phi / sn;   // <e| V |phi_R>
        M(2 + m, idx) = e.g * std::pow(r_, -rexp) * phi / sn;  // <phi_L| V |e>
      }
    }

    Eigen::VectorXcd x0 = Eigen::VectorXcd::Zero(2 + n);
    x0.head(2) = psi0.c_e;
    if (psi0.c_photon.size() > 0 && psi0.c_photon.cwiseAbs().maxCoeff() > 0.0) {
      // project the photonic part onto the biorthogonal quasimode basis
      for (int m = 0; m < n; ++m) {
        cplx cm = 0.0;
        const double sn = std::sqrt(basis_.norms(m));
        for (int j = 1; j <= L; ++j) {
          cm += std::pow(r_, -static_cast<double>(j)) * basis_.phi_a(m, j - 1) *
                psi0.c_photon(j - 1, 0) / sn;
          cm += std::pow(r_, -static_cast<double>(j + 1)) * basis_.phi_b(m, j - 1) *
                psi0.c_photon(j - 1, 1) / sn;
        }
        x0(2 + m) = cm;
      }
    }

    const ComplexSpectrum spec = obc_spectrum(M);
    const Eigen::VectorXcd coeff = spec.left.adjoint() * x0;
    Eigen::MatrixXcd out(2, times.size());
    for (int i = 0; i < times.size(); ++i) {
      const Eigen::VectorXcd modes =
          ((-iu * times(i) * spec.eigenvalues.array()).exp() * coeff.array()).matrix();
      out.col(i) = (spec.right.topRows(2) * modes);
    }
    return out;
  }

 private:
  const EmitterAttachment& emitter(int idx) const { return idx == 0 ? e1_ : e2_; }

  BathParams params_;
  EmitterAttachment e1_, e2_;
  SshObcBasis basis_;
  double r_ = 1.0;
};

inline Eigen::Matrix2cd two_emitter_greens(const BathParams& params,
                                           const EmitterAttachment& e1,
                                           const EmitterAttachment& e2, cplx E) {
  return TwoEmitterResolvent(params, e1, e2).greens(E);
}

inline Eigen::MatrixXcd emitter_amplitudes_resolvent(
    const BathParams& params, const EmitterAttachment& e1,
    const EmitterAttachment& e2, const Wavefunction& psi0,
    const Eigen::VectorXd& times) {
  return TwoEmitterResolvent(params, e1, e2).amplitudes(psi0, times);
}

}  // namespace nhbath
