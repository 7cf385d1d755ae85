// dressed.hpp — OBC dressed states: similarity transform to a Hermitian
// problem with uniform loss, the analytic SSH eigenbasis, the real pole
// equation for the dressed energies, closed-form chiral-extended states on
// the gap-closing line, and a fully numeric path for gamma != kappa.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "nhbath/core.hpp"
#include "nhbath/model.hpp"
#include "nhbath/spectral.hpp"

namespace nhbath {

/// Analytic OBC eigenbasis of the Hermitian SSH chain (hoppings J1bar, J2)
/// in the topologically trivial regime. Modes come in +- pairs sharing a
/// theta root: epsilon(2p) = -|eps_p|, epsilon(2p+1) = +|eps_p|.
struct SshObcBasis {
  int L = 0;
  double J1bar = 0.0;
  double J2 = 0.0;
  Eigen::VectorXd theta;    // L roots, ascending in (0, pi)
  Eigen::VectorXd epsilon;  // 2L band energies
  Eigen::MatrixXd phi_a;    // (2L x L), phi_a(m, j-1)
  Eigen::MatrixXd phi_b;
  Eigen::VectorXd norms;    // N_m = sum_j phi_a^2 + phi_b^2

  double amplitude(int m, int j, Sublattice s) const {
    return s == Sublattice::A ? phi_a(m, j - 1) : phi_b(m, j - 1);
  }
};

struct SimilarityTransform {
  Eigen::VectorXd S_diag;      // diagonal of S (emitter entry first)
  std::vector<int> exponents;  // S_diag(i) = r^exponents[i]
  double r = 1.0;
  double J1bar = 0.0;
  SystemMatrix transformed;    // S^{-1} H S
};

struct DressedStateResult {
  double E = 0.0;            // transformed-frame energy (pole-equation root)
  cplx E_d;                  // lab-frame eigenvalue
  Wavefunction wavefunction; // lab frame, unit norm, c_e phase-fixed
  cplx cbar_e;
  bool in_gap = false;
  double residual = 0.0;
};

inline double ssh_band_energy(double J1bar, double J2, double theta) {
  return std::sqrt(2.0 * J1bar * J2 * std::cos(theta) + J1bar * J1bar + J2 * J2);
}

/// Solve J1bar sin((L+1)theta) + J2 sin(L theta) = 0 for the L real roots in
/// (0, pi) and assemble energies, amplitudes, and norms. Throws
/// RootCountMismatch when the root count is not L (edge-mode regime).
inline SshObcBasis ssh_obc_eigenbasis(double J1bar, double J2, int L) {
  if (L < 2) throw std::invalid_argument("ssh_obc_eigenbasis: L must be >= 2");
  if (J1bar <= 0.0) throw std::invalid_argument("ssh_obc_eigenbasis: J1bar must be > 0");
  const double pi = std::acos(-1.0);
  auto f = [&](double th) {
    return J1bar * std::sin((L + 1) * th) + J2 * std::sin(L * th);
  };

  std::vector<double> roots;
  const int n_scan = 50 * L;
  double prev_th = pi / n_scan;
  double prev_f = f(prev_th);
  for (int i = 2; i < n_scan; ++i) {
    const double th = pi * i / n_scan;
    const double fi = f(th);
    if (prev_f == 0.0) {
      roots.push_back(prev_th);
    } else if (prev_f * fi < 0.0) {
      double lo = prev_th, hi = th, flo = prev_f;
      while (hi - lo > 1e-14) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if (flo * fm < 0.0) hi = mid;
        else { lo = mid; flo = fm; }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_th = th;
    prev_f = fi;
  }
  if (static_cast<int>(roots.size()) != L)
    throw RootCountMismatch("ssh_obc_eigenbasis: found " +
                            std::to_string(roots.size()) + " theta roots, expected " +
                            std::to_string(L) + " (leaving the trivial regime?)");

  SshObcBasis basis;
  basis.L = L;
  basis.J1bar = J1bar;
  basis.J2 = J2;
  basis.theta = Eigen::Map<Eigen::VectorXd>(roots.data(), L);
  basis.epsilon.resize(2 * L);
  basis.phi_a.resize(2 * L, L);
  basis.phi_b.resize(2 * L, L);
  basis.norms.resize(2 * L);
  for (int p = 0; p < L; ++p) {
    const double th = basis.theta(p);
    const double mag = ssh_band_energy(J1bar, J2, th);
    for (int sign = 0; sign < 2; ++sign) {
      const int m = 2 * p + sign;
      const double eps = (sign == 0 ? -mag : mag);
      basis.epsilon(m) = eps;
      double norm = 0.0;
      for (int j = 1; j <= L; ++j) {
        const double pa = std::sin(j * th) + (J2 / J1bar) * std::sin((j - 1) * th);
        const double pb = (eps / J1bar) * std::sin(j * th);
        basis.phi_a(m, j - 1) = pa;
        basis.phi_b(m, j - 1) = pb;
        norm += pa * pa + pb * pb;
      }
      basis.norms(m) = norm;
    }
  }
  return basis;
}

/// Hermitian-frame bath Hamiltonian: SSH(J1bar, J2) with the uniform
/// -i kappa/2 on-site loss, OBC.
inline Eigen::MatrixXcd build_transformed_bath(double J1bar, double J2,
                                               double kappa, int L) {
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2 * L, 2 * L);
  const cplx onsite = -iu * (kappa / 2.0);
  for (int j = 0; j < L; ++j) {
    const int a = 2 * j, b = a + 1;
    H(a, a) = onsite;
    H(b, b) = onsite;
    H(a, b) = J1bar;
    H(b, a) = J1bar;
    if (j + 1 < L) {
      H(b, b + 1) = J2;
      H(b + 1, b) = J2;
    }
  }
  return H;
}

/// Diagonal similarity S with r = sqrt((J1+kappa/2)/(J1-kappa/2)) that maps
/// the coupled OBC system onto the Hermitian SSH chain with hopping
/// J1bar = sqrt((J1-kappa/2)(J1+kappa/2)) plus uniform loss. Exponents are
/// chosen so the emitter entry and its attachment site both carry r^0.
inline SimilarityTransform similarity_transform(const BathParams& params,
                                                const EmitterAttachment& attach) {
  params.validate();
  if (params.boundary != Boundary::OBC)
    throw PreconditionViolated("similarity_transform: OBC only");
  if (params.J1 <= params.kappa / 2.0)
    throw DegenerateGbz("similarity_transform: requires J1 > kappa/2");
  if (attach.unit_cell < 1 || attach.unit_cell > params.L)
    throw AttachmentOutOfRange("similarity_transform: unit_cell outside [1, L]");

  SimilarityTransform st;
  st.r = std::sqrt((params.J1 + params.kappa / 2.0) /
                   (params.J1 - params.kappa / 2.0));
  st.J1bar = std::sqrt((params.J1 - params.kappa / 2.0) *
                       (params.J1 + params.kappa / 2.0));

  const int ref = attach.unit_cell - (attach.sublattice == Sublattice::A ? 1 : 0);
  st.exponents.assign(1 + 2 * params.L, 0);
  for (int j = 1; j <= params.L; ++j) {
    st.exponents[2 * j - 1] = (j - 1) - ref;  // a_j
    st.exponents[2 * j] = j - ref;            // b_j
  }

  const SystemMatrix sys = build_system(params, {attach});
  st.S_diag.resize(sys.dim());
  for (int i = 0; i < sys.dim(); ++i) st.S_diag(i) = std::pow(st.r, st.exponents[i]);

  st.transformed = sys;
  // conjugate entrywise via integer exponent differences so that banded
  // entries collapse to r^{+-1} exactly
  for (int i = 0; i < sys.dim(); ++i)
    for (int j = 0; j < sys.dim(); ++j)
      if (sys.entries(i, j) != cplx{0.0, 0.0})
        st.transformed.entries(i, j) =
            sys.entries(i, j) * std::pow(st.r, st.exponents[j] - st.exponents[i]);
  return st;
}

namespace detail {

struct PoleEquation {
  double delta0;
  const Eigen::VectorXd& eps;  // sorted ascending
  const Eigen::VectorXd& w;    // matching weights, w_m >= 0

  double value(double E) const {
    double s = E - delta0;
    for (int m = 0; m < eps.size(); ++m)
      if (w(m) != 0.0) s -= w(m) / (E - eps(m));
    return s;
  }
  double slope(double E) const {
    double s = 1.0;
    for (int m = 0; m < eps.size(); ++m) {
      if (w(m) == 0.0) continue;
      const double d = E - eps(m);
      s += w(m) / (d * d);
    }
    return s;
  }
};

// One root of the strictly increasing pole equation inside (lo, hi).
inline double bisect_increasing(const PoleEquation& f, double lo, double hi) {
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  double gap = hi - lo;
  double a = lo + gap * 1e-3, b = hi - gap * 1e-3;
  // pull endpoints toward the poles until the signs bracket
  for (int it = 0; it < 60 && f.value(a) > 0.0; ++it) {
    gap *= 0.125;
    a = lo + gap * 1e-3;
    if (gap < 8 * std::numeric_limits<double>::epsilon() * scale) return a;
  }
  gap = hi - lo;
  for (int it = 0; it < 60 && f.value(b) < 0.0; ++it) {
    gap *= 0.125;
    b = hi - gap * 1e-3;
    if (gap < 8 * std::numeric_limits<double>::epsilon() * scale) return b;
  }
  for (int it = 0; it < 200 && b - a > std::numeric_limits<double>::epsilon() * scale; ++it) {
    const double mid = 0.5 * (a + b);
    if (f.value(mid) < 0.0) a = mid;
    else b = mid;
  }
  double x = 0.5 * (a + b);
  for (int it = 0; it < 4; ++it) {
    const double step = f.value(x) / f.slope(x);
    if (!std::isfinite(step)) break;
    const double next = x - step;
    if (!(next > lo && next < hi)) break;
    x = next;
  }
  return x;
}

}  // namespace detail

/// All real roots of the dressed-state pole equation
/// E - delta0 - g^2 sum_m phi_{m,alpha}(j0)^2 / ((E - eps_m) N_m) = 0,
/// exact for gamma = kappa. Lab-frame eigenvalues are E_d = E - i kappa/2;
/// the root between the two bands is flagged in_gap.
inline std::vector<DressedStateResult> dressed_state_poles(
    const BathParams& params, const EmitterAttachment& attach, double delta0,
    double g) {
  params.validate();
  EmitterAttachment em = attach;
  em.delta0 = delta0;
  em.g = g;
  em.gamma = params.kappa;  // the frame where the pole equation is exact

  const SimilarityTransform st = similarity_transform(params, em);
  const SshObcBasis basis = ssh_obc_eigenbasis(st.J1bar, params.J2, params.L);
  const int n = 2 * params.L;
  const int j0 = em.unit_cell;

  // sort poles ascending, carry weights along
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return basis.epsilon(a) < basis.epsilon(b); });
  Eigen::VectorXd eps(n), w(n);
  for (int i = 0; i < n; ++i) {
    const int m = order[i];
    eps(i) = basis.epsilon(m);
    const double amp = basis.amplitude(m, j0, em.sublattice);
    w(i) = g * g * amp * amp / basis.norms(m);
  }

  const detail::PoleEquation f{delta0, eps, w};
  const double bound = std::abs(delta0) + st.J1bar + params.J2 +
                       g * g * params.L + 1.0;
  std::vector<double> roots;
  roots.push_back(detail::bisect_increasing(f, -bound, eps(0)));
  for (int i = 0; i + 1 < n; ++i)
    roots.push_back(detail::bisect_increasing(f, eps(i), eps(i + 1)));
  roots.push_back(detail::bisect_increasing(f, eps(n - 1), bound));

  // middle gap of the trivial-regime band structure
  double gap_lo = 0.0, gap_hi = 0.0;
  for (int i = 0; i + 1 < n; ++i)
    if (eps(i) < 0.0 && eps(i + 1) > 0.0) { gap_lo = eps(i); gap_hi = eps(i + 1); }

  const SystemMatrix lab = build_system(params, {em});
  std::vector<DressedStateResult> out;
  out.reserve(roots.size());
  for (const double E : roots) {
    DressedStateResult res;
    res.E = E;
    res.E_d = E - iu * (params.kappa / 2.0);
    res.in_gap = (E > gap_lo && E < gap_hi);
    // transformed-frame amplitudes, then psi = S psi_bar
    Eigen::VectorXcd bar = Eigen::VectorXcd::Zero(1 + n);
    int nearest = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(E - eps(i)) < std::abs(E - eps(nearest))) nearest = i;
    if (w(nearest) < 1e-30 && std::abs(E - eps(nearest)) < 1e-9 * (1.0 + std::abs(E))) {
      // structural root pinned to a decoupled pole: the pure bath mode
      res.cbar_e = 0.0;
      const int m = order[nearest];
      const double nm = std::sqrt(basis.norms(m));
      for (int j = 1; j <= params.L; ++j) {
        bar(2 * j - 1) = basis.phi_a(m, j - 1) / nm;
        bar(2 * j) = basis.phi_b(m, j - 1) / nm;
      }
    } else {
      res.cbar_e = std::sqrt(1.0 / f.slope(E));
      bar(0) = res.cbar_e;
      for (int i = 0; i < n; ++i) {
        if (w(i) == 0.0) continue;
        const int m = order[i];
        const double amp = basis.amplitude(m, j0, em.sublattice);
        const double nm = std::sqrt(basis.norms(m));
        const double cm = g * amp * std::real(res.cbar_e) / (nm * (E - eps(i)));
        for (int j = 1; j <= params.L; ++j) {
          bar(2 * j - 1) += cm * basis.phi_a(m, j - 1) / nm;
          bar(2 * j) += cm * basis.phi_b(m, j - 1) / nm;
        }
      }
    }
    Eigen::VectorXcd lab_vec = st.S_diag.asDiagonal() * bar;
    Wavefunction wf = Wavefunction::from_vector(lab_vec, 1, params.L);
    wf.normalize();
    wf.fix_phase();
    res.residual = (lab.entries * wf.to_vector() - res.E_d * wf.to_vector()).norm();
    res.wavefunction = std::move(wf);
    out.push_back(std::move(res));
  }
  return out;
}

/// Closed-form dressed state on the gap-closing line J2 = J1 - kappa/2 for
/// Delta = -i kappa/2. Attachment on a gives the chiral-extended state
/// (uniform alternating b-amplitudes to the right of the emitter);
/// attachment on b gives the left-localized bound state with per-site decay
/// J2/(J2+kappa).
inline Wavefunction chiral_extended_analytic(const BathParams& params,
                                             const EmitterAttachment& attach) {
  params.validate();
  if (params.boundary != Boundary::OBC)
    throw PreconditionViolated("chiral_extended_analytic: OBC only");
  const double scale = std::abs(params.J1) + std::abs(params.J2) + params.kappa;
  if (std::abs(params.J2 - (params.J1 - params.kappa / 2.0)) > 1e-12 * scale)
    throw PreconditionViolated("chiral_extended_analytic: requires J2 = J1 - kappa/2");
  if (std::abs(attach.delta0) > 1e-12 * scale ||
      std::abs(attach.gamma - params.kappa) > 1e-12 * scale)
    throw PreconditionViolated("chiral_extended_analytic: requires Delta = -i kappa/2");
  if (attach.g <= 0.0)
    throw PreconditionViolated("chiral_extended_analytic: requires g > 0");
  if (attach.unit_cell < 1 || attach.unit_cell > params.L)
    throw AttachmentOutOfRange("chiral_extended_analytic: unit_cell outside [1, L]");

  const int L = params.L;
  const int j0 = attach.unit_cell;
  Wavefunction wf;
  wf.c_e.resize(1);
  wf.c_e(0) = 1.0;
  wf.c_photon = Eigen::MatrixXcd::Zero(L, 2);
  if (attach.sublattice == Sublattice::A) {
    const double cb0 = -attach.g / params.J2;  // g c_e + J2 c_{j0,b} = 0
    for (int j = j0; j <= L; ++j)
      wf.c_photon(j - 1, 1) = cb0 * ((j - j0) % 2 == 0 ? 1.0 : -1.0);
  } else {
    const double ca0 = -attach.g / (params.J2 + params.kappa);
    wf.c_photon(j0 - 1, 0) = ca0;
    for (int j = j0 - 1; j >= 1; --j)
      wf.c_photon(j - 1, 0) =
          -params.J2 / (params.J2 + params.kappa) * wf.c_photon(j, 0);
  }
  wf.normalize();
  wf.fix_phase();
  return wf;
}

/// Middle bulk gap (in Re E) of the clean OBC bath spectrum.
inline std::pair<double, double> bath_bulk_gap(const BathParams& params) {
  const ComplexSpectrum bath = obc_spectrum(build_bath(params).entries);
  Eigen::VectorXd re = bath.eigenvalues.real();
  std::sort(re.data(), re.data() + re.size());
  return {re(params.L - 1), re(params.L)};
}

/// In-gap dressed-state selection applied to an already-built single-emitter
/// system matrix (also used for disordered realizations): the eigenvalue
/// inside the given bulk gap with maximal emitter overlap.
inline DressedStateResult dressed_state_from_matrix(const BathParams& params,
                                                    const SystemMatrix& sys,
                                                    double gap_lo, double gap_hi) {
  if (sys.n_emitters != 1)
    throw PreconditionViolated("dressed_state selection expects a single emitter");

  const ComplexSpectrum full = obc_spectrum(sys.entries);
  int best = -1;
  double best_weight = 0.0;
  for (int m = 0; m < full.eigenvalues.size(); ++m) {
    const double x = full.eigenvalues(m).real();
    if (x <= gap_lo || x >= gap_hi) continue;
    const double weight = std::norm(full.right(0, m));
    if (weight > best_weight) {
      best_weight = weight;
      best = m;
    }
  }
  if (best < 0 || best_weight <= 1e-6)
    throw NoInGapState("no in-gap eigenvalue with emitter weight > 1e-6");

  DressedStateResult res;
  res.E_d = full.eigenvalues(best);
  res.E = std::real(res.E_d + iu * (params.kappa / 2.0));
  res.in_gap = true;
  Wavefunction wf = Wavefunction::from_vector(full.right.col(best), 1, sys.L);
  wf.normalize();
  wf.fix_phase();
  res.cbar_e = wf.c_e(0);
  res.residual = (sys.entries * wf.to_vector() - res.E_d * wf.to_vector()).norm();
  res.wavefunction = std::move(wf);
  return res;
}

/// In-gap dressed state of the full complex system for arbitrary gamma.
inline DressedStateResult dressed_state_numeric(const BathParams& params,
                                                const EmitterAttachment& attach,
                                                double delta0, double gamma,
                                                double g) {
  params.validate();
  EmitterAttachment em = attach;
  em.delta0 = delta0;
  em.gamma = gamma;
  em.g = g;
  const SystemMatrix sys = build_system(params, {em});
  const auto [gap_lo, gap_hi] = bath_bulk_gap(params);
  return dressed_state_from_matrix(params, sys, gap_lo, gap_hi);
}

}  // namespace nhbath
