// boundstates.hpp — emitter self-energy, bound-state root solving,
// momentum-space wavefunction reconstruction, and the closed-form chiral and
// hidden bound states with their atomic weights.
#pragma once

#include <algorithm>
#include <optional>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nhbath/core.hpp"
#include "nhbath/model.hpp"
#include "nhbath/spectral.hpp"

namespace nhbath {

struct BoundStateResult {
  enum class Kind { LineGapChiral, PointGapHidden, OutOfBand };

  cplx E_b;
  Wavefunction wavefunction;
  double residual = 0.0;   // ||(H_PBC - E_b) psi|| on the reconstruction ring
  int ring_cells = 0;      // ring size at which the residual passed
  Kind classification = Kind::OutOfBand;
};

inline const char* to_string(BoundStateResult::Kind k) {
  switch (k) {
    case BoundStateResult::Kind::LineGapChiral: return "line_gap_chiral";
    case BoundStateResult::Kind::PointGapHidden: return "point_gap_hidden";
    default: return "out_of_band";
  }
}

struct SearchRect {
  double re_min, re_max, im_min, im_max;
  bool contains(cplx z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min &&
           z.imag() <= im_max;
  }
};

namespace detail {

// det(z - H_k) = (z + i kappa/2)^2 - h_ab h_ba
inline cplx bloch_resolvent_det(const BathParams& p, cplx z, double k) {
  const auto [hab, hba] = bloch_offdiag(p, k);
  const cplx c = z + iu * (p.kappa / 2.0);
  return c * c - hab * hba;
}

}  // namespace detail

/// Atomic self-energy Sigma(z) = (1/L) sum_k g_k^dag (z - H_k)^{-1} g_k on a
/// uniform momentum grid of L_grid points. For a single emitter both
/// sublattices give (g^2/L) sum_k (z + i kappa/2)/det(z - H_k).
inline cplx self_energy(const BathParams& params, const EmitterAttachment& attach,
                        cplx z, int L_grid) {
  params.validate();
  if (L_grid < 4) throw std::invalid_argument("self_energy: L_grid must be >= 4");
  if (attach.g == 0.0) return 0.0;
  const double pi = std::acos(-1.0);
  const cplx c = z + iu * (params.kappa / 2.0);
  const double scale = std::pow(std::abs(params.J1) + std::abs(params.J2) +
                                    params.kappa + std::abs(z) + 1.0,
                                2);
  cplx sum = 0.0;
  for (int m = 0; m < L_grid; ++m) {
    const cplx det = detail::bloch_resolvent_det(params, z, 2.0 * pi * m / L_grid);
    if (std::abs(det) < 1e-10 * scale)
      throw OnSpectrum("self_energy: z lies on the PBC spectrum");
    sum += c / det;
  }
  return attach.g * attach.g * sum / static_cast<double>(L_grid);
}

/// Self-energy with the grid doubled until two successive evaluations agree.
inline cplx self_energy_converged(const BathParams& params,
                                  const EmitterAttachment& attach, cplx z,
                                  double tol = 1e-12, int max_grid = 1 << 20) {
  cplx prev = self_energy(params, attach, z, 512);
  for (int n = 1024; n <= max_grid; n *= 2) {
    const cplx cur = self_energy(params, attach, z, n);
    if (std::abs(cur - prev) < tol * (1.0 + std::abs(cur))) return cur;
    prev = cur;
  }
  throw NoConvergence("self_energy_converged: k-sum did not converge");
}

/// Bound-state wavefunction on a finite ring of L cells: momentum amplitudes
/// c_k = (E_b - H_k)^{-1} g_k c_e, inverse Fourier transform to real space,
/// |c_e|^2 fixed by the normalization sum. Right-normalized.
inline Wavefunction bound_state_wavefunction(const BathParams& params,
                                             const EmitterAttachment& attach,
                                             cplx E_b, int L) {
  params.validate();
  if (L < 2) throw std::invalid_argument("bound_state_wavefunction: L must be >= 2");
  const double pi = std::acos(-1.0);
  const cplx c = E_b + iu * (params.kappa / 2.0);
  const double scale = std::pow(std::abs(params.J1) + std::abs(params.J2) +
                                    params.kappa + std::abs(E_b) + 1.0,
                                2);

  Eigen::VectorXcd cka(L), ckb(L);
  double norm_sum = 0.0;
  for (int m = 0; m < L; ++m) {
    const double k = 2.0 * pi * m / L;
    const auto [hab, hba] = bloch_offdiag(params, k);
    const cplx det = c * c - hab * hba;
    if (std::abs(det) < 1e-10 * scale)
      throw OnSpectrum("bound_state_wavefunction: E_b lies on the ring spectrum");
    // (E_b - H_k)^{-1} = [[c, hab], [hba, c]] / det
    const cplx phase = std::exp(-iu * (k * attach.unit_cell));
    const cplx ga = attach.sublattice == Sublattice::A ? attach.g * phase : 0.0;
    const cplx gb = attach.sublattice == Sublattice::B ? attach.g * phase : 0.0;
    cka(m) = (c * ga + hab * gb) / det;
    ckb(m) = (hba * ga + c * gb) / det;
    norm_sum += std::norm(cka(m)) + std::norm(ckb(m));
  }
  const double ce = 1.0 / std::sqrt(1.0 + norm_sum / L);

  Wavefunction wf;
  wf.c_e.resize(1);
  wf.c_e(0) = ce;
  wf.c_photon.resize(L, 2);
  for (int j = 1; j <= L; ++j) {
    cplx ca = 0.0, cb = 0.0;
    for (int m = 0; m < L; ++m) {
      const cplx phase = std::exp(iu * (2.0 * pi * m / L * j));
      ca += phase * cka(m);
      cb += phase * ckb(m);
    }
    wf.c_photon(j - 1, 0) = ce * ca / static_cast<double>(L);
    wf.c_photon(j - 1, 1) = ce * cb / static_cast<double>(L);
  }
  wf.normalize();
  wf.fix_phase();
  return wf;
}

/// Closed-form chiral bound state in the line gap at E_b = Delta = -i kappa/2.
/// Attachment on a: support on sublattice b, j >= j0, geometric ratio
/// -J2/(J1 - kappa/2). Attachment on b: mirror, support on a for j <= j0.
inline Wavefunction chiral_bound_state_analytic(const BathParams& params,
                                                const EmitterAttachment& attach) {
  params.validate();
  const double scale = std::abs(params.J1) + std::abs(params.J2) + params.kappa + 1.0;
  if (std::abs(attach.delta0) > 1e-12 * scale ||
      std::abs(attach.gamma - params.kappa) > 1e-12 * scale)
    throw PreconditionViolated("chiral_bound_state_analytic: requires Delta = -i kappa/2");
  const double edge = attach.sublattice == Sublattice::A
                          ? params.J1 - params.kappa / 2.0
                          : params.J1 + params.kappa / 2.0;
  if (!(std::abs(params.J2) < std::abs(edge)))
    throw PreconditionViolated("chiral_bound_state_analytic: line-gap condition fails");
  if (attach.unit_cell < 1 || attach.unit_cell > params.L)
    throw AttachmentOutOfRange("chiral_bound_state_analytic: unit_cell outside [1, L]");

  const int L = params.L;
  const int j0 = attach.unit_cell;
  const double g = attach.g;
  Wavefunction wf;
  wf.c_e.resize(1);
  wf.c_photon = Eigen::MatrixXcd::Zero(L, 2);
  const double ce2 = (edge * edge - params.J2 * params.J2) /
                     (edge * edge - params.J2 * params.J2 + g * g);
  const double ce = std::sqrt(ce2);
  wf.c_e(0) = ce;
  if (attach.sublattice == Sublattice::A) {
    const double ratio = -params.J2 / edge;
    double amp = -g * ce / edge;
    for (int j = j0; j <= L; ++j) {
      wf.c_photon(j - 1, 1) = amp;
      amp *= ratio;
    }
  } else {
    const double ratio = -params.J2 / edge;  // c_{j-1,a} = ratio^{-1}... inward
    double amp = -g * ce / edge;             // c_{j0,a} = g c_e / (-J1 - kappa/2)
    for (int j = j0; j >= 1; --j) {
      wf.c_photon(j - 1, 0) = amp;
      amp *= ratio;
    }
  }
  wf.normalize();
  wf.fix_phase();
  return wf;
}

/// Emitter weight |c_e|^2 of a bound state at energy E_b. On the J1 = kappa/2
/// line this uses the closed-form residue expressions; otherwise it falls
/// back to the momentum normalization sum.
inline double atomic_weight(const BathParams& params,
                            const EmitterAttachment& attach, cplx E_b) {
  params.validate();
  const double g = attach.g;
  if (g == 0.0) return 1.0;
  const double scale = std::abs(params.J1) + std::abs(params.J2) + params.kappa + 1.0;
  const bool closed_form = std::abs(params.J1 - params.kappa / 2.0) < 1e-12 * scale &&
                           params.kappa > 0.0 && params.J2 != 0.0;
  if (closed_form) {
    const double J2 = params.J2, kap = params.kappa;
    const cplx c = E_b + iu * (kap / 2.0);
    const cplx v = J2 * J2 - c * c;
    const cplx w = 4.0 * std::conj(v);
    const cplx p = 4.0 * J2 * J2 * kap * kap + v * w;
    const cplx disc = std::sqrt(p * p - 16.0 * J2 * J2 * kap * kap * v * w);
    const cplx zp = (-p + disc) / (8.0 * J2 * kap * v);
    const cplx zm = (-p - disc) / (8.0 * J2 * kap * v);
    cplx inv = 1.0;
    if (attach.sublattice == Sublattice::A) {
      const cplx ua = 4.0 * J2 * J2 - 2.0 * iu * E_b * kap + 5.0 * kap * kap +
                      4.0 * std::norm(E_b) + 2.0 * iu * kap * std::conj(E_b);
      inv += 4.0 * g * g / w;
      if (std::abs(zp) < 1.0)
        inv += g * g * (4.0 * J2 * kap * zp * zp + ua * zp + 4.0 * J2 * kap) /
               (4.0 * J2 * kap * v * zp * (zp - zm));
      if (std::abs(zm) < 1.0)
        inv += g * g * (4.0 * J2 * kap * zm * zm + ua * zm + 4.0 * J2 * kap) /
               (4.0 * J2 * kap * v * zm * (zm - zp));
    } else {
      const cplx ub = 4.0 * J2 * J2 - 2.0 * iu * E_b * kap + kap * kap +
                      4.0 * std::norm(E_b) + 2.0 * iu * kap * std::conj(E_b);
      if (std::abs(zp) < 1.0) inv += g * g * ub / (4.0 * J2 * kap * v * (zp - zm));
      if (std::abs(zm) < 1.0) inv += g * g * ub / (4.0 * J2 * kap * v * (zm - zp));
    }
    return 1.0 / inv.real();
  }

  // generic path: |c_e|^2 = 1 / (1 + (1/L) sum_k ||(E_b - H_k)^{-1} g_k||^2)
  const double pi = std::acos(-1.0);
  auto ksum = [&](int n) {
    const cplx c = E_b + iu * (params.kappa / 2.0);
    double s = 0.0;
    for (int m = 0; m < n; ++m) {
      const double k = 2.0 * pi * m / n;
      const auto [hab, hba] = bloch_offdiag(params, k);
      const cplx det = c * c - hab * hba;
      if (attach.sublattice == Sublattice::A)
        s += (std::norm(c) + std::norm(hba)) / std::norm(det);
      else
        s += (std::norm(c) + std::norm(hab)) / std::norm(det);
    }
    return g * g * s / n;
  };
  double prev = ksum(512);
  for (int n = 1024; n <= (1 << 20); n *= 2) {
    const double cur = ksum(n);
    if (std::abs(cur - prev) < 1e-12 * (1.0 + cur)) return 1.0 / (1.0 + cur);
    prev = cur;
  }
  throw NoConvergence("atomic_weight: normalization k-sum did not converge");
}

/// Closed-form hidden bound state at J1 = kappa/2 for E_b inside the
/// point-gap loop. Piecewise geometric in eta = kappa J2 / (c^2 - J2^2),
/// c = E_b + i kappa/2; support strictly left of the emitter for either
/// attached sublattice.
inline Wavefunction hidden_bound_state_analytic(const BathParams& params,
                                                const EmitterAttachment& attach,
                                                cplx E_b) {
  params.validate();
  const double scale = std::abs(params.J1) + std::abs(params.J2) + params.kappa + 1.0;
  if (std::abs(params.J1 - params.kappa / 2.0) > 1e-12 * scale)
    throw PreconditionViolated("hidden_bound_state_analytic: requires J1 = kappa/2");
  const cplx c = E_b + iu * (params.kappa / 2.0);
  const cplx v = c * c - params.J2 * params.J2;
  if (!(std::abs(params.kappa * params.J2) > std::abs(v)))
    throw PreconditionViolated("hidden_bound_state_analytic: E_b outside the point gap");
  if (attach.unit_cell < 1 || attach.unit_cell > params.L)
    throw AttachmentOutOfRange("hidden_bound_state_analytic: unit_cell outside [1, L]");

  const cplx eta = params.kappa * params.J2 / v;
  const int L = params.L;
  const int j0 = attach.unit_cell;
  const double g = attach.g;
  const double ce = std::sqrt(atomic_weight(params, attach, E_b));

  Wavefunction wf;
  wf.c_e.resize(1);
  wf.c_e(0) = ce;
  wf.c_photon = Eigen::MatrixXcd::Zero(L, 2);
  const double kJ2 = params.kappa * params.J2;
  if (attach.sublattice == Sublattice::A) {
    for (int j = 1; j < j0; ++j) {
      const cplx en = std::pow(eta, j - j0 + 1);
      wf.c_photon(j - 1, 0) = -g * ce * c * en / kJ2;
      if (j == j0 - 1)
        wf.c_photon(j - 1, 1) = -g * ce / params.J2;
      else
        wf.c_photon(j - 1, 1) =
            -g * ce * en / params.J2 - g * ce * std::pow(eta, j - j0 + 2) / params.kappa;
    }
  } else {
    for (int j = 1; j <= j0; ++j) {
      wf.c_photon(j - 1, 0) = -g * ce * std::pow(eta, j - j0) / params.kappa;
      if (j < j0)
        wf.c_photon(j - 1, 1) = -g * ce * c * std::pow(eta, j - j0 + 1) / kJ2;
    }
  }
  wf.normalize();
  wf.fix_phase();
  return wf;
}

namespace detail {

// half-width of the line-gap strip along Re E (0 when only a point gap)
inline double line_gap_strip(const BathParams& params) {
  const double pi = std::acos(-1.0);
  double strip = std::numeric_limits<double>::infinity();
  for (int m = 0; m < 4096; ++m) {
    const auto [hab, hba] = bloch_offdiag(params, 2.0 * pi * m / 4096);
    strip = std::min(strip, std::abs(std::sqrt(hab * hba).real()));
  }
  return strip;
}

inline BoundStateResult package_bound_state(const BathParams& params,
                                            const EmitterAttachment& em, cplx z,
                                            double strip) {
  BoundStateResult res;
  res.E_b = z;
  const int winding = point_gap_winding(params, z);
  if (winding != 0) {
    res.classification = BoundStateResult::Kind::PointGapHidden;
  } else if (strip > 1e-9 && std::abs(z.real()) < strip) {
    res.classification = BoundStateResult::Kind::LineGapChiral;
  } else {
    res.classification = BoundStateResult::Kind::OutOfBand;
  }

  for (int ring = std::max(params.L, 64); ring <= 4096; ring *= 2) {
    Wavefunction wf = bound_state_wavefunction(params, em, z, ring);
    BathParams rp = params;
    rp.L = ring;
    rp.boundary = Boundary::PBC;
    const SystemMatrix ringsys = build_system(rp, {em});
    const Eigen::VectorXcd psi = wf.to_vector();
    const double resid = (ringsys.entries * psi - z * psi).norm();
    if (resid < 1e-6 || ring * 2 > 4096) {
      res.wavefunction = std::move(wf);
      res.residual = resid;
      res.ring_cells = ring;
      break;
    }
  }
  return res;
}

}  // namespace detail

/// Newton solve of E - Delta - Sigma(E) = 0 from a single seed (the bare
/// detuning by default). Returns nullopt when the iteration fails to lock
/// onto a root off the spectrum.
inline std::optional<BoundStateResult> bound_state_near(
    const BathParams& params, const EmitterAttachment& attach, cplx delta,
    std::optional<cplx> seed = std::nullopt) {
  params.validate();
  EmitterAttachment em = attach;
  em.delta0 = delta.real();
  em.gamma = -2.0 * delta.imag();
  if (em.gamma < 0.0)
    throw std::invalid_argument("bound_state_near: Im(delta) must be <= 0");

  cplx z = seed.value_or(delta);
  const int grid = 4096;
  auto f = [&](cplx w) { return w - delta - self_energy(params, em, w, grid); };
  try {
    for (int it = 0; it < 60; ++it) {
      const cplx fz = f(z);
      if (std::abs(fz) < 1e-12 * (1.0 + std::abs(z))) break;
      const double h = 1e-6 * (1.0 + std::abs(z));
      const cplx df = (f(z + h) - f(z - h)) / (2.0 * h);
      if (std::abs(df) < 1e-14) return std::nullopt;
      z -= fz / df;
    }
    const cplx fz = z - delta - self_energy_converged(params, em, z, 1e-13);
    if (std::abs(fz) > 1e-10) return std::nullopt;
    return detail::package_bound_state(params, em, z, detail::line_gap_strip(params));
  } catch (const OnSpectrum&) {
    return std::nullopt;
  }
}

/// All roots of E - Delta - Sigma(E) inside the search rectangle. Newton
/// iterations are seeded from local |f| minima on a 40x40 grid, polished to
/// |f| < 1e-10, deduplicated within 1e-8, classified by point-gap winding
/// and line-gap position, and packaged with a ring wavefunction whose
/// residual passed the doubling check.
inline std::vector<BoundStateResult> solve_bound_states(
    const BathParams& params, const EmitterAttachment& attach, cplx delta,
    const SearchRect& rect, std::vector<std::string>* log = nullptr) {
  params.validate();
  if (rect.re_max <= rect.re_min || rect.im_max <= rect.im_min)
    throw std::invalid_argument("solve_bound_states: empty search rectangle");

  // the search region must keep clear of the PBC spectrum
  for (const auto& pt : pbc_spectrum(params, 1024))
    for (const cplx E : pt.E)
      if (rect.contains(E))
        throw OnSpectrum("solve_bound_states: search rectangle intersects the PBC spectrum");

  EmitterAttachment em = attach;
  em.delta0 = delta.real();
  em.gamma = -2.0 * delta.imag();
  if (em.gamma < 0.0)
    throw std::invalid_argument("solve_bound_states: Im(delta) must be <= 0");

  const int grid_n = 40;
  const int search_grid = 2048;
  auto f = [&](cplx z, int n) { return z - delta - self_energy(params, em, z, n); };

  // coarse |f| landscape, keep local minima as Newton seeds
  Eigen::MatrixXd absf(grid_n, grid_n);
  Eigen::MatrixXcd zs(grid_n, grid_n);
  for (int a = 0; a < grid_n; ++a)
    for (int b = 0; b < grid_n; ++b) {
      const double x = rect.re_min + (rect.re_max - rect.re_min) * (a + 0.5) / grid_n;
      const double y = rect.im_min + (rect.im_max - rect.im_min) * (b + 0.5) / grid_n;
      zs(a, b) = cplx{x, y};
      absf(a, b) = std::abs(f(zs(a, b), search_grid));
    }
  std::vector<cplx> seeds;
  for (int a = 0; a < grid_n; ++a)
    for (int b = 0; b < grid_n; ++b) {
      bool is_min = true;
      for (int da = -1; da <= 1 && is_min; ++da)
        for (int db = -1; db <= 1 && is_min; ++db) {
          const int na = a + da, nb = b + db;
          if (na < 0 || nb < 0 || na >= grid_n || nb >= grid_n) continue;
          if (absf(na, nb) < absf(a, b)) is_min = false;
        }
      if (is_min) seeds.push_back(zs(a, b));
    }

  const double span = std::hypot(rect.re_max - rect.re_min, rect.im_max - rect.im_min);
  std::vector<cplx> roots;
  for (const cplx seed : seeds) {
    cplx z = seed;
    bool ok = false;
    for (int it = 0; it < 50; ++it) {
      const cplx fz = f(z, search_grid);
      if (std::abs(fz) < 1e-12 * (1.0 + std::abs(z))) { ok = true; break; }
      const double h = 1e-6 * (1.0 + std::abs(z));
      const cplx df = (f(z + h, search_grid) - f(z - h, search_grid)) / (2.0 * h);
      if (std::abs(df) < 1e-14) break;
      z -= fz / df;
      if (!rect.contains(z) &&
          std::abs(z - cplx{0.5 * (rect.re_min + rect.re_max),
                            0.5 * (rect.im_min + rect.im_max)}) > 2.0 * span)
        break;
    }
    if (!ok) {
      if (log) log->push_back("newton diverged from seed " + std::to_string(seed.real()) +
                              (seed.imag() < 0 ? "" : "+") + std::to_string(seed.imag()) + "i");
      continue;
    }
    if (!rect.contains(z)) continue;
    bool dup = false;
    for (const cplx r : roots)
      if (std::abs(r - z) < 1e-8) { dup = true; break; }
    if (!dup) roots.push_back(z);
  }
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  const double strip = detail::line_gap_strip(params);
  std::vector<BoundStateResult> out;
  for (const cplx root : roots) {
    // polish against the converged self-energy
    cplx z = root;
    for (int it = 0; it < 20; ++it) {
      const cplx fz = z - delta - self_energy_converged(params, em, z, 1e-13);
      if (std::abs(fz) < 1e-13 * (1.0 + std::abs(z))) break;
      const double h = 1e-6 * (1.0 + std::abs(z));
      const cplx df = (f(z + h, 1 << 14) - f(z - h, 1 << 14)) / (2.0 * h);
      z -= fz / df;
    }
    const cplx fz = z - delta - self_energy_converged(params, em, z, 1e-13);
    if (std::abs(fz) > 1e-10) {
      if (log) log->push_back("root polish failed near Re=" + std::to_string(z.real()));
      continue;
    }
    out.push_back(detail::package_bound_state(params, em, z, strip));
  }
  return out;
}

}  // namespace nhbath
