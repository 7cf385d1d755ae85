// core.hpp — shared domain types and error taxonomy
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nhbath {

using cplx = std::complex<double>;

// imaginary unit
inline constexpr cplx iu{0.0, 1.0};

enum class Boundary { OBC, PBC };
enum class Sublattice { A, B };

inline const char* to_string(Sublattice s) { return s == Sublattice::A ? "a" : "b"; }
inline const char* to_string(Boundary b) { return b == Boundary::OBC ? "obc" : "pbc"; }

// Errors thrown by the numerics layer. All derive from Error so the CLI can
// map them to a single "numeric failure" exit status.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
  virtual const char* name() const { return "Error"; }
};

#define NHBATH_ERROR(kind)                                   \
  struct kind : Error {                                      \
    using Error::Error;                                      \
    const char* name() const override { return #kind; }      \
  }

NHBATH_ERROR(AttachmentOutOfRange);
NHBATH_ERROR(NoConvergence);
NHBATH_ERROR(OnSpectrum);
NHBATH_ERROR(DegenerateGbz);
NHBATH_ERROR(AtTransition);
NHBATH_ERROR(RootCountMismatch);
NHBATH_ERROR(PreconditionViolated);
NHBATH_ERROR(NoInGapState);
NHBATH_ERROR(SingularMatrix);

#undef NHBATH_ERROR

/// Photonic SSH bath: intracell hop J1, intercell hop J2, nonlocal loss rate
/// kappa, L unit cells (sublattices a and b), open or periodic boundary.
struct BathParams {
  double J1 = 1.6;
  double J2 = 1.0;
  double kappa = 1.2;
  int L = 20;
  Boundary boundary = Boundary::OBC;

  void validate() const {
    if (kappa < 0.0) throw std::invalid_argument("BathParams: kappa must be >= 0");
    if (L < 2) throw std::invalid_argument("BathParams: L must be >= 2");
  }
};

/// A two-level emitter attached to one cavity of the bath. unit_cell is
/// 1-based. The complex detuning entering the single-excitation Hamiltonian
/// is delta0 - i*gamma/2.
struct EmitterAttachment {
  int unit_cell = 1;
  Sublattice sublattice = Sublattice::A;
  double g = 0.5;
  double delta0 = 0.0;
  double gamma = 0.0;

  cplx detuning() const { return {delta0, -0.5 * gamma}; }
};

/// Single-excitation amplitudes: one complex amplitude per emitter plus
/// site-resolved photon amplitudes c(j, alpha). Photon storage is L x 2 with
/// column 0 = sublattice a, column 1 = sublattice b, row j-1 = unit cell j.
struct Wavefunction {
  enum class Norm { RightNormalized, Biorthogonal };

  Eigen::VectorXcd c_e;
  Eigen::MatrixXcd c_photon;
  Norm norm_convention = Norm::RightNormalized;

  double total_weight() const {
    return c_e.squaredNorm() + c_photon.squaredNorm();
  }

  int n_emitters() const { return static_cast<int>(c_e.size()); }
  int cells() const { return static_cast<int>(c_photon.rows()); }

  cplx photon(int j, Sublattice s) const {
    return c_photon(j - 1, s == Sublattice::B ? 1 : 0);
  }

  /// Flatten to the canonical basis order [e_1..e_N, a_1, b_1, ..., a_L, b_L].
  Eigen::VectorXcd to_vector() const {
    const int L = cells();
    Eigen::VectorXcd v(n_emitters() + 2 * L);
    v.head(n_emitters()) = c_e;
    for (int j = 0; j < L; ++j) {
      v(n_emitters() + 2 * j) = c_photon(j, 0);
      v(n_emitters() + 2 * j + 1) = c_photon(j, 1);
    }
    return v;
  }

  static Wavefunction from_vector(const Eigen::VectorXcd& v, int n_emitters, int L,
                                  Norm convention = Norm::RightNormalized) {
    Wavefunction w;
    w.c_e = v.head(n_emitters);
    w.c_photon.resize(L, 2);
    for (int j = 0; j < L; ++j) {
      w.c_photon(j, 0) = v(n_emitters + 2 * j);
      w.c_photon(j, 1) = v(n_emitters + 2 * j + 1);
    }
    w.norm_convention = convention;
    return w;
  }

  void normalize() {
    const double n = std::sqrt(total_weight());
    if (n > 0.0) {
      c_e /= n;
      c_photon /= n;
    }
  }

  /// Rotate the global phase so c_e(0) is real positive; falls back to the
  /// largest photon amplitude when the emitter weight is negligible.
  void fix_phase() {
    cplx ref = c_e.size() > 0 ? c_e(0) : cplx{0.0, 0.0};
    if (std::abs(ref) < 1e-12) {
      Eigen::Index r = 0, c = 0;
      c_photon.cwiseAbs().maxCoeff(&r, &c);
      ref = c_photon(r, c);
    }
    if (std::abs(ref) == 0.0) return;
    const cplx phase = std::abs(ref) / ref;
    c_e *= phase;
    c_photon *= phase;
  }
};

}  // namespace nhbath
