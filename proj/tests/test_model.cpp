// Hamiltonian construction: matrix layout, Bloch form, coupled system,
// Hermiticity limits, and PBC/Bloch consistency.
#include <catch2/catch_amalgamated.hpp>

#include "nhbath/model.hpp"
#include "nhbath/spectral.hpp"

#include <random>

using namespace nhbath;
using Catch::Approx;

TEST_CASE("OBC bath matrix matches the alternating-hopping layout") {
  BathParams p{1.6, 1.0, 1.2, 2, Boundary::OBC};
  const SystemMatrix sm = build_bath(p);
  REQUIRE(sm.dim() == 4);
  // 1-based entries (2,1) and (1,2) of the alternating-hopping layout
  CHECK(sm.entries(1, 0).real() == Approx(2.2));
  CHECK(sm.entries(0, 1).real() == Approx(1.0));
  CHECK(sm.entries(1, 2).real() == Approx(1.0));
  CHECK(sm.entries(2, 1).real() == Approx(1.0));
  for (int i = 0; i < 4; ++i) CHECK(sm.entries(i, i) == cplx{0.0, -0.6});
  CHECK(sm.basis_order == std::vector<std::string>{"a1", "b1", "a2", "b2"});
}

TEST_CASE("zero dissipation gives a Hermitian bath") {
  BathParams p{1.3, 0.7, 0.0, 5, Boundary::OBC};
  const SystemMatrix sm = build_bath(p);
  CHECK((sm.entries - sm.entries.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Bloch matrix at k=0") {
  BathParams p{2.5, 1.0, 1.2, 4, Boundary::PBC};
  const Eigen::Matrix2cd H = build_bloch(p, 0.0);
  CHECK(H(0, 1).real() == Approx(2.9));
  CHECK(H(1, 0).real() == Approx(4.1));
  CHECK(std::abs(H(0, 1).imag()) < 1e-15);
  CHECK(H(0, 0) == cplx{0.0, -0.6});
}

TEST_CASE("Bloch eigenvalues match the closed form") {
  BathParams p{1.1, 0.9, 0.7, 4, Boundary::PBC};
  for (const double k : {-2.0, -0.3, 0.0, 1.7}) {
    const Eigen::Matrix2cd H = build_bloch(p, k);
    const Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(H, false);
    const auto [hab, hba] = bloch_offdiag(p, k);
    const cplx w = std::sqrt(hab * hba);
    const cplx e1 = -iu * (p.kappa / 2.0) - w;
    const cplx e2 = -iu * (p.kappa / 2.0) + w;
    const double d1 = std::min(std::abs(es.eigenvalues()(0) - e1),
                               std::abs(es.eigenvalues()(0) - e2));
    const double d2 = std::min(std::abs(es.eigenvalues()(1) - e1),
                               std::abs(es.eigenvalues()(1) - e2));
    CHECK(d1 < 1e-12);
    CHECK(d2 < 1e-12);
  }
}

TEST_CASE("decoupled emitter block-diagonalizes with eigenvalue Delta") {
  BathParams p{1.6, 1.0, 1.2, 8, Boundary::OBC};
  EmitterAttachment e;
  e.unit_cell = 4;
  e.g = 0.0;
  e.delta0 = 0.35;
  e.gamma = 0.9;
  const SystemMatrix sm = build_system(p, {e});
  REQUIRE(sm.dim() == 17);
  CHECK(sm.entries.row(0).tail(16).cwiseAbs().maxCoeff() == 0.0);
  CHECK(sm.entries(0, 0) == e.detuning());
}

TEST_CASE("Fig. 3 system is 41x41 with one in-gap eigenvalue") {
  BathParams p{1.6, 1.0, 1.2, 20, Boundary::OBC};
  EmitterAttachment e;
  e.unit_cell = 10;
  e.g = 0.5;
  e.gamma = p.kappa;
  const SystemMatrix sm = build_system(p, {e});
  REQUIRE(sm.dim() == 41);
  const ComplexSpectrum bath = obc_spectrum(build_bath(p).entries);
  Eigen::VectorXd re = bath.eigenvalues.real();
  std::sort(re.data(), re.data() + re.size());
  const double lo = re(p.L - 1), hi = re(p.L);
  const ComplexSpectrum full = obc_spectrum(sm.entries);
  int in_gap = 0;
  for (int i = 0; i < full.eigenvalues.size(); ++i)
    if (full.eigenvalues(i).real() > lo + 1e-9 &&
        full.eigenvalues(i).real() < hi - 1e-9)
      ++in_gap;
  CHECK(in_gap == 1);
}

TEST_CASE("two-emitter system has dim 2 + 2L") {
  BathParams p{1.2, 1.0, 0.4, 100, Boundary::OBC};
  EmitterAttachment e1, e2;
  e1.unit_cell = 45;
  e2.unit_cell = 55;
  e1.g = e2.g = 0.4;
  e1.gamma = e2.gamma = 0.4;
  CHECK(build_system(p, {e1, e2}).dim() == 202);
}

TEST_CASE("parameter invariants are enforced") {
  BathParams neg{1.0, 1.0, -0.1, 4, Boundary::OBC};
  CHECK_THROWS_AS(build_bath(neg), std::invalid_argument);
  BathParams tiny{1.0, 1.0, 0.5, 1, Boundary::OBC};
  CHECK_THROWS_AS(build_bath(tiny), std::invalid_argument);
  BathParams p{1.6, 1.0, 1.2, 4, Boundary::OBC};
  EmitterAttachment a, b;
  a.unit_cell = b.unit_cell = 2;
  CHECK_THROWS_AS(build_system(p, {a, b}), std::invalid_argument);
}

TEST_CASE("attachment outside [1, L] is rejected") {
  BathParams p{1.6, 1.0, 1.2, 4, Boundary::OBC};
  EmitterAttachment e;
  e.unit_cell = 5;
  CHECK_THROWS_AS(build_system(p, {e}), AttachmentOutOfRange);
  e.unit_cell = 0;
  CHECK_THROWS_AS(build_system(p, {e}), AttachmentOutOfRange);
}

TEST_CASE("anti-Hermitian part is negative semidefinite") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    BathParams p;
    p.J1 = u(rng) - 1.0;
    p.J2 = u(rng) - 1.0;
    p.kappa = u(rng);
    p.L = 3 + static_cast<int>(u(rng) * 3);
    p.boundary = trial % 2 ? Boundary::PBC : Boundary::OBC;
    EmitterAttachment e;
    e.unit_cell = 1 + trial % p.L;
    e.g = u(rng);
    e.gamma = u(rng);
    e.delta0 = u(rng) - 1.0;
    const SystemMatrix sm = build_system(p, {e});
    const Eigen::MatrixXcd antiherm =
        (sm.entries - sm.entries.adjoint()) / (2.0 * iu);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(antiherm);
    CHECK(es.eigenvalues().maxCoeff() < 1e-12);
  }
}

TEST_CASE("PBC bath eigenvalues equal the Bloch union over k = 2 pi m / L") {
  BathParams p{0.8, 1.1, 0.9, 12, Boundary::PBC};
  const SystemMatrix sm = build_bath(p);
  const ComplexSpectrum spec = obc_spectrum(sm.entries);
  std::vector<cplx> bloch;
  const double pi = std::acos(-1.0);
  for (int m = 0; m < p.L; ++m) {
    const double k = 2.0 * pi * m / p.L;
    const auto [hab, hba] = bloch_offdiag(p, k);
    const cplx w = std::sqrt(hab * hba);
    bloch.push_back(-iu * (p.kappa / 2.0) - w);
    bloch.push_back(-iu * (p.kappa / 2.0) + w);
  }
  // greedy multiset matching
  std::vector<bool> used(bloch.size(), false);
  double worst = 0.0;
  for (int i = 0; i < spec.eigenvalues.size(); ++i) {
    double best = 1e300;
    int arg = -1;
    for (size_t j = 0; j < bloch.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(spec.eigenvalues(i) - bloch[j]);
      if (d < best) { best = d; arg = static_cast<int>(j); }
    }
    used[arg] = true;
    worst = std::max(worst, best);
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("basis permutation is a similarity: spectrum invariant") {
  BathParams p{1.4, 0.8, 0.6, 6, Boundary::OBC};
  EmitterAttachment e;
  e.unit_cell = 3;
  e.g = 0.3;
  e.gamma = 0.6;
  const SystemMatrix sm = build_system(p, {e});
  const int n = sm.dim();
  std::mt19937_64 rng(7);
  Eigen::VectorXi perm(n);
  std::iota(perm.data(), perm.data() + n, 0);
  std::shuffle(perm.data(), perm.data() + n, rng);
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) P(perm(i), i) = 1.0;
  const Eigen::MatrixXcd M2 = P * sm.entries * P.transpose();
  auto s1 = obc_spectrum(sm.entries).eigenvalues;
  auto s2 = obc_spectrum(M2).eigenvalues;
  CHECK((s1 - s2).cwiseAbs().maxCoeff() < 1e-10);
}
