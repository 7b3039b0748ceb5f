#pragma once

// Weyl-Heisenberg covariant SIC sets: displacement operators, group orbits of
// a fiducial vector, frame-potential minimization with seeded restarts, and
// certification of candidate sets against the defining overlap, identity and
// rank conditions.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sicprob/qcore.hpp"
#include "sicprob/rng.hpp"

namespace sicprob {

// Where a fiducial (or the set built from it) came from: "search", "analytic"
// or "file", plus the search metadata when applicable.
struct Provenance {
    std::string method = "file";
    uint64_t seed = 0;
    int restart = 0;
    int iterations = 0;
    double residual = 0.0;  // certification residual (max overlap deviation)
};

// A candidate fiducial: unit vector in C^d whose Weyl-Heisenberg orbit is (or
// is hoped to be) a SIC set. d = 1 is rejected everywhere in this module; the
// SIC degenerates to a single projector there.
class Fiducial {
  public:
    Fiducial(int d, ComplexVector vector, Provenance provenance = {});

    int d() const { return d_; }
    const ComplexVector& vector() const { return vector_; }
    DensityOperator projector() const;
    const Provenance& provenance() const { return provenance_; }

  private:
    int d_;
    ComplexVector vector_;
    Provenance provenance_;
};

// The d^2 rank-one projectors Pi_i of a candidate set together with the
// rescaled effects H_i = (1/d) Pi_i. Construction enforces the structural
// invariants (rank-one projectors that resolve the identity); the defining
// equal-overlap condition is what verify_sic certifies, so non-SIC orbits are
// still representable and reportable.
class SicSet {
  public:
    SicSet(int d, std::vector<ComplexMatrix> projectors, Provenance provenance = {});

    int d() const { return d_; }
    int size() const { return static_cast<int>(projectors_.size()); }
    const ComplexMatrix& projector(int i) const { return projectors_.at(i); }
    const std::vector<ComplexMatrix>& projectors() const { return projectors_; }
    ComplexMatrix effect(int i) const { return projectors_.at(i) / static_cast<double>(d_); }
    // The effects as a measurement usable with born_probs.
    Povm povm() const;
    const Provenance& provenance() const { return provenance_; }

  private:
    int d_;
    std::vector<ComplexMatrix> projectors_;
    Provenance provenance_;
};

struct VerificationReport {
    int dim = 0;
    double max_overlap_deviation = 0.0;  // max_{i != j} | tr(Pi_i Pi_j) - 1/(d+1) |
    double identity_residual = 0.0;      // max-abs entry of sum_i H_i - I
    int gram_rank = 0;                   // rank of the d^2 x d^2 Gram matrix
    bool passed = false;
    double tolerance = 0.0;
};

struct RestartDiagnostics {
    int restart = 0;
    uint64_t stream_seed = 0;
    int iterations = 0;
    double final_potential = 0.0;  // frame potential F at the final iterate
    double final_residual = 0.0;   // centered objective G (zero exactly at a SIC)
    bool converged = false;        // G reached the internal stopping threshold
};

struct SearchReport {
    int d = 0;
    uint64_t seed = 0;
    int best_restart = -1;
    double best_potential = 0.0;
    double best_residual = 0.0;  // centered objective at the selected restart
    bool converged = false;      // selected orbit passes verify_sic at the requested tol
    VerificationReport verification;
    std::vector<RestartDiagnostics> restarts;
};

struct SearchOutcome {
    Fiducial fiducial;  // best vector found, converged or not
    SearchReport report;
};

struct SearchOptions {
    int restarts = 10;
    int max_iter = 25000;   // per restart
    double tol = 1e-10;     // certification tolerance for the final verify
};

// Dense d x d displacement D_{p,q} = tau^{pq} X^p Z^q with X|k> = |k+1 mod d>,
// Z|k> = omega^k |k>, omega = exp(2 pi i/d), tau = -exp(i pi/d). p and q are
// reduced mod d before the phase is formed.
UnitaryOperator displacement(int d, int p, int q);

// D_{p,q} |psi| in O(d) without forming the matrix.
ComplexVector apply_displacement(const ComplexVector& psi, int d, int p, int q);

// The orbit states D_{p,q}|psi> for p,q in {0..d-1}, lexicographic in (p, q),
// so index i = p*d + q. Element (0,0) is the fiducial itself, bit for bit.
std::vector<ComplexVector> orbit_vectors(const Fiducial& fiducial);

// The orbit as a candidate set of rank-one projectors (same index order).
SicSet orbit(const Fiducial& fiducial);

// Frame potential F = sum_{(p,q) != (0,0)} |<psi| D_{p,q} |psi>|^4 of the
// normalized input; minimum over unit vectors is (d-1)/(d+1), attained exactly
// on SIC fiducials.
double frame_potential(const ComplexVector& psi, int d);
double frame_potential(const Fiducial& fiducial);

// Centered objective G = sum_{(p,q) != (0,0)} (|<psi|D|psi>|^2 - 1/(d+1))^2.
// On the unit sphere the displacement overlaps satisfy sum_{g != 0} |c_g|^2 =
// d - 1 identically, which makes G = F - (d-1)/(d+1) exactly -- the same
// landscape as F but computable without cancellation, so it resolves all the
// way to ~1e-30 near a solution. The search minimizes G; note also that every
// pairwise orbit overlap deviation is bounded by sqrt(G).
double centered_potential(const ComplexVector& psi, int d);

// Gradient of F composed with normalization, as a function of the raw
// (not necessarily unit) vector v, packed [dF/dRe v_0, dF/dIm v_0, ...].
// Exposed so the optimizer's calculus can be checked against central finite
// differences.
RealVector frame_potential_gradient(const ComplexVector& v, int d);

// Riemannian minimization of G over the unit sphere with Barzilai-Borwein
// steps and a non-monotone backtracking line search. Deterministic for fixed
// (d, seed, options): restart r draws its start from substream r of `seed`,
// and the winner is the lowest final G with ties to the lowest restart index,
// so the outcome does not depend on evaluation order. Non-convergence is
// reported, not thrown: the outcome carries the best vector found and
// report.converged = false.
SearchOutcome search_fiducial(int d, uint64_t seed, const SearchOptions& options = {});

// Certify a candidate: equal-overlap condition, resolution of the identity,
// and full Gram rank d^2 (singular values above 1e-8). `passed` requires all
// three.
VerificationReport verify_sic(const SicSet& candidate, double tol = 1e-10);

}  // namespace sicprob
