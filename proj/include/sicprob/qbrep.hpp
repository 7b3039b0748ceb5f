#pragma once

// The SIC probability representation: density operators as length-d^2
// probability vectors over a reference SIC measurement, the reconstruction
// map back, validity of probability vectors as states, and the urgleichung
// relating a factual ground measurement to the counterfactual sky-then-ground
// cascade, together with its unitary-ground variant and the generalized
// q-parameter family.

#include <utility>
#include <vector>

#include "sicprob/qcore.hpp"
#include "sicprob/sic.hpp"

namespace sicprob {

// SIC outcome probabilities P(H_i): d^2 entries, the representation's
// stand-in for a quantum state.
class ProbVector {
  public:
    ProbVector(int d, RealVector p);

    static ProbVector uniform(int d);

    int d() const { return d_; }
    int size() const { return static_cast<int>(p_.size()); }
    const RealVector& p() const { return p_; }

  private:
    int d_;
    RealVector p_;
};

// Conditional probabilities r[j][i] = P(D_j | H_i): row j = ground outcome,
// column i = sky (SIC) outcome, so there are d^2 columns and each column sums
// to 1.
class ConditionalMatrix {
  public:
    ConditionalMatrix(int d, RealMatrix r);

    int d() const { return d_; }
    int rows() const { return static_cast<int>(r_.rows()); }
    const RealMatrix& r() const { return r_; }

  private:
    int d_;
    RealMatrix r_;
};

// Which experimental path a probability belongs to: E1 is the factual ground
// measurement alone; E2 is the counterfactual cascade through the sky
// measurement. Metadata only; never changes arithmetic.
enum class PathLabel { E1, E2 };

const char* to_string(PathLabel label);

// Parameters of the generalized rule Q = alpha * LTP - beta with
// alpha = q d / 2 + 1, beta = q / 2 and outcome count n = q d (d - 1) / 2 + d.
// q = 0 is the classical Law of Total Probability; q = 2 is the urgleichung.
struct GeneralizedParams {
    int q = 0;
    int d = 0;
    int n = 0;
    double alpha = 0.0;
    double beta = 0.0;

    static GeneralizedParams from(int q, int d);
    // Validates a claimed n against the (q, d) formula.
    static GeneralizedParams from(int q, int d, int n);
};

// p_i = tr(rho H_i). Entries are bounded by 1/d (the pure-state maximum).
ProbVector rho_to_prob(const DensityOperator& rho, const SicSet& sic);

// The reconstruction rho = sum_i ((d+1) p_i - 1/d) Pi_i. Hermitian with unit
// trace, but not necessarily positive: an arbitrary probability vector need
// not describe a quantum state, which is exactly what validity_check reports.
ComplexMatrix prob_to_rho(const ProbVector& p, const SicSet& sic);

struct ValidityReport {
    bool valid = false;
    double min_eigenvalue = 0.0;
};

// valid iff the reconstruction's smallest eigenvalue is >= -tol.
ValidityReport validity_check(const ProbVector& p, const SicSet& sic, double tol = 1e-10);

// r[j][i] = tr(Pi_i E_j) under the rank-one update rule: the state after sky
// outcome i is Pi_i itself.
ConditionalMatrix conditional_matrix(const SicSet& sic, const Povm& ground);

struct UrgleichungResult {
    RealVector ltp;     // path E2: ltp[j] = sum_i p[i] r[j][i]
    RealVector q_of_d;  // path E1: q[j] = (d+1) ltp[j] - 1
};

// The urgleichung for a d-outcome orthonormal-basis ground measurement.
// Throws a validation error naming the offending outcome when an entry of
// q_of_d leaves [-1e-10, 1 + 1e-10] -- the signature of a p that is not a
// valid state for this ground measurement.
UrgleichungResult urgleichung(const ProbVector& p, const ConditionalMatrix& r, int d);

struct UrgleichungChecked {
    UrgleichungResult result;
    // max_j |q_of_d[j] - tr(rho_recon E_j)|: the Born-rule identity that makes
    // the urgleichung exact, computed from first principles.
    double identity_residual = 0.0;
};

// Builds the conditional matrix from (sic, ground), runs the urgleichung and
// verifies the exact-identity claim against the direct Born probabilities of
// the reconstructed state. Throws if the identity fails beyond 1e-12.
UrgleichungChecked urgleichung_checked(const ProbVector& p, const SicSet& sic,
                                       const Povm& ground);

// Unitary-ground variant: ground effects D_j = (1/d) U Pi_j U^dag, and
// Q(D_j) = (d+1) sum_i P(H_i) P(D_j|H_i) - 1/d. The output equals the SIC
// probabilities of the state evolved by U^dag; that identity is verified
// internally to 1e-12.
ProbVector urgleichung_unitary(const ProbVector& p, const UnitaryOperator& u, const SicSet& sic);

// Q[j] = alpha * (sum_i p[i] r[j][i]) - beta over an n-outcome sky. Shares
// its arithmetic with urgleichung entry for entry, so q = 2 reproduces it to
// the last bit and q = 0 is the classical LTP verbatim.
RealVector general_rule(const GeneralizedParams& params, const RealVector& p,
                        const RealMatrix& r);

struct DimensionBounds {
    double p_min = 0.0;  // 1/(d+1)
    double p_max = 0.0;  // 2/(d+1)
};

// The interval of LTP values that the urgleichung maps into [0, 1].
DimensionBounds dimension_bounds(int d);

}  // namespace sicprob
