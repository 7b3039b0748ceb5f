#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "sicprob/errors.hpp"
#include "sicprob/rng.hpp"

namespace sicprob {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Default cap on matrix dimension; tensor products grow fast and should fail
// loudly instead of exhausting memory.
inline constexpr int kDefaultMaxDim = 4096;

// Structural tolerances. Certification tolerances are parameters; these are
// the fixed construction-time invariants of the value types.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kNormTol = 1e-12;

double max_abs(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);
double min_eigenvalue(const ComplexMatrix& hermitian);

// Hermitian, unit-trace, positive-semidefinite matrix. Validated on
// construction; immutable afterwards.
class DensityOperator {
  public:
    explicit DensityOperator(ComplexMatrix m);

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const ComplexMatrix& matrix() const { return matrix_; }

  private:
    ComplexMatrix matrix_;
};

class PureState {
  public:
    explicit PureState(ComplexVector amplitudes);

    int dim() const { return static_cast<int>(amplitudes_.size()); }
    const ComplexVector& amplitudes() const { return amplitudes_; }
    DensityOperator projector() const;

  private:
    ComplexVector amplitudes_;
};

class UnitaryOperator {
  public:
    explicit UnitaryOperator(ComplexMatrix m);

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const ComplexMatrix& matrix() const { return matrix_; }

  private:
    ComplexMatrix matrix_;
};

// General measurement: positive effects summing to the identity.
class Povm {
  public:
    Povm(int dim, std::vector<ComplexMatrix> effects);

    static Povm computational_basis(int dim);
    // One rank-one effect per column of `basis` (columns must be orthonormal).
    static Povm from_basis(const ComplexMatrix& basis);

    int dim() const { return dim_; }
    int outcomes() const { return static_cast<int>(effects_.size()); }
    const std::vector<ComplexMatrix>& effects() const { return effects_; }
    const ComplexMatrix& effect(int i) const { return effects_.at(i); }

  private:
    int dim_;
    std::vector<ComplexMatrix> effects_;
};

// Kronecker product, block (i,j) = a(i,j) * b. Fails if the product dimension
// exceeds max_dim.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b, int max_dim = kDefaultMaxDim);
ComplexVector tensor(const ComplexVector& a, const ComplexVector& b, int max_dim = kDefaultMaxDim);

enum class Subsystem { A, B };

// Trace out one factor of a (dim_a*dim_b) x (dim_a*dim_b) matrix. The left
// factor is subsystem A throughout this library.
ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_a, int dim_b, Subsystem keep);

// Outcome probabilities tr(rho E_i). Entries are clipped to [0,1] only when
// within 1e-10 of the boundary; anything further out signals an invalid
// density/POVM pair.
RealVector born_probs(const DensityOperator& rho, const Povm& povm);

// Half the sum of absolute eigenvalues of a - b.
double trace_distance(const DensityOperator& a, const DensityOperator& b);

// Ginibre-normalized state: G G^dag / tr(G G^dag).
DensityOperator random_density(int dim, Rng& rng);

// QR of a complex Gaussian matrix with the R-diagonal phases folded in, which
// makes the distribution Haar.
UnitaryOperator random_unitary(int dim, Rng& rng);

PureState random_pure_state(int dim, Rng& rng);

struct WignerCycle {
    DensityOperator joint;            // U (rho ox |psi><psi|) U^dag
    DensityOperator reversed;         // U^dag joint U
    DensityOperator friend_marginal;  // partial trace of joint over the system
    DensityOperator system_marginal;  // partial trace of joint over the friend
    double reversal_distance;         // trace distance of reversed to the initial product
};

// Entangle a friend (dim d_f, left factor) with a system (dim d_s) under u,
// then undo it and report how close the round trip came back.
WignerCycle wigner_cycle(const DensityOperator& friend_state, const PureState& system,
                         const UnitaryOperator& u);

}  // namespace sicprob
