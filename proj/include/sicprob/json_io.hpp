#pragma once

// JSON file formats and atomic writers. One schema per value kind:
//   matrix       {"rows": n, "cols": m, "data": [[re, im], ...]}   (row-major)
//   vector       {"dim": n, "data": [[re, im], ...]}
//   fiducial     {"d": n, "vector": [[re, im], ...], "provenance": {...}}
//   probability  {"d": n, "p": [...]}
//   conditional  {"d": n, "rows": k, "r": [[...], ...]}            (row = ground outcome)
//   mixture      {"d": n, "components": [{"w": x, "rho": <matrix>}, ...]}
//   table        {"columns": [["a", ...], ...]}
// Every loader validates the file's own invariants (shape, finiteness, norms,
// stochasticity) and reports the first offending field as a parse_error.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sicprob/definetti.hpp"
#include "sicprob/qbrep.hpp"
#include "sicprob/qcore.hpp"
#include "sicprob/scenarios.hpp"
#include "sicprob/sic.hpp"

namespace sicprob::io {

using json = nlohmann::json;

// Read and parse, with the path prefixed to any error.
json load_json(const std::string& path);

// Serialize with 2-space indent and rename into place, so interrupted runs
// never leave truncated artifacts.
void save_json_atomic(const std::string& path, const json& value);

// ---- element parsers (ctx names the enclosing field for error messages) ----
ComplexMatrix parse_matrix(const json& j, const std::string& ctx);
ComplexVector parse_cvector(const json& j, const std::string& ctx);
json matrix_json(const ComplexMatrix& m);
json cvector_json(const ComplexVector& v);
json real_matrix_json(const RealMatrix& m);
json provenance_json(const Provenance& p);
json verification_json(const VerificationReport& r);
json table_json(const IncidenceTable& t);

// ---- whole-file loaders/savers ----
Fiducial load_fiducial(const std::string& path);
void save_fiducial(const std::string& path, const Fiducial& f);

DensityOperator load_density(const std::string& path);
UnitaryOperator load_unitary(const std::string& path);
PureState load_state_vector(const std::string& path);
void save_matrix(const std::string& path, const ComplexMatrix& m);

ProbVector load_prob(const std::string& path);
void save_prob(const std::string& path, const ProbVector& p);
// Same schema without the d^2 length constraint: for the generalized rule's
// n-outcome sky distributions.
std::pair<int, RealVector> load_distribution(const std::string& path);

// Validates stochasticity but not the column count (the d^2-column constraint
// belongs to ConditionalMatrix; the generalized rule uses n columns).
std::pair<int, RealMatrix> load_conditional(const std::string& path);
void save_conditional(const std::string& path, int d, const RealMatrix& r);

Mixture load_mixture(const std::string& path);
IncidenceTable load_table(const std::string& path);

void save_trajectory(const std::string& path, const std::vector<RealVector>& weights);

}  // namespace sicprob::io
