#pragma once

// Two concrete scenario constructions: the CEGA nine-measurement incidence
// structure with its parity contradiction and brute-force assignment search,
// and the maximally entangled pair whose transpose-basis correlations realize
// the EPR certainty criterion.

#include <map>
#include <string>
#include <vector>

#include "sicprob/qcore.hpp"

namespace sicprob {

// Columns of outcome letters, one column per measurement. The CEGA instance
// is 9 columns x 4 letters over an 18-letter alphabet with every letter
// appearing exactly twice; the type itself stays general enough to hold the
// small toy tables used to exercise the parity logic, and only forbids a
// letter repeating inside one column.
class IncidenceTable {
  public:
    explicit IncidenceTable(std::vector<std::vector<std::string>> columns);

    int column_count() const { return static_cast<int>(columns_.size()); }
    const std::vector<std::vector<std::string>>& columns() const { return columns_; }
    // Sorted unique letters.
    const std::vector<std::string>& alphabet() const { return alphabet_; }
    // letter -> number of slots it fills.
    const std::map<std::string, int>& occurrences() const { return occurrences_; }

  private:
    std::vector<std::vector<std::string>> columns_;
    std::vector<std::string> alphabet_;
    std::map<std::string, int> occurrences_;
};

// A total truth-value assignment over a table's alphabet.
using Assignment = std::map<std::string, bool>;

// The exact table from the nine-measurement construction: 9 columns of 4
// letters, 18 letters (a..r), each appearing exactly twice.
IncidenceTable cega_table();

struct ParityReport {
    int required_true = 0;            // one TRUE per column
    std::string parity_forced;        // "even" when every letter fills an even
                                      // number of slots, else "none"
    bool contradiction = false;       // forced-even total vs an odd column count
};

// The counting argument: each TRUE letter contributes its occurrence count to
// the total of TRUE slots, so all-even occurrences force an even total, while
// one-TRUE-per-column demands exactly column_count TRUE slots.
ParityReport parity_check(const IncidenceTable& t);

struct ExhaustiveReport {
    long long assignments_scanned = 0;
    long long satisfying_count = 0;
    // At most kMaxWitnesses satisfying assignments, in enumeration order;
    // satisfying_count is always the exact total.
    std::vector<Assignment> witnesses;

    static constexpr int kMaxWitnesses = 100;
};

// Plain enumeration of all 2^|alphabet| assignments, counting those with
// exactly one TRUE per column. Alphabets beyond 24 letters are refused.
ExhaustiveReport exhaustive_search(const IncidenceTable& t);

// The canonical maximally entangled pair (1/sqrt d) sum_i |i>|i>, left factor
// first. The type pins the state: anything else is rejected.
class EntangledPair {
  public:
    EntangledPair(int d, PureState joint);

    int d() const { return d_; }
    const PureState& joint() const { return joint_; }

  private:
    int d_;
    PureState joint_;
};

EntangledPair max_entangled(int d);

// Joint outcome distribution when the left side measures the orthonormal
// basis {e_i} and the right side measures the transposed observable, i.e. the
// conjugated basis {conj(e_j)}: entry (i, j) = |(<e_i| ox <e_j*|) psi|^2.
// For the maximally entangled pair this is delta_ij / d: the right-hand
// outcome is certain given the left.
RealMatrix epr_joint(const std::vector<PureState>& h_eigenbasis, const EntangledPair& pair);

}  // namespace sicprob
