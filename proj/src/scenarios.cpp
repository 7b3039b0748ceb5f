#include "sicprob/scenarios.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

namespace sicprob {

IncidenceTable::IncidenceTable(std::vector<std::vector<std::string>> columns)
    : columns_(std::move(columns)) {
    if (columns_.empty()) throw shape_error("incidence table: at least one column required");
    for (size_t c = 0; c < columns_.size(); ++c) {
        const auto& col = columns_[c];
        if (col.empty())
            throw shape_error("incidence table: column " + std::to_string(c) + " is empty");
        std::set<std::string> seen;
        for (const auto& letter : col) {
            if (letter.empty())
                throw validation_error("incidence table: empty letter id in column " +
                                       std::to_string(c));
            if (!seen.insert(letter).second)
                throw validation_error("incidence table: letter '" + letter +
                                       "' repeats within column " + std::to_string(c));
            ++occurrences_[letter];
        }
    }
    for (const auto& [letter, count] : occurrences_) alphabet_.push_back(letter);
}

IncidenceTable cega_table() {
    return IncidenceTable({{"a", "b", "c", "d"},
                           {"a", "e", "f", "g"},
                           {"h", "i", "c", "j"},
                           {"h", "k", "g", "l"},
                           {"b", "e", "m", "n"},
                           {"i", "k", "n", "o"},
                           {"p", "q", "d", "j"},
                           {"p", "r", "f", "l"},
                           {"q", "r", "m", "o"}});
}

ParityReport parity_check(const IncidenceTable& t) {
    ParityReport report;
    report.required_true = t.column_count();
    const bool all_even = std::all_of(t.occurrences().begin(), t.occurrences().end(),
                                      [](const auto& kv) { return kv.second % 2 == 0; });
    report.parity_forced = all_even ? "even" : "none";
    // A TRUE letter contributes occurrence-count slots to the total, so with
    // all-even occurrences the total TRUE-slot count is even no matter what;
    // one TRUE per column demands it equal the (odd) column count.
    report.contradiction = all_even && report.required_true % 2 == 1;
    return report;
}

ExhaustiveReport exhaustive_search(const IncidenceTable& t) {
    const auto& alphabet = t.alphabet();
    const int n = static_cast<int>(alphabet.size());
    if (n > 24)
        throw size_error("exhaustive_search: alphabet of " + std::to_string(n) +
                         " letters exceeds the 24-letter cap");

    std::map<std::string, int> index;
    for (int i = 0; i < n; ++i) index[alphabet[i]] = i;

    std::vector<uint32_t> column_masks;
    column_masks.reserve(t.columns().size());
    for (const auto& col : t.columns()) {
        uint32_t mask = 0;
        for (const auto& letter : col) mask |= 1u << index[letter];
        column_masks.push_back(mask);
    }

    ExhaustiveReport report;
    const uint32_t total = 1u << n;
    report.assignments_scanned = total;
    for (uint32_t truth = 0; truth < total; ++truth) {
        bool ok = true;
        for (uint32_t mask : column_masks)
            if (std::popcount(truth & mask) != 1) {
                ok = false;
                break;
            }
        if (!ok) continue;
        ++report.satisfying_count;
        if (static_cast<int>(report.witnesses.size()) < ExhaustiveReport::kMaxWitnesses) {
            Assignment a;
            for (int i = 0; i < n; ++i) a[alphabet[i]] = (truth >> i) & 1u;
            report.witnesses.push_back(std::move(a));
        }
    }
    return report;
}

EntangledPair::EntangledPair(int d, PureState joint) : d_(d), joint_(std::move(joint)) {
    if (d_ < 2) throw std::domain_error("entangled pair: d >= 2 required");
    if (joint_.dim() != d_ * d_)
        throw shape_error("entangled pair: joint state has dim " + std::to_string(joint_.dim()) +
                          ", expected d^2 = " + std::to_string(d_ * d_));
    const double amp = 1.0 / std::sqrt(static_cast<double>(d_));
    for (int k = 0; k < d_; ++k)
        for (int l = 0; l < d_; ++l) {
            const std::complex<double> expected = (k == l) ? amp : 0.0;
            if (std::abs(joint_.amplitudes()(k * d_ + l) - expected) > 1e-12)
                throw validation_error(
                    "entangled pair: amplitudes are not the maximally entangled form");
        }
}

EntangledPair max_entangled(int d) {
    if (d < 2) throw std::domain_error("max_entangled: d >= 2 required");
    ComplexVector joint = ComplexVector::Zero(d * d);
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i) joint(i * d + i) = amp;
    return EntangledPair(d, PureState(std::move(joint)));
}

RealMatrix epr_joint(const std::vector<PureState>& h_eigenbasis, const EntangledPair& pair) {
    const int d = pair.d();
    if (static_cast<int>(h_eigenbasis.size()) != d)
        throw shape_error("epr_joint: basis has " + std::to_string(h_eigenbasis.size()) +
                          " vectors, expected " + std::to_string(d));
    for (const auto& e : h_eigenbasis)
        if (e.dim() != d) throw shape_error("epr_joint: basis vector dimension mismatch");
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const std::complex<double> g =
                h_eigenbasis[i].amplitudes().dot(h_eigenbasis[j].amplitudes());
            const std::complex<double> expected = (i == j) ? 1.0 : 0.0;
            if (std::abs(g - expected) > 1e-10)
                throw validation_error("epr_joint: basis is not orthonormal (Gram entry (" +
                                       std::to_string(i) + "," + std::to_string(j) +
                                       ") deviates)");
        }

    RealMatrix joint(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            // (<e_i| ox <e_j*|) |psi> = sum_{k,l} conj(e_i[k]) e_j[l] psi[k*d+l];
            // the conjugated bra on the right is the transposed measurement.
            std::complex<double> amp = 0.0;
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l)
                    amp += std::conj(h_eigenbasis[i].amplitudes()(k)) *
                           h_eigenbasis[j].amplitudes()(l) * pair.joint().amplitudes()(k * d + l);
            joint(i, j) = std::norm(amp);
        }
    return joint;
}

}  // namespace sicprob
