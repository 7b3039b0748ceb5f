// Command-line front door: one subcommand per library operation family, JSON
// artifacts written atomically, and a single-line machine-readable run report
// on stdout. Exit codes: 0 ok, 1 domain failure (non-convergence, invalid
// state, failed certification), 2 usage or input-file parse error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sicprob/definetti.hpp"
#include "sicprob/json_io.hpp"
#include "sicprob/qbrep.hpp"
#include "sicprob/qcore.hpp"
#include "sicprob/scenarios.hpp"
#include "sicprob/sic.hpp"

namespace {

using json = nlohmann::json;
using namespace sicprob;

// Runs a handler, times it, and prints the run report. The handler fills
// metrics/artifacts/extra and returns the exit code for domain-level results;
// exceptions map to 2 for parse errors and 1 for everything else.
int run_reported(const std::string& subcommand, uint64_t seed,
                 const std::function<int(json& metrics, json& artifacts, json& extra)>& body) {
    const auto start = std::chrono::steady_clock::now();
    json metrics = json::object();
    json artifacts = json::array();
    json extra = json::object();
    std::string error;
    int code = 0;
    try {
        code = body(metrics, artifacts, extra);
    } catch (const parse_error& e) {
        error = e.what();
        code = 2;
    } catch (const std::exception& e) {
        error = e.what();
        code = 1;
    }
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    json report{{"subcommand", subcommand},
                {"status", code == 0 ? "ok" : "failed"},
                {"metrics", metrics},
                {"artifacts", artifacts},
                {"seed", seed},
                {"wall_time_ms", wall_ms}};
    for (auto& [key, value] : extra.items()) report[key] = value;
    if (!error.empty()) report["error"] = error;
    std::cout << report.dump() << std::endl;
    return code;
}

// Load the reference SIC from a fiducial file, or find one deterministically
// from the seed when no file is given.
SicSet acquire_sic(const std::string& fiducial_path, int d, uint64_t seed, json& metrics) {
    if (!fiducial_path.empty()) {
        Fiducial f = io::load_fiducial(fiducial_path);
        if (d > 0 && f.d() != d)
            throw validation_error("fiducial dimension " + std::to_string(f.d()) +
                                   " does not match the requested d = " + std::to_string(d));
        return orbit(f);
    }
    if (d < 2) throw validation_error("no fiducial file given and dimension undetermined");
    SearchOutcome outcome = search_fiducial(d, seed, {});
    if (!outcome.report.converged)
        throw validation_error("internal SIC search did not converge for d = " +
                               std::to_string(d));
    metrics["sic_search_residual"] = outcome.report.verification.max_overlap_deviation;
    return orbit(outcome.fiducial);
}

json real_vector_json(const RealVector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

ProbVector resolve_prob(const std::string& state, int d) {
    if (state == "uniform") {
        if (d < 2)
            throw validation_error("--state uniform needs the dimension (give --d or --fiducial)");
        return ProbVector::uniform(d);
    }
    ProbVector p = io::load_prob(state);
    if (d > 0 && p.d() != d)
        throw validation_error("probability file has d = " + std::to_string(p.d()) +
                               ", expected " + std::to_string(d));
    return p;
}

UnitaryOperator cnot_on_system() {
    // |f, s> -> |f xor s, s>: the demo entangler, controlled on the system
    // (right) qubit so |0>|+> becomes a Bell state.
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = 1.0;  // |00> -> |00>
    m(3, 1) = 1.0;  // |01> -> |11>
    m(2, 2) = 1.0;  // |10> -> |10>
    m(1, 3) = 1.0;  // |11> -> |01>
    return UnitaryOperator(std::move(m));
}

Mixture default_mixture() {
    ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
    zero(0, 0) = 1.0;
    ComplexMatrix one = ComplexMatrix::Zero(2, 2);
    one(1, 1) = 1.0;
    return Mixture({{0.5, DensityOperator(zero)}, {0.5, DensityOperator(one)}});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SIC probability representation toolbox"};
    app.require_subcommand(1);

    // Shared option storage; each subcommand binds the flags it uses.
    int d = 0;
    uint64_t seed = 0;
    int restarts = 10;
    int max_iter = 25000;
    double tol = 1e-10;
    int q_param = 0;
    int samples = 200;
    int truth = 0;
    std::string in_path, out_path, fiducial_path, state_arg, ground = "basis";
    std::string cond_path, unitary_path, friend_path, system_path, basis_path;

    auto* find = app.add_subcommand("find-sic", "search for a SIC fiducial");
    find->add_option("--d", d, "Hilbert space dimension")->required()->check(CLI::Range(2, 64));
    find->add_option("--seed", seed, "random seed");
    find->add_option("--restarts", restarts, "independent restarts")->check(CLI::Range(1, 10000));
    find->add_option("--max-iter", max_iter, "iteration cap per restart")
        ->check(CLI::Range(1, 100000000));
    find->add_option("--tol", tol, "certification tolerance");
    find->add_option("--out", out_path, "fiducial output file");

    auto* verify = app.add_subcommand("verify-sic", "certify a fiducial's orbit");
    verify->add_option("--in", in_path, "fiducial file")->required();
    verify->add_option("--tol", tol, "certification tolerance");
    verify->add_option("--out", out_path, "verification report output file");

    auto* rho2p = app.add_subcommand("rho2p", "density operator to SIC probabilities");
    rho2p->add_option("--in", in_path, "density matrix file")->required();
    rho2p->add_option("--fiducial", fiducial_path, "fiducial file (else internal search)");
    rho2p->add_option("--seed", seed, "seed for the internal search");
    rho2p->add_option("--out", out_path, "probability vector output file");

    auto* p2rho = app.add_subcommand("p2rho", "SIC probabilities to the reconstructed operator");
    p2rho->add_option("--in", in_path, "probability vector file")->required();
    p2rho->add_option("--fiducial", fiducial_path, "fiducial file (else internal search)");
    p2rho->add_option("--seed", seed, "seed for the internal search");
    p2rho->add_option("--out", out_path, "matrix output file");

    auto* validity = app.add_subcommand("validity", "is a probability vector a quantum state");
    validity->add_option("--in", in_path, "probability vector file")->required();
    validity->add_option("--fiducial", fiducial_path, "fiducial file (else internal search)");
    validity->add_option("--seed", seed, "seed for the internal search");
    validity->add_option("--tol", tol, "eigenvalue tolerance");
    validity->add_option("--out", out_path, "report output file");

    auto* urgl = app.add_subcommand("urgleichung", "Born rule as a modified LTP");
    urgl->add_option("--d", d, "dimension (needed for --state uniform)")->check(CLI::Range(2, 64));
    urgl->add_option("--state", state_arg, "probability file or 'uniform'")->required();
    urgl->add_option("--ground", ground, "basis | sic | <unitary file>");
    urgl->add_option("--fiducial", fiducial_path, "fiducial file (else internal search)");
    urgl->add_option("--seed", seed, "seed for the internal search");
    urgl->add_option("--out", out_path, "ltp/q output file");

    auto* evolve = app.add_subcommand("evolve", "unitary-ground urgleichung");
    evolve->add_option("--state", state_arg, "probability file or 'uniform'")->required();
    evolve->add_option("--unitary", unitary_path, "unitary matrix file")->required();
    evolve->add_option("--fiducial", fiducial_path, "fiducial file (else internal search)");
    evolve->add_option("--seed", seed, "seed for the internal search");
    evolve->add_option("--out", out_path, "probability vector output file");

    auto* general = app.add_subcommand("general-rule", "the generalized q-family evaluator");
    general->add_option("--q", q_param, "family parameter")->required()->check(CLI::Range(0, 1000));
    general->add_option("--d", d, "dimension")->required()->check(CLI::Range(2, 64));
    general->add_option("--state", state_arg, "n-outcome sky distribution file")->required();
    general->add_option("--cond", cond_path, "n-column conditional matrix file")->required();
    general->add_option("--out", out_path, "output file");

    auto* ks = app.add_subcommand("ks-check", "incidence-table parity and exhaustive search");
    ks->add_option("--in", in_path, "table file (defaults to the nine-measurement table)");
    ks->add_option("--out", out_path, "report output file");

    auto* epr = app.add_subcommand("epr", "entangled-pair transpose correlations");
    epr->add_option("--d", d, "local dimension")->check(CLI::Range(2, 64));
    epr->add_option("--seed", seed, "seed for the random basis");
    epr->add_option("--basis", basis_path, "unitary file whose columns are the basis");
    epr->add_option("--out", out_path, "joint distribution output file");

    auto* wigner = app.add_subcommand("wigner", "entangle/reverse cycle");
    wigner->add_option("--d", d, "random instance: friend and system dimension")
        ->check(CLI::Range(2, 64));
    wigner->add_option("--seed", seed, "seed for the random instance");
    wigner->add_option("--friend", friend_path, "friend density matrix file");
    wigner->add_option("--system", system_path, "system state vector file");
    wigner->add_option("--unitary", unitary_path, "joint unitary file");
    wigner->add_option("--out", out_path, "cycle output file");

    auto* definetti = app.add_subcommand("definetti-sim", "Bayesian tomography simulation");
    definetti->add_option("--in", in_path, "mixture file (defaults to half |0><0|, half |1><1|)");
    definetti->add_option("--truth", truth, "index of the true component")
        ->check(CLI::Range(0, 1000000));
    definetti->add_option("--samples", samples, "number of measurements")
        ->check(CLI::Range(0, 10000000));
    definetti->add_option("--seed", seed, "sampling seed");
    definetti->add_option("--fiducial", fiducial_path, "fiducial file (else internal search)");
    definetti->add_option("--out", out_path, "posterior trajectory output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (find->parsed()) {
        return run_reported("find-sic", seed, [&](json& metrics, json& artifacts, json& extra) {
            SearchOptions options{restarts, max_iter, tol};
            SearchOutcome outcome = search_fiducial(d, seed, options);
            const SearchReport& rep = outcome.report;
            metrics["d"] = rep.d;
            metrics["converged"] = rep.converged;
            metrics["best_restart"] = rep.best_restart;
            metrics["iterations"] = rep.restarts[rep.best_restart].iterations;
            metrics["frame_potential"] = rep.best_potential;
            metrics["centered_residual"] = rep.best_residual;
            metrics["residual"] = rep.verification.max_overlap_deviation;
            metrics["identity_residual"] = rep.verification.identity_residual;
            metrics["gram_rank"] = rep.verification.gram_rank;
            metrics["passed"] = rep.verification.passed;
            json diags = json::array();
            for (const auto& r : rep.restarts)
                diags.push_back(json{{"restart", r.restart},
                                     {"stream_seed", r.stream_seed},
                                     {"iterations", r.iterations},
                                     {"final_potential", r.final_potential},
                                     {"final_residual", r.final_residual},
                                     {"converged", r.converged}});
            extra["restarts"] = std::move(diags);
            if (!out_path.empty()) {
                io::save_fiducial(out_path, outcome.fiducial);
                artifacts.push_back(out_path);
            }
            return rep.converged ? 0 : 1;
        });
    }

    if (verify->parsed()) {
        return run_reported("verify-sic", seed, [&](json& metrics, json& artifacts, json&) {
            Fiducial f = io::load_fiducial(in_path);
            VerificationReport rep = verify_sic(orbit(f), tol);
            metrics["d"] = rep.dim;
            metrics["max_overlap_deviation"] = rep.max_overlap_deviation;
            metrics["identity_residual"] = rep.identity_residual;
            metrics["gram_rank"] = rep.gram_rank;
            metrics["passed"] = rep.passed;
            metrics["tolerance"] = rep.tolerance;
            if (!out_path.empty()) {
                io::save_json_atomic(out_path, io::verification_json(rep));
                artifacts.push_back(out_path);
            }
            return rep.passed ? 0 : 1;
        });
    }

    if (rho2p->parsed()) {
        return run_reported("rho2p", seed, [&](json& metrics, json& artifacts, json&) {
            DensityOperator rho = io::load_density(in_path);
            SicSet sic = acquire_sic(fiducial_path, rho.dim(), seed, metrics);
            ProbVector p = rho_to_prob(rho, sic);
            metrics["d"] = p.d();
            metrics["p_min"] = p.p().minCoeff();
            metrics["p_max"] = p.p().maxCoeff();
            metrics["sum"] = p.p().sum();
            if (!out_path.empty()) {
                io::save_prob(out_path, p);
                artifacts.push_back(out_path);
            }
            return 0;
        });
    }

    if (p2rho->parsed()) {
        return run_reported("p2rho", seed, [&](json& metrics, json& artifacts, json&) {
            ProbVector p = io::load_prob(in_path);
            SicSet sic = acquire_sic(fiducial_path, p.d(), seed, metrics);
            ComplexMatrix recon = prob_to_rho(p, sic);
            metrics["d"] = p.d();
            metrics["trace_re"] = recon.trace().real();
            metrics["min_eigenvalue"] = min_eigenvalue(recon);
            if (!out_path.empty()) {
                io::save_matrix(out_path, recon);
                artifacts.push_back(out_path);
            }
            return 0;
        });
    }

    if (validity->parsed()) {
        return run_reported("validity", seed, [&](json& metrics, json& artifacts, json&) {
            ProbVector p = io::load_prob(in_path);
            SicSet sic = acquire_sic(fiducial_path, p.d(), seed, metrics);
            ValidityReport rep = validity_check(p, sic, tol);
            metrics["d"] = p.d();
            metrics["valid"] = rep.valid;
            metrics["min_eigenvalue"] = rep.min_eigenvalue;
            metrics["tolerance"] = tol;
            if (!out_path.empty()) {
                io::save_json_atomic(out_path, json{{"valid", rep.valid},
                                                    {"min_eigenvalue", rep.min_eigenvalue},
                                                    {"tolerance", tol}});
                artifacts.push_back(out_path);
            }
            return rep.valid ? 0 : 1;
        });
    }

    if (urgl->parsed()) {
        return run_reported("urgleichung", seed, [&](json& metrics, json& artifacts, json&) {
            int dim = d;
            if (dim == 0 && !fiducial_path.empty()) dim = io::load_fiducial(fiducial_path).d();
            ProbVector p = resolve_prob(state_arg, dim);
            SicSet sic = acquire_sic(fiducial_path, p.d(), seed, metrics);

            RealVector ltp, q_values;
            if (ground == "basis" || (ground != "sic" && !ground.empty())) {
                Povm g = ground == "basis"
                             ? Povm::computational_basis(p.d())
                             : Povm::from_basis(io::load_unitary(ground).matrix());
                UrgleichungChecked checked = urgleichung_checked(p, sic, g);
                ltp = checked.result.ltp;
                q_values = checked.result.q_of_d;
                metrics["identity_residual"] = checked.identity_residual;
            } else {
                // Ground = the SIC's own effects: the unitary-ground formula
                // at U = identity.
                UnitaryOperator identity(ComplexMatrix::Identity(p.d(), p.d()));
                q_values = urgleichung_unitary(p, identity, sic).p();
                ltp = conditional_matrix(sic, sic.povm()).r() * p.p();
            }
            metrics["d"] = p.d();
            metrics["ltp_min"] = ltp.minCoeff();
            metrics["ltp_max"] = ltp.maxCoeff();
            metrics["q_min"] = q_values.minCoeff();
            metrics["q_max"] = q_values.maxCoeff();
            if (!out_path.empty()) {
                io::save_json_atomic(
                    out_path,
                    json{{"d", p.d()},
                         {"ground", ground},
                         {"ltp", json{{"path", "E2"}, {"values", real_vector_json(ltp)}}},
                         {"q", json{{"path", "E1"}, {"values", real_vector_json(q_values)}}}});
                artifacts.push_back(out_path);
            }
            return 0;
        });
    }

    if (evolve->parsed()) {
        return run_reported("evolve", seed, [&](json& metrics, json& artifacts, json&) {
            UnitaryOperator u = io::load_unitary(unitary_path);
            ProbVector p = resolve_prob(state_arg, u.dim());
            SicSet sic = acquire_sic(fiducial_path, p.d(), seed, metrics);
            ProbVector q_out = urgleichung_unitary(p, u, sic);
            metrics["d"] = p.d();
            metrics["q_min"] = q_out.p().minCoeff();
            metrics["q_max"] = q_out.p().maxCoeff();
            metrics["sum"] = q_out.p().sum();
            if (!out_path.empty()) {
                io::save_prob(out_path, q_out);
                artifacts.push_back(out_path);
            }
            return 0;
        });
    }

    if (general->parsed()) {
        return run_reported("general-rule", seed, [&](json& metrics, json& artifacts, json&) {
            GeneralizedParams params = GeneralizedParams::from(q_param, d);
            auto [pd, p] = io::load_distribution(state_arg);
            auto [rd, r] = io::load_conditional(cond_path);
            if (pd != d || rd != d)
                throw validation_error("input files declare d = " + std::to_string(pd) + "/" +
                                       std::to_string(rd) + ", flags say " + std::to_string(d));
            RealVector q_values = general_rule(params, p, r);
            metrics["q"] = params.q;
            metrics["d"] = params.d;
            metrics["n"] = params.n;
            metrics["alpha"] = params.alpha;
            metrics["beta"] = params.beta;
            metrics["q_min"] = q_values.minCoeff();
            metrics["q_max"] = q_values.maxCoeff();
            if (!out_path.empty()) {
                io::save_json_atomic(out_path, json{{"q", params.q},
                                                    {"d", params.d},
                                                    {"n", params.n},
                                                    {"alpha", params.alpha},
                                                    {"beta", params.beta},
                                                    {"values", real_vector_json(q_values)}});
                artifacts.push_back(out_path);
            }
            return 0;
        });
    }

    if (ks->parsed()) {
        return run_reported("ks-check", seed, [&](json& metrics, json& artifacts, json&) {
            IncidenceTable table = in_path.empty() ? cega_table() : io::load_table(in_path);
            ParityReport parity = parity_check(table);
            ExhaustiveReport search = exhaustive_search(table);
            metrics["required_true"] = parity.required_true;
            metrics["parity_even"] = parity.parity_forced == "even";
            metrics["contradiction"] = parity.contradiction;
            metrics["satisfying_count"] = search.satisfying_count;
            metrics["assignments_scanned"] = search.assignments_scanned;
            if (!out_path.empty()) {
                json witnesses = json::array();
                for (const auto& w : search.witnesses) witnesses.push_back(w);
                io::save_json_atomic(
                    out_path,
                    json{{"table", io::table_json(table)},
                         {"parity",
                          json{{"required_true", parity.required_true},
                               {"parity_forced", parity.parity_forced},
                               {"contradiction", parity.contradiction}}},
                         {"search", json{{"satisfying_count", search.satisfying_count},
                                         {"assignments_scanned", search.assignments_scanned},
                                         {"witnesses", std::move(witnesses)}}}});
                artifacts.push_back(out_path);
            }
            return 0;
        });
    }

    if (epr->parsed()) {
        if (d == 0) d = 4;
        return run_reported("epr", seed, [&](json& metrics, json& artifacts, json&) {
            EntangledPair pair = max_entangled(d);
            ComplexMatrix basis;
            if (!basis_path.empty()) {
                basis = io::load_unitary(basis_path).matrix();
                if (basis.rows() != d)
                    throw validation_error("basis dimension does not match --d");
            } else {
                Rng rng = make_rng(seed);
                basis = random_unitary(d, rng).matrix();
            }
            std::vector<PureState> vectors;
            vectors.reserve(d);
            for (int j = 0; j < d; ++j) vectors.emplace_back(ComplexVector(basis.col(j)));
            RealMatrix joint = epr_joint(vectors, pair);
            double diag_dev = 0.0, off_max = 0.0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    if (i == j)
                        diag_dev = std::max(diag_dev, std::abs(joint(i, j) - 1.0 / d));
                    else
                        off_max = std::max(off_max, joint(i, j));
                }
            metrics["d"] = d;
            metrics["diag_deviation"] = diag_dev;
            metrics["off_diag_max"] = off_max;
            metrics["sum"] = joint.sum();
            if (!out_path.empty()) {
                io::save_json_atomic(out_path,
                                     json{{"d", d}, {"joint", io::real_matrix_json(joint)}});
                artifacts.push_back(out_path);
            }
            return 0;
        });
    }

    if (wigner->parsed()) {
        return run_reported("wigner", seed, [&](json& metrics, json& artifacts, json&) {
            DensityOperator friend_state = [&] {
                if (!friend_path.empty()) return io::load_density(friend_path);
                if (d > 0) {
                    Rng rng = make_stream_rng(seed, 1);
                    return random_density(d, rng);
                }
                ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
                zero(0, 0) = 1.0;
                return DensityOperator(std::move(zero));
            }();
            PureState system = [&] {
                if (!system_path.empty()) return io::load_state_vector(system_path);
                if (d > 0) {
                    Rng rng = make_stream_rng(seed, 2);
                    return random_pure_state(d, rng);
                }
                ComplexVector plus(2);
                plus << 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2;
                return PureState(std::move(plus));
            }();
            UnitaryOperator u = [&] {
                if (!unitary_path.empty()) return io::load_unitary(unitary_path);
                if (d > 0) {
                    Rng rng = make_stream_rng(seed, 3);
                    return random_unitary(friend_state.dim() * system.dim(), rng);
                }
                return cnot_on_system();
            }();
            WignerCycle cycle = wigner_cycle(friend_state, system, u);
            metrics["friend_dim"] = friend_state.dim();
            metrics["system_dim"] = system.dim();
            metrics["reversal_distance"] = cycle.reversal_distance;
            if (!out_path.empty()) {
                io::save_json_atomic(
                    out_path, json{{"joint", io::matrix_json(cycle.joint.matrix())},
                                   {"reversed", io::matrix_json(cycle.reversed.matrix())},
                                   {"friend_marginal",
                                    io::matrix_json(cycle.friend_marginal.matrix())},
                                   {"system_marginal",
                                    io::matrix_json(cycle.system_marginal.matrix())},
                                   {"reversal_distance", cycle.reversal_distance}});
                artifacts.push_back(out_path);
            }
            return cycle.reversal_distance <= 1e-12 ? 0 : 1;
        });
    }

    if (definetti->parsed()) {
        return run_reported("definetti-sim", seed, [&](json& metrics, json& artifacts, json&) {
            Mixture mixture = in_path.empty() ? default_mixture() : io::load_mixture(in_path);
            if (truth >= mixture.size())
                throw validation_error("--truth " + std::to_string(truth) +
                                       " out of range for " + std::to_string(mixture.size()) +
                                       " components");
            SicSet sic = acquire_sic(fiducial_path, mixture.dim(), seed, metrics);
            TomographyTrajectory trajectory =
                simulate_tomography(truth, mixture, sic.povm(), samples, seed);
            metrics["d"] = mixture.dim();
            metrics["components"] = mixture.size();
            metrics["samples"] = samples;
            metrics["truth"] = truth;
            metrics["final_posterior"] = trajectory.weights.back()(truth);
            if (!out_path.empty()) {
                io::save_trajectory(out_path, trajectory.weights);
                artifacts.push_back(out_path);
            }
            return 0;
        });
    }

    std::cerr << "unknown subcommand" << std::endl;
    return 2;
}
