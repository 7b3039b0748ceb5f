#include "sicprob/json_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

namespace sicprob::io {

namespace {

// Re-tag domain-type construction failures as parse errors: a file whose
// content violates its own schema's invariants is malformed input, whatever
// layer happens to notice first.
template <typename F>
auto schema(const std::string& ctx, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const parse_error&) {
        throw;
    } catch (const std::exception& e) {
        throw parse_error(ctx + ": " + e.what());
    }
}

const json& field(const json& j, const char* key, const std::string& ctx) {
    if (!j.is_object()) throw parse_error(ctx + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw parse_error(ctx + ": missing field '" + key + "'");
    return *it;
}

int int_field(const json& j, const char* key, const std::string& ctx, int min_value) {
    const json& v = field(j, key, ctx);
    if (!v.is_number_integer())
        throw parse_error(ctx + "." + key + ": expected an integer");
    const long long n = v.get<long long>();
    if (n < min_value || n > kDefaultMaxDim * static_cast<long long>(kDefaultMaxDim))
        throw parse_error(ctx + "." + key + ": value " + std::to_string(n) + " out of range");
    return static_cast<int>(n);
}

double finite_number(const json& v, const std::string& ctx) {
    if (!v.is_number()) throw parse_error(ctx + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw parse_error(ctx + ": non-finite number");
    return x;
}

std::complex<double> complex_entry(const json& v, const std::string& ctx) {
    if (!v.is_array() || v.size() != 2) throw parse_error(ctx + ": expected [re, im]");
    return {finite_number(v[0], ctx + "[0]"), finite_number(v[1], ctx + "[1]")};
}

json complex_json(const std::complex<double>& z) { return json::array({z.real(), z.imag()}); }

}  // namespace

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(path + ": cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

void save_json_atomic(const std::string& path, const json& value) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error(tmp + ": cannot open for writing");
        out << value.dump(2) << '\n';
        if (!out) throw std::runtime_error(tmp + ": write failed");
    }
    std::filesystem::rename(tmp, path);
}

ComplexMatrix parse_matrix(const json& j, const std::string& ctx) {
    const int rows = int_field(j, "rows", ctx, 1);
    const int cols = int_field(j, "cols", ctx, 1);
    const json& data = field(j, "data", ctx);
    if (!data.is_array() || data.size() != static_cast<size_t>(rows) * cols)
        throw parse_error(ctx + ".data: expected " + std::to_string(rows * cols) + " entries");
    ComplexMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            m(r, c) = complex_entry(data[static_cast<size_t>(r) * cols + c],
                                    ctx + ".data[" + std::to_string(r * cols + c) + "]");
    return m;
}

ComplexVector parse_cvector(const json& j, const std::string& ctx) {
    const int dim = int_field(j, "dim", ctx, 1);
    const json& data = field(j, "data", ctx);
    if (!data.is_array() || data.size() != static_cast<size_t>(dim))
        throw parse_error(ctx + ".data: expected " + std::to_string(dim) + " entries");
    ComplexVector v(dim);
    for (int i = 0; i < dim; ++i)
        v(i) = complex_entry(data[i], ctx + ".data[" + std::to_string(i) + "]");
    return v;
}

json matrix_json(const ComplexMatrix& m) {
    json data = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(complex_json(m(r, c)));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json cvector_json(const ComplexVector& v) {
    json data = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back(complex_json(v(i)));
    return json{{"dim", v.size()}, {"data", std::move(data)}};
}

json real_matrix_json(const RealMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json provenance_json(const Provenance& p) {
    return json{{"method", p.method},
                {"seed", p.seed},
                {"restart", p.restart},
                {"iterations", p.iterations},
                {"residual", p.residual}};
}

json verification_json(const VerificationReport& r) {
    return json{{"d", r.dim},
                {"max_overlap_deviation", r.max_overlap_deviation},
                {"identity_residual", r.identity_residual},
                {"gram_rank", r.gram_rank},
                {"passed", r.passed},
                {"tolerance", r.tolerance}};
}

json table_json(const IncidenceTable& t) {
    json columns = json::array();
    for (const auto& col : t.columns()) columns.push_back(col);
    return json{{"columns", std::move(columns)}};
}

Fiducial load_fiducial(const std::string& path) {
    const json j = load_json(path);
    const int d = int_field(j, "d", path, 1);
    const json& vec = field(j, "vector", path);
    if (!vec.is_array() || vec.size() != static_cast<size_t>(d))
        throw parse_error(path + ".vector: expected " + std::to_string(d) + " entries");
    ComplexVector v(d);
    for (int i = 0; i < d; ++i)
        v(i) = complex_entry(vec[i], path + ".vector[" + std::to_string(i) + "]");

    Provenance prov;
    if (j.contains("provenance")) {
        const json& p = j["provenance"];
        if (!p.is_object()) throw parse_error(path + ".provenance: expected an object");
        if (p.contains("method")) {
            if (!p["method"].is_string())
                throw parse_error(path + ".provenance.method: expected a string");
            prov.method = p["method"].get<std::string>();
        }
        if (p.contains("seed")) {
            if (!p["seed"].is_number_integer())
                throw parse_error(path + ".provenance.seed: expected an integer");
            prov.seed = p["seed"].get<uint64_t>();
        }
        if (p.contains("restart")) prov.restart = int_field(p, "restart", path + ".provenance", 0);
        if (p.contains("iterations"))
            prov.iterations = int_field(p, "iterations", path + ".provenance", 0);
        if (p.contains("residual"))
            prov.residual = finite_number(p["residual"], path + ".provenance.residual");
    }
    return schema(path, [&] { return Fiducial(d, std::move(v), std::move(prov)); });
}

void save_fiducial(const std::string& path, const Fiducial& f) {
    json vec = json::array();
    for (int i = 0; i < f.d(); ++i) vec.push_back(complex_json(f.vector()(i)));
    save_json_atomic(path, json{{"d", f.d()},
                                {"vector", std::move(vec)},
                                {"provenance", provenance_json(f.provenance())}});
}

DensityOperator load_density(const std::string& path) {
    const json j = load_json(path);
    return schema(path, [&] { return DensityOperator(parse_matrix(j, path)); });
}

UnitaryOperator load_unitary(const std::string& path) {
    const json j = load_json(path);
    return schema(path, [&] { return UnitaryOperator(parse_matrix(j, path)); });
}

PureState load_state_vector(const std::string& path) {
    const json j = load_json(path);
    return schema(path, [&] { return PureState(parse_cvector(j, path)); });
}

void save_matrix(const std::string& path, const ComplexMatrix& m) {
    save_json_atomic(path, matrix_json(m));
}

ProbVector load_prob(const std::string& path) {
    auto [d, p] = load_distribution(path);
    return schema(path, [&, d] { return ProbVector(d, std::move(p)); });
}

void save_prob(const std::string& path, const ProbVector& p) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < p.p().size(); ++i) arr.push_back(p.p()(i));
    save_json_atomic(path, json{{"d", p.d()}, {"p", std::move(arr)}});
}

std::pair<int, RealVector> load_distribution(const std::string& path) {
    const json j = load_json(path);
    const int d = int_field(j, "d", path, 1);
    const json& arr = field(j, "p", path);
    if (!arr.is_array() || arr.empty()) throw parse_error(path + ".p: expected a nonempty array");
    RealVector p(arr.size());
    for (size_t i = 0; i < arr.size(); ++i)
        p(static_cast<Eigen::Index>(i)) = finite_number(arr[i], path + ".p[" + std::to_string(i) + "]");
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p(i) < -1e-12)
            throw parse_error(path + ".p[" + std::to_string(i) + "]: negative probability");
    if (std::abs(p.sum() - 1.0) > 1e-10) throw parse_error(path + ".p: sum deviates from 1");
    return {d, std::move(p)};
}

std::pair<int, RealMatrix> load_conditional(const std::string& path) {
    const json j = load_json(path);
    const int d = int_field(j, "d", path, 2);
    const int rows = int_field(j, "rows", path, 1);
    const json& r = field(j, "r", path);
    if (!r.is_array() || r.size() != static_cast<size_t>(rows))
        throw parse_error(path + ".r: expected " + std::to_string(rows) + " rows");
    if (!r[0].is_array() || r[0].empty())
        throw parse_error(path + ".r[0]: expected a nonempty array");
    const size_t cols = r[0].size();
    RealMatrix m(rows, static_cast<Eigen::Index>(cols));
    for (int row = 0; row < rows; ++row) {
        const json& jr = r[row];
        if (!jr.is_array() || jr.size() != cols)
            throw parse_error(path + ".r[" + std::to_string(row) + "]: ragged row");
        for (size_t c = 0; c < cols; ++c) {
            const double x =
                finite_number(jr[c], path + ".r[" + std::to_string(row) + "][" +
                                         std::to_string(c) + "]");
            if (x < -1e-12 || x > 1.0 + 1e-12)
                throw parse_error(path + ".r[" + std::to_string(row) + "][" + std::to_string(c) +
                                  "]: probability outside [0,1]");
            m(row, static_cast<Eigen::Index>(c)) = x;
        }
    }
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        if (std::abs(m.col(c).sum() - 1.0) > 1e-10)
            throw parse_error(path + ".r: column " + std::to_string(c) + " sum deviates from 1");
    return {d, std::move(m)};
}

void save_conditional(const std::string& path, int d, const RealMatrix& r) {
    save_json_atomic(path, json{{"d", d}, {"rows", r.rows()}, {"r", real_matrix_json(r)}});
}

Mixture load_mixture(const std::string& path) {
    const json j = load_json(path);
    const int d = int_field(j, "d", path, 1);
    const json& comps = field(j, "components", path);
    if (!comps.is_array() || comps.empty())
        throw parse_error(path + ".components: expected a nonempty array");
    std::vector<MixtureComponent> components;
    components.reserve(comps.size());
    for (size_t k = 0; k < comps.size(); ++k) {
        const std::string ctx = path + ".components[" + std::to_string(k) + "]";
        const double w = finite_number(field(comps[k], "w", ctx), ctx + ".w");
        const json& rho = field(comps[k], "rho", ctx);
        DensityOperator state =
            schema(ctx + ".rho", [&] { return DensityOperator(parse_matrix(rho, ctx + ".rho")); });
        if (state.dim() != d) throw parse_error(ctx + ".rho: dimension differs from 'd'");
        components.push_back({w, std::move(state)});
    }
    return schema(path, [&] { return Mixture(std::move(components)); });
}

IncidenceTable load_table(const std::string& path) {
    const json j = load_json(path);
    const json& cols = field(j, "columns", path);
    if (!cols.is_array() || cols.empty())
        throw parse_error(path + ".columns: expected a nonempty array");
    std::vector<std::vector<std::string>> columns;
    columns.reserve(cols.size());
    for (size_t c = 0; c < cols.size(); ++c) {
        const json& col = cols[c];
        if (!col.is_array())
            throw parse_error(path + ".columns[" + std::to_string(c) + "]: expected an array");
        std::vector<std::string> letters;
        for (size_t i = 0; i < col.size(); ++i) {
            if (!col[i].is_string())
                throw parse_error(path + ".columns[" + std::to_string(c) + "][" +
                                  std::to_string(i) + "]: expected a string");
            letters.push_back(col[i].get<std::string>());
        }
        columns.push_back(std::move(letters));
    }
    return schema(path, [&] { return IncidenceTable(std::move(columns)); });
}

void save_trajectory(const std::string& path, const std::vector<RealVector>& weights) {
    json arr = json::array();
    for (const auto& w : weights) {
        json row = json::array();
        for (Eigen::Index i = 0; i < w.size(); ++i) row.push_back(w(i));
        arr.push_back(std::move(row));
    }
    save_json_atomic(path, arr);
}

}  // namespace sicprob::io
