#pragma once

// JSON and text formats.
//
// Pencil file:
//   {"n_vars": 2, "rows": 2, "cols": 2,
//    "coeffs": {"A0": [[0, 0], [0, 0]], "A1": [["1", 0], [0, "1/2+i"]], "A2": ...}}
// Scalars are JSON integers, JSON floats (snapped to a nearby rational) or strings in the
// literal syntax "a/b", "a/bi", "a/b+c/di", "a+i". Every coefficient A0..An must be present.
//
// Matrix text: rows separated by ';', entries by ','; each entry is a polynomial expression,
// e.g. "x1, x2; x2, x3".

#include <json.hpp>

#include <complex>
#include <string>
#include <vector>

#include "ncfield/errors.hpp"
#include "ncfield/exact_matrix.hpp"
#include "ncfield/freegroup.hpp"
#include "ncfield/ncmatrix.hpp"
#include "ncfield/ncrank.hpp"
#include "ncfield/randmat.hpp"
#include "ncfield/ratexpr.hpp"
#include "ncfield/realization.hpp"
#include "ncfield/scalar.hpp"
#include "ncfield/spectra.hpp"

namespace ncfield {

using json = nlohmann::ordered_json;

inline constexpr const char* version = "0.1.0";

// ---------------------------------------------------------------------------
// Reading

inline ExactScalar scalar_from_json(const json& j, const std::string& path) {
    if (j.is_number_integer()) return ExactScalar(j.get<long long>());
    if (j.is_number_float()) {
        const double x = j.get<double>();
        Rational r = best_rational(x, 1000000);
        if (std::abs(static_cast<double>(r) - x) <= 1e-12 * std::max(1.0, std::abs(x))) return ExactScalar(r);
        return ExactScalar(rational_from_double(x));
    }
    if (j.is_string()) {
        try {
            return ExactScalar::parse(j.get<std::string>());
        } catch (const Error& e) {
            throw InputError(path + ": " + e.what());
        }
    }
    throw InputError(path + ": expected a number or a scalar string");
}

inline ExactMatrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols, const std::string& path) {
    if (!j.is_array() || j.size() != rows)
        throw InputError(path + ": expected an array of " + std::to_string(rows) + " rows");
    ExactMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string rp = path + "/" + std::to_string(r);
        if (!j[r].is_array() || j[r].size() != cols)
            throw InputError(rp + ": expected a row of " + std::to_string(cols) + " entries");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = scalar_from_json(j[r][c], rp + "/" + std::to_string(c));
    }
    return m;
}

namespace detail {

inline std::size_t size_field(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() < 0)
        throw InputError(std::string("/") + key + ": expected a non-negative integer");
    return j[key].get<std::size_t>();
}

}  // namespace detail

inline LinearPencil pencil_from_json(const json& j) {
    if (!j.is_object()) throw InputError("/: expected a JSON object");
    const auto n = static_cast<int>(detail::size_field(j, "n_vars"));
    const std::size_t rows = detail::size_field(j, "rows"), cols = detail::size_field(j, "cols");
    if (!j.contains("coeffs") || !j["coeffs"].is_object()) throw InputError("/coeffs: expected an object");
    const json& c = j["coeffs"];
    for (const auto& [key, value] : c.items()) {
        bool known = key.size() >= 2 && key[0] == 'A';
        if (known) {
            try {
                int idx = std::stoi(key.substr(1));
                known = idx >= 0 && idx <= n && key == "A" + std::to_string(idx);
            } catch (...) {
                known = false;
            }
        }
        if (!known) throw InputError("/coeffs/" + key + ": unknown coefficient name");
    }
    std::vector<ExactMatrix> coeffs;
    for (int i = 0; i <= n; ++i) {
        const std::string key = "A" + std::to_string(i);
        if (!c.contains(key)) throw InputError("/coeffs/" + key + ": missing coefficient matrix");
        coeffs.push_back(matrix_from_json(c[key], rows, cols, "/coeffs/" + key));
    }
    return {n, std::move(coeffs)};
}

inline LinearPencil pencil_from_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
    return pencil_from_json(j);
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace detail

/// "p11, p12; p21, p22" with polynomial entries; n_vars <= 0 infers the largest index used.
inline NcMatrix matrix_from_text(const std::string& text, int n_vars = 0) {
    if (n_vars <= 0) n_vars = std::max(1, infer_n_vars(text));
    std::vector<std::vector<NcPoly>> rows;
    for (const auto& row : detail::split(text, ';')) {
        std::vector<NcPoly> entries;
        for (const auto& cell : detail::split(row, ',')) {
            RatExpr e = parse(cell, n_vars);
            auto p = is_polynomial(e);
            if (!p) throw InputError("matrix entry '" + cell + "' is not a polynomial");
            entries.push_back(*p);
        }
        if (!rows.empty() && entries.size() != rows.front().size())
            throw InputError("matrix rows have different lengths");
        rows.push_back(std::move(entries));
    }
    NcMatrix m(rows.size(), rows.front().size(), n_vars);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
}

// ---------------------------------------------------------------------------
// Writing

inline json to_json(const ExactScalar& s) { return s.str(); }
inline json to_json(const Rational& r) { return r.str(); }

inline json to_json(const std::complex<double>& z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const ExactMatrix& m) {
    json a = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).str());
        a.push_back(row);
    }
    return a;
}

inline json to_json(const LinearPencil& p) {
    json c = json::object();
    for (int i = 0; i <= p.n_vars(); ++i) c["A" + std::to_string(i)] = to_json(p.coeff(i));
    return {{"n_vars", p.n_vars()}, {"rows", p.rows()}, {"cols", p.cols()}, {"coeffs", c}};
}

inline json to_json(const LinearRepresentation& r) {
    return {{"k", r.dim()}, {"n_vars", r.n_vars}, {"u", to_json(r.u)}, {"v", to_json(r.v)}, {"pencil", to_json(r.pencil)}};
}

inline json to_json(const SubstitutionSample& s) {
    return {{"d", s.d},
            {"trial", s.trial},
            {"seed", s.seed},
            {"rank", s.rank},
            {"rank_over_d", s.rank_over_d},
            {"estimate", s.estimate},
            {"exact_multiple", s.exact_multiple},
            {"gap_ratio", std::isfinite(s.gap_ratio) ? json(s.gap_ratio) : json(nullptr)},
            {"gap_ok", s.gap_ok},
            {"kernel_dim_qr", s.kernel_dim_qr},
            {"duality_ok", s.duality_ok}};
}

inline json to_json(const RankResult& r) {
    json ev = json::array();
    for (const auto& s : r.evidence) ev.push_back(to_json(s));
    json out = {{"rho", r.rho},
                {"rows", r.rows},
                {"cols", r.cols},
                {"confidence", r.confidence},
                {"linearization_extra", r.linearization_extra},
                {"engines_agree", r.engines_agree},
                {"evidence", ev}};
    if (r.fullness)
        out["fullness"] = {{"verdict", to_string(r.fullness->verdict)},
                           {"method", to_string(r.fullness->method)},
                           {"defect", r.fullness->defect},
                           {"iterations", r.fullness->iterations},
                           {"witness_verified", r.fullness->witness_verified},
                           {"note", r.fullness->note}};
    out["notes"] = r.notes;
    return out;
}

inline json to_json(const FullnessCertificate& c) {
    json out = {{"verdict", to_string(c.verdict)},
                {"method", to_string(c.method)},
                {"defect", c.defect},
                {"iterations", c.iterations},
                {"note", c.note}};
    if (c.witness) out["witness_basis"] = to_json(*c.witness);
    if (c.hollow_block) out["hollow_block"] = {{"rows", c.hollow_block->rows}, {"cols", c.hollow_block->cols}};
    return out;
}

inline json to_json(const SpectrumReport& r) {
    json atoms = json::array();
    for (const auto& e : r.entries) {
        json a = {{"lambda", e.exact ? json(e.exact->str()) : to_json(e.lambda)}, {"rho", e.rho}, {"mass", e.mass.str()}};
        atoms.push_back(a);
    }
    json unc = json::array();
    for (const auto& c : r.uncertified)
        unc.push_back({{"center", to_json(c.center)}, {"count", c.count}, {"reason", c.reason}});
    json diag = {{"candidate_source", to_string(r.source)}, {"uncertified", unc}, {"warnings", r.warnings}};
    if (r.normality_defect) diag["normality_defect"] = *r.normality_defect;
    if (r.flatness) diag["flatness"] = {{"c1", r.flatness->c1}, {"c2", r.flatness->c2}, {"flat", r.flatness->flat}};
    if (r.d > 0) diag["d"] = r.d;
    return {{"N", r.N}, {"atoms", atoms}, {"entropy_dimension", r.dimension.str()}, {"diagnostics", diag}};
}

inline json to_json(const DualCheckReport& r) {
    json pairs = json::array();
    for (const auto& p : r.pairs)
        pairs.push_back({{"i", p.i}, {"j", p.j}, {"defect", p.defect}, {"pass", p.pass}, {"checked", p.checked}});
    return {{"n", r.n},
            {"R", r.R},
            {"ball_size", r.ball_size},
            {"interior_count", r.interior_count},
            {"truncation", "checked on words of length <= R - 1"},
            {"dual_operators", "D_j = -V_j, V_j strips a trailing g_j"},
            {"pairs", pairs},
            {"all_pass", r.all_pass()}};
}

inline json to_json(const IntegralityReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"index", e.index},
                           {"N", e.N},
                           {"rank", e.rank},
                           {"rank_over_d", e.rank_over_d},
                           {"nearest", e.nearest},
                           {"distance", e.distance},
                           {"flagged", e.flagged}});
    return {{"d", r.d},
            {"kind", to_string(r.kind)},
            {"seed", r.seed},
            {"threshold", r.threshold},
            {"entries", entries},
            {"all_pass", r.all_pass()}};
}

inline json to_json(const std::vector<ConvergenceRow>& rows) {
    json a = json::array();
    for (const auto& r : rows) a.push_back({{"d", r.d}, {"rank", r.rank}, {"rank_over_d", r.rank_over_d}});
    return a;
}

}  // namespace ncfield
