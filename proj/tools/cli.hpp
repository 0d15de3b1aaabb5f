#pragma once

// Command-line front end. run_cli() is separate from main() so tests can drive it in-process.
//
// Exit codes: 0 success, 1 input error, 2 inconclusive mathematics, 3 out-of-domain evaluation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "ncfield/ncfield.hpp"

namespace ncfield::cli {

enum ExitCode { ok = 0, input_error = 1, inconclusive = 2, out_of_domain = 3 };

struct RunConfig {
    std::uint64_t seed = 1;
    std::vector<int> dims;
    int trials = 2;
    std::string kind = "gue";
    double tol = 1.0;
    std::string format = "json";
    std::string out;
    int threads = 0;
};

struct Input {
    std::string pencil;  // file
    std::string expr;
    std::string matrix;
    std::string name;
    int vars = 0;
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json config_json(const RunConfig& c) {
    return {{"seed", c.seed}, {"dims", c.dims},     {"trials", c.trials}, {"kind", c.kind},
            {"tol", c.tol},   {"format", c.format}, {"threads", c.threads > 0 ? c.threads : static_cast<int>(worker_count())}};
}

/// Pencil input stays a pencil; text inputs become polynomial matrices.
struct Loaded {
    std::optional<LinearPencil> pencil;
    NcMatrix matrix;
};

inline Loaded load(const Input& in) {
    const int given = (in.pencil.empty() ? 0 : 1) + (in.expr.empty() ? 0 : 1) + (in.matrix.empty() ? 0 : 1) +
                      (in.name.empty() ? 0 : 1);
    if (given != 1) throw InputError("give exactly one of --pencil, --expr, --matrix, --name");
    Loaded l;
    if (!in.pencil.empty()) {
        l.pencil = pencil_from_text(read_file(in.pencil));
        l.matrix = pencil_to_matrix(*l.pencil);
        return l;
    }
    std::string text = in.matrix;
    if (!in.expr.empty()) text = in.expr;
    if (!in.name.empty()) {
        auto it = named_matrices().find(in.name);
        if (it == named_matrices().end()) throw InputError("unknown matrix name '" + in.name + "'");
        text = it->second;
    }
    l.matrix = matrix_from_text(text, in.vars);
    return l;
}

inline NcRankOptions rank_options(const RunConfig& c) {
    NcRankOptions o;
    o.substitution.dims = c.dims;
    o.substitution.trials = c.trials;
    o.substitution.seed = c.seed;
    o.substitution.kind = model_kind_from_string(c.kind);
    o.substitution.policy.factor = c.tol;
    return o;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string o = "\"";
    for (char ch : s) o += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return o + "\"";
}

/// Tabular view of a result: header + rows of scalars.
inline std::string to_csv(const json& rows) {
    if (!rows.is_array() || rows.empty()) return "";
    std::ostringstream os;
    std::vector<std::string> keys;
    for (const auto& [k, v] : rows.front().items())
        if (!v.is_structured()) keys.push_back(k);
    for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
    os << "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < keys.size(); ++i) {
            const json& v = r.contains(keys[i]) ? r[keys[i]] : json(nullptr);
            os << (i ? "," : "") << csv_escape(v.is_string() ? v.get<std::string>() : v.dump());
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace detail

class Runner {
public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(int argc, const char* const* argv) {
        CLI::App app{"Inner rank, rational functions and spectra over the free field", "ncfield"};
        app.require_subcommand(1);
        app.set_version_flag("--version", std::string(version));

        auto common = [&](CLI::App* sub) {
            sub->add_option("--seed", cfg_.seed, "Base random seed");
            sub->add_option("--dims", cfg_.dims, "Matrix dimensions, comma separated")->delimiter(',');
            sub->add_option("--trials", cfg_.trials, "Samples per dimension")->check(CLI::PositiveNumber);
            sub->add_option("--kind", cfg_.kind, "Random matrix model")
                ->check(CLI::IsMember({"gue", "haar", "haar_unitary", "ginibre"}));
            sub->add_option("--tol", cfg_.tol, "Tolerance factor")->check(CLI::PositiveNumber);
            sub->add_option("--format", cfg_.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
            sub->add_option("--out", cfg_.out, "Write the report to this file");
            sub->add_option("--threads", cfg_.threads, "Worker threads (overrides NCFIELD_THREADS)");
        };
        auto inputs = [&](CLI::App* sub) {
            sub->add_option("--pencil", in_.pencil, "Pencil JSON file");
            sub->add_option("--expr", in_.expr, "Polynomial expression (1 x 1)");
            sub->add_option("--matrix", in_.matrix, "Matrix text: rows ';', entries ','");
            sub->add_option("--name", in_.name, "Built-in matrix name");
            sub->add_option("--vars", in_.vars, "Number of variables (default: largest index used)");
        };

        auto* rank = app.add_subcommand("rank", "Inner rank with engine cross-checks");
        common(rank);
        inputs(rank);
        bool no_scaling = false;
        rank->add_flag("--no-scaling", no_scaling, "Skip the operator-scaling cross-check");

        auto* atoms = app.add_subcommand("atoms", "Central eigenvalues, atom masses, entropy dimension");
        common(atoms);
        inputs(atoms);
        bool certify = false, entropy = false;
        int atom_d = 0;
        atoms->add_flag("--certify", certify, "Certify numeric atoms algebraically");
        atoms->add_flag("--entropy", entropy, "Report the entropy dimension only (implies --certify)");
        atoms->add_option("--d", atom_d, "Matrix size for numeric atom detection");

        auto* eval = app.add_subcommand("eval", "Evaluate a rational expression through its linear representation");
        common(eval);
        std::string eval_expr;
        int eval_d = 20, eval_vars = 0;
        bool dump = false;
        eval->add_option("expression", eval_expr, "Rational expression")->required();
        eval->add_option("--d", eval_d, "Matrix size")->check(CLI::PositiveNumber);
        eval->add_option("--vars", eval_vars, "Number of variables");
        eval->add_flag("--dump", dump, "Include the evaluated matrix");

        auto* realize_cmd = app.add_subcommand("realize", "Linear representation of a rational expression");
        common(realize_cmd);
        std::string real_expr;
        int real_vars = 0;
        realize_cmd->add_option("expression", real_expr, "Rational expression")->required();
        realize_cmd->add_option("--vars", real_vars, "Number of variables");

        auto* dual = app.add_subcommand("dualcheck", "Dual-system commutator check on a ball of F_n");
        common(dual);
        int dn = 2, dr = 6;
        dual->add_option("--n", dn, "Generators");
        dual->add_option("--R", dr, "Ball radius");

        auto* scan = app.add_subcommand("scan", "Integrality or convergence scans of empirical ranks");
        common(scan);
        inputs(scan);
        std::string mode = "integrality", corpus;
        std::size_t count = 20;
        int scan_d = 100;
        double threshold = 0.02;
        scan->add_option("mode", mode, "integrality | convergence")->check(CLI::IsMember({"integrality", "convergence"}));
        scan->add_option("--corpus", corpus, "JSON array of matrix texts");
        scan->add_option("--count", count, "Size of the default random corpus");
        scan->add_option("--d", scan_d, "Matrix size for the integrality scan")->check(CLI::PositiveNumber);
        scan->add_option("--threshold", threshold, "Allowed distance to an integer");

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            int code = app.exit(e, out_, err_);
            return code == 0 ? ok : input_error;
        }
        if (cfg_.threads > 0) setenv("NCFIELD_THREADS", std::to_string(cfg_.threads).c_str(), 1);

        try {
            json result;
            std::string command;
            if (*rank) {
                command = "rank";
                result = cmd_rank(no_scaling);
            } else if (*atoms) {
                command = "atoms";
                result = cmd_atoms(certify || entropy, entropy, atom_d);
            } else if (*eval) {
                command = "eval";
                result = cmd_eval(eval_expr, eval_vars, eval_d, dump);
            } else if (*realize_cmd) {
                command = "realize";
                const int n = real_vars > 0 ? real_vars : std::max(1, infer_n_vars(real_expr));
                RatExpr e = parse(real_expr, n);
                result = {{"expression", unparse(e)}, {"representation", to_json(realize(e))}};
            } else if (*dual) {
                command = "dualcheck";
                result = to_json(dual_system_check(dn, dr));
                table_ = result["pairs"];
                if (!result["all_pass"].get<bool>()) status_ = inconclusive;
            } else if (*scan) {
                command = "scan";
                result = cmd_scan(mode, corpus, count, scan_d, threshold);
            }
            emit(command, result);
            return status_;
        } catch (const InputError& e) {
            err_ << "input error: " << e.what() << "\n";
            return input_error;
        } catch (const SyntaxError& e) {
            err_ << "syntax error: " << e.what() << "\n";
            return input_error;
        } catch (const UnknownVariable& e) {
            err_ << "input error: " << e.what() << "\n";
            return input_error;
        } catch (const DimensionMismatch& e) {
            err_ << "input error: " << e.what() << "\n";
            return input_error;
        } catch (const StarredLetter& e) {
            err_ << "input error: " << e.what() << "\n";
            return input_error;
        } catch (const SizeGuard& e) {
            err_ << "input error: " << e.what() << "\n";
            return input_error;
        } catch (const NoConsensus& e) {
            err_ << "inconclusive: " << e.what() << "\n";
            for (const auto& d : e.diagnostics()) err_ << "  " << d << "\n";
            return inconclusive;
        } catch (const Inconclusive& e) {
            err_ << "inconclusive: " << e.what() << "\n";
            return inconclusive;
        } catch (const EngineDisagreement& e) {
            err_ << "engine disagreement: " << e.what() << "\n";
            return inconclusive;
        } catch (const OutOfDomain& e) {
            err_ << "out of domain: " << e.what() << " (sigma_min = " << e.sigma_min()
                 << ", threshold = " << e.threshold() << ")\n";
            return out_of_domain;
        } catch (const Error& e) {
            err_ << "error: " << e.what() << "\n";
            return inconclusive;
        }
    }

private:
    json cmd_rank(bool no_scaling) {
        detail::Loaded l = detail::load(in_);
        NcRankOptions o = detail::rank_options(cfg_);
        o.use_scaling = !no_scaling;
        RankResult r = ncrank(l.matrix, o);
        err_ << "rho = " << r.rho << " (" << r.rows << "x" << r.cols << ")\n";
        json j = to_json(r);
        table_ = j["evidence"];
        return j;
    }

    json cmd_atoms(bool certify, bool entropy_only, int d) {
        detail::Loaded l = detail::load(in_);
        SpectrumReport rep;
        if (l.pencil) {
            PencilSpectrumOptions po;
            po.rank = detail::rank_options(cfg_);
            rep = central_eigs_pencil(*l.pencil, po);
            rep.flatness = flatness(*l.pencil);
        } else {
            AtomOptions ao;
            ao.d = d;
            ao.seed = cfg_.seed;
            ao.kind = model_kind_from_string(cfg_.kind);
            ao.certify = certify;
            ao.rank = detail::rank_options(cfg_);
            rep = central_eigs_polymatrix(l.matrix, ao);
        }
        for (const auto& w : rep.warnings) err_ << "warning: " << w << "\n";
        json j = to_json(rep);
        table_ = j["atoms"];
        if (entropy_only) {
            if (!rep.uncertified.empty()) status_ = inconclusive;
            return {{"N", rep.N}, {"entropy_dimension", rep.dimension.str()}, {"atoms", j["atoms"]}};
        }
        return j;
    }

    json cmd_eval(const std::string& text, int vars, int d, bool dump) {
        const int n = vars > 0 ? vars : std::max(1, infer_n_vars(text));
        RatExpr e = parse(text, n);
        LinearRepresentation rep = realize(e);
        MatrixModel x = sample(model_kind_from_string(cfg_.kind), d, n, cfg_.seed);
        DomainReport dom = domain_check(rep, x, cfg_.tol);
        Eigen::MatrixXcd value = eval_rep(rep, x, cfg_.tol);
        const double residual = (value - Eigen::MatrixXcd::Identity(d, d)).norm();
        json j = {{"expression", unparse(e)},
                  {"k", rep.dim()},
                  {"d", d},
                  {"sigma_min", dom.sigma_min},
                  {"sigma_max", dom.sigma_max},
                  {"threshold", dom.threshold},
                  {"norm", value.norm()},
                  {"residual_to_identity", residual}};
        // Inverse residual for inv(...) at the root: ||inner * value - 1||.
        if (e.root()->kind == NodeKind::inv) {
            try {
                RatExpr inner(e.root()->left, n);
                Eigen::MatrixXcd a = evaluate_direct(inner, x);
                j["inverse_residual"] = (a * value - Eigen::MatrixXcd::Identity(d, d)).norm();
            } catch (const OutOfDomain&) {
            }
        }
        try {
            j["direct_difference"] = (evaluate_direct(e, x) - value).norm();
        } catch (const OutOfDomain&) {
            j["direct_difference"] = nullptr;
        }
        if (dump) {
            json rows = json::array();
            for (Eigen::Index r = 0; r < value.rows(); ++r) {
                json row = json::array();
                for (Eigen::Index c = 0; c < value.cols(); ++c) row.push_back(to_json(value(r, c)));
                rows.push_back(row);
            }
            j["matrix"] = rows;
        }
        err_ << "k = " << rep.dim() << ", residual to identity = " << residual << "\n";
        table_ = json::array({j});
        return j;
    }

    json cmd_scan(const std::string& mode, const std::string& corpus_file, std::size_t count, int d, double threshold) {
        const ModelKind kind = model_kind_from_string(cfg_.kind);
        if (mode == "convergence") {
            detail::Loaded l = detail::load(in_);
            std::vector<int> dims = cfg_.dims.empty() ? std::vector<int>{8, 32, 128} : cfg_.dims;
            RankPolicy pol;
            pol.factor = cfg_.tol;
            auto rows = rank_convergence(l.matrix, dims, cfg_.seed, kind, pol);
            json j = {{"mode", "convergence"}, {"matrix", l.matrix.str()}, {"rows", to_json(rows)}};
            table_ = j["rows"];
            return j;
        }
        std::vector<NcMatrix> ps;
        if (!corpus_file.empty()) {
            json arr;
            try {
                arr = json::parse(detail::read_file(corpus_file));
            } catch (const json::parse_error& e) {
                throw InputError(std::string("invalid corpus JSON: ") + e.what());
            }
            if (!arr.is_array()) throw InputError("/: corpus must be an array of matrix texts");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                if (!arr[i].is_string()) throw InputError("/" + std::to_string(i) + ": expected a matrix text");
                ps.push_back(matrix_from_text(arr[i].get<std::string>(), in_.vars));
            }
        } else {
            CorpusOptions co;
            co.count = count;
            ps = random_corpus(cfg_.seed, co);
        }
        RankPolicy pol;
        pol.factor = cfg_.tol;
        IntegralityReport rep = atiyah_integrality_scan(ps, d, cfg_.seed, kind, threshold, pol);
        json j = to_json(rep);
        j["mode"] = "integrality";
        table_ = j["entries"];
        err_ << rep.entries.size() << " matrices, " << (rep.all_pass() ? "all near-integer" : "some flagged") << "\n";
        return j;
    }

    void emit(const std::string& command, const json& result) {
        std::string text;
        if (cfg_.format == "csv") {
            text = detail::to_csv(table_.is_null() ? json::array({result}) : table_);
        } else {
            json envelope = {{"command", command},
                             {"version", version},
                             {"config", detail::config_json(cfg_)},
                             {"result", result}};
            text = envelope.dump(2) + "\n";
        }
        if (cfg_.out.empty()) {
            out_ << text;
        } else {
            std::ofstream f(cfg_.out);
            if (!f) throw InputError("cannot write " + cfg_.out);
            f << text;
        }
    }

    std::ostream& out_;
    std::ostream& err_;
    RunConfig cfg_;
    Input in_;
    json table_;
    int status_ = ok;
};

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    Runner r(out, err);
    return r.run(argc, argv);
}

}  // namespace ncfield::cli
