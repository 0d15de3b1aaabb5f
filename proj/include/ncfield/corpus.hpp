#pragma once

// Named matrices and a seeded random corpus of small polynomial matrices for the scans.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "ncfield/errors.hpp"
#include "ncfield/ncmatrix.hpp"

namespace ncfield {

/// Matrix text of the built-in examples (see matrix_from_text).
inline const std::map<std::string, std::string>& named_matrices() {
    static const std::map<std::string, std::string> m = {
        {"gram3", "x1, x2; x2, x3"},
        {"sym2", "x1, x2; x2, x1"},
        {"diag", "x1, 0; 0, 0"},
        {"upper", "x1, x2; 0, x1"},
        {"commutator", "x1*x2 - x2*x1"},
        {"rank-one", "x1, x1*x2; 1, x2"},
        {"product", "x1*x2"},
    };
    return m;
}

struct CorpusOptions {
    std::size_t count = 20;
    std::vector<std::size_t> sizes = {2, 3};
    int n_vars = 2;
    int max_degree = 2;
    int max_terms = 3;
    int coeff_range = 2;
};

/// Random square matrices, entries with up to max_terms monomials and integer coefficients.
inline std::vector<NcMatrix> random_corpus(std::uint64_t seed, const CorpusOptions& o = {}) {
    if (o.sizes.empty() || o.n_vars < 1) throw InputError("corpus needs sizes and at least one variable");
    std::mt19937_64 rng(seed);
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    std::vector<NcMatrix> out;
    for (std::size_t k = 0; k < o.count; ++k) {
        const std::size_t n = o.sizes[static_cast<std::size_t>(uni(0, static_cast<int>(o.sizes.size()) - 1))];
        NcMatrix m(n, n, o.n_vars);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                NcPoly p(o.n_vars);
                const int terms = uni(0, o.max_terms);
                for (int t = 0; t < terms; ++t) {
                    Word w;
                    const int len = uni(0, o.max_degree);
                    for (int l = 0; l < len; ++l) w.push_back(Letter{uni(1, o.n_vars), false});
                    int coef = uni(-o.coeff_range, o.coeff_range);
                    if (coef != 0) p.add_term(w, ExactScalar(coef));
                }
                m(r, c) = p;
            }
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace ncfield
