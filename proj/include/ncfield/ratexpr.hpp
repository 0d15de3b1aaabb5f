#pragma once

// Noncommutative rational expressions.
//
// Grammar:
//   expr   := term (('+' | '-') term)*
//   term   := unary ('*' unary)*
//   unary  := '-' unary | factor          ('-' directly before a digit starts a literal)
//   factor := atom "'"*
//   atom   := 'x' digits | literal | 'inv' '(' expr ')' | '(' expr ')'
//
// No simplification happens here: two expressions for the same element of the free
// field are compared only through their representations and evaluations.

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ncfield/errors.hpp"
#include "ncfield/model.hpp"
#include "ncfield/ncpoly.hpp"
#include "ncfield/scalar.hpp"

namespace ncfield {

enum class NodeKind { constant, variable, adjoint, neg, inv, add, mul };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    NodeKind kind;
    ExactScalar value;  // constant
    int var = 0;        // variable (1-based)
    ExprPtr left;       // unary child, or left operand
    ExprPtr right;      // right operand

    static ExprPtr make_const(ExactScalar c) {
        return std::make_shared<const ExprNode>(ExprNode{NodeKind::constant, std::move(c), 0, nullptr, nullptr});
    }
    static ExprPtr make_var(int i) { return std::make_shared<const ExprNode>(ExprNode{NodeKind::variable, {}, i, nullptr, nullptr}); }
    static ExprPtr make_unary(NodeKind k, ExprPtr c) {
        return std::make_shared<const ExprNode>(ExprNode{k, {}, 0, std::move(c), nullptr});
    }
    static ExprPtr make_binary(NodeKind k, ExprPtr l, ExprPtr r) {
        return std::make_shared<const ExprNode>(ExprNode{k, {}, 0, std::move(l), std::move(r)});
    }
};

inline bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case NodeKind::constant: return a->value == b->value;
        case NodeKind::variable: return a->var == b->var;
        case NodeKind::adjoint:
        case NodeKind::neg:
        case NodeKind::inv: return structurally_equal(a->left, b->left);
        case NodeKind::add:
        case NodeKind::mul: return structurally_equal(a->left, b->left) && structurally_equal(a->right, b->right);
    }
    return false;
}

/// An AST together with the number of variables it is declared over.
class RatExpr {
public:
    RatExpr() = default;
    RatExpr(ExprPtr root, int n_vars) : root_(std::move(root)), n_vars_(n_vars) {}

    const ExprPtr& root() const noexcept { return root_; }
    int n_vars() const noexcept { return n_vars_; }

    static RatExpr constant(const ExactScalar& c, int n) { return {ExprNode::make_const(c), n}; }
    static RatExpr var(int i, int n) {
        if (i < 1 || i > n) throw UnknownVariable("x" + std::to_string(i) + " outside 1.." + std::to_string(n));
        return {ExprNode::make_var(i), n};
    }
    RatExpr operator+(const RatExpr& o) const { return {ExprNode::make_binary(NodeKind::add, root_, o.root_), join(o)}; }
    RatExpr operator*(const RatExpr& o) const { return {ExprNode::make_binary(NodeKind::mul, root_, o.root_), join(o)}; }
    RatExpr operator-() const { return {ExprNode::make_unary(NodeKind::neg, root_), n_vars_}; }
    RatExpr operator-(const RatExpr& o) const { return *this + (-o); }
    RatExpr inv() const { return {ExprNode::make_unary(NodeKind::inv, root_), n_vars_}; }
    RatExpr star() const { return {ExprNode::make_unary(NodeKind::adjoint, root_), n_vars_}; }

    friend bool operator==(const RatExpr& a, const RatExpr& b) {
        return a.n_vars_ == b.n_vars_ && structurally_equal(a.root_, b.root_);
    }

    std::size_t leaf_count() const { return count(root_, true); }
    std::size_t inv_count() const { return count(root_, false); }

private:
    int join(const RatExpr& o) const {
        if (o.n_vars_ != n_vars_) throw DimensionMismatch("expressions over different variable counts");
        return n_vars_;
    }
    static std::size_t count(const ExprPtr& e, bool leaves) {
        if (!e) return 0;
        switch (e->kind) {
            case NodeKind::constant:
            case NodeKind::variable: return leaves ? 1 : 0;
            case NodeKind::inv: return count(e->left, leaves) + (leaves ? 0 : 1);
            case NodeKind::adjoint:
            case NodeKind::neg: return count(e->left, leaves);
            case NodeKind::add:
            case NodeKind::mul: return count(e->left, leaves) + count(e->right, leaves);
        }
        return 0;
    }

    ExprPtr root_;
    int n_vars_ = 0;
};

namespace detail {

class ExprParser {
public:
    ExprParser(std::string_view t, int n) : t_(t), n_(n) {}

    ExprPtr run() {
        ExprPtr e = expr();
        skip();
        if (pos_ != t_.size()) throw SyntaxError("unexpected '" + std::string(1, t_[pos_]) + "'", pos_);
        return e;
    }

private:
    char peek() {
        skip();
        return pos_ < t_.size() ? t_[pos_] : '\0';
    }
    void skip() {
        while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
    }
    void expect(char c) {
        if (peek() != c) throw SyntaxError(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }

    ExprPtr expr() {
        ExprPtr e = term();
        while (true) {
            char c = peek();
            if (c == '+') {
                ++pos_;
                e = ExprNode::make_binary(NodeKind::add, e, term());
            } else if (c == '-') {
                ++pos_;
                e = ExprNode::make_binary(NodeKind::add, e, ExprNode::make_unary(NodeKind::neg, term()));
            } else {
                return e;
            }
        }
    }

    ExprPtr term() {
        ExprPtr e = unary();
        while (peek() == '*') {
            ++pos_;
            e = ExprNode::make_binary(NodeKind::mul, e, unary());
        }
        return e;
    }

    ExprPtr unary() {
        if (peek() == '-') {
            if (pos_ + 1 < t_.size() && std::isdigit(static_cast<unsigned char>(t_[pos_ + 1]))) return factor();
            ++pos_;
            return ExprNode::make_unary(NodeKind::neg, unary());
        }
        return factor();
    }

    ExprPtr factor() {
        ExprPtr e = atom();
        while (pos_ < t_.size() && t_[pos_] == '\'') {
            ++pos_;
            e = ExprNode::make_unary(NodeKind::adjoint, e);
        }
        return e;
    }

    ExprPtr atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            ExprPtr e = expr();
            expect(')');
            return e;
        }
        if (t_.substr(pos_, 3) == "inv") {
            std::size_t after = pos_ + 3;
            while (after < t_.size() && std::isspace(static_cast<unsigned char>(t_[after]))) ++after;
            if (after < t_.size() && t_[after] == '(') {
                pos_ = after + 1;
                ExprPtr e = expr();
                expect(')');
                return ExprNode::make_unary(NodeKind::inv, e);
            }
        }
        if (c == 'x') {
            std::size_t start = pos_++;
            if (pos_ >= t_.size() || !std::isdigit(static_cast<unsigned char>(t_[pos_])))
                throw SyntaxError("expected variable index after 'x'", pos_);
            long idx = 0;
            while (pos_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[pos_]))) {
                idx = idx * 10 + (t_[pos_++] - '0');
                if (idx > 1000000) throw SyntaxError("variable index too large", start);
            }
            if (idx < 1 || idx > n_)
                throw UnknownVariable("unknown variable x" + std::to_string(idx) + " at position " + std::to_string(start) +
                                      " (declared " + std::to_string(n_) + ")");
            return ExprNode::make_var(static_cast<int>(idx));
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
            auto lit = scan_literal(t_, pos_);
            if (!lit) throw SyntaxError("malformed literal", pos_);
            return ExprNode::make_const(*lit);
        }
        if (c == '\0') throw SyntaxError("unexpected end of input", pos_);
        throw SyntaxError("unexpected '" + std::string(1, c) + "'", pos_);
    }

    std::string_view t_;
    int n_;
    std::size_t pos_ = 0;
};

inline bool starts_with_digit(const std::string& s) { return !s.empty() && std::isdigit(static_cast<unsigned char>(s[0])); }

inline std::string unparse_node(const ExprPtr& e) {
    switch (e->kind) {
        case NodeKind::constant: {
            const ExactScalar& c = e->value;
            std::string s = c.str();
            bool plain = c.is_real() && c.re() >= 0;
            return plain ? s : "(" + s + ")";
        }
        case NodeKind::variable: return "x" + std::to_string(e->var);
        case NodeKind::adjoint: {
            std::string inner = unparse_node(e->left);
            bool atomic = e->left->kind == NodeKind::variable || e->left->kind == NodeKind::inv ||
                          e->left->kind == NodeKind::adjoint || inner.front() == '(';
            return (atomic ? inner : "(" + inner + ")") + "'";
        }
        case NodeKind::neg: {
            std::string inner = unparse_node(e->left);
            return "(-" + (starts_with_digit(inner) ? "(" + inner + ")" : inner) + ")";
        }
        case NodeKind::inv: return "inv(" + unparse_node(e->left) + ")";
        case NodeKind::add: return "(" + unparse_node(e->left) + " + " + unparse_node(e->right) + ")";
        case NodeKind::mul: return "(" + unparse_node(e->left) + "*" + unparse_node(e->right) + ")";
    }
    return {};
}

}  // namespace detail

inline RatExpr parse(std::string_view text, int n_vars) { return {detail::ExprParser(text, n_vars).run(), n_vars}; }

/// Largest variable index mentioned in the text (0 if none); used to infer n_vars.
inline int infer_n_vars(std::string_view text) {
    int best = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != 'x' || (i > 0 && detail::is_ident_char(text[i - 1]))) continue;
        std::size_t j = i + 1;
        int v = 0;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])) && v < 1000000) v = v * 10 + (text[j++] - '0');
        best = std::max(best, v);
    }
    return best;
}

/// Canonical fully parenthesized text; parse(unparse(e)) reproduces e structurally.
inline std::string unparse(const RatExpr& e) { return e.root() ? detail::unparse_node(e.root()) : std::string(); }

namespace detail {

inline ExprPtr adjoint_node(const ExprPtr& e) {
    switch (e->kind) {
        case NodeKind::constant: return ExprNode::make_const(e->value.conj());
        case NodeKind::variable: return ExprNode::make_unary(NodeKind::adjoint, e);
        case NodeKind::adjoint: return e->left;
        case NodeKind::neg: return ExprNode::make_unary(NodeKind::neg, adjoint_node(e->left));
        case NodeKind::inv: return ExprNode::make_unary(NodeKind::inv, adjoint_node(e->left));
        case NodeKind::add: return ExprNode::make_binary(NodeKind::add, adjoint_node(e->left), adjoint_node(e->right));
        case NodeKind::mul: return ExprNode::make_binary(NodeKind::mul, adjoint_node(e->right), adjoint_node(e->left));
    }
    return e;
}

inline void flatten_add(const ExprPtr& e, std::vector<ExprPtr>& out) {
    if (e->kind == NodeKind::add) {
        flatten_add(e->left, out);
        flatten_add(e->right, out);
    } else {
        out.push_back(e);
    }
}

inline ExprPtr normalize_node(const ExprPtr& e) {
    switch (e->kind) {
        case NodeKind::constant:
        case NodeKind::variable: return e;
        case NodeKind::adjoint: {
            ExprPtr c = normalize_node(e->left);
            if (c->kind == NodeKind::variable) return ExprNode::make_unary(NodeKind::adjoint, c);
            return normalize_node(adjoint_node(c));
        }
        case NodeKind::neg:
        case NodeKind::inv: return ExprNode::make_unary(e->kind, normalize_node(e->left));
        case NodeKind::mul: return ExprNode::make_binary(NodeKind::mul, normalize_node(e->left), normalize_node(e->right));
        case NodeKind::add: {
            std::vector<ExprPtr> parts;
            flatten_add(e, parts);
            std::vector<std::pair<std::string, ExprPtr>> keyed;
            for (auto& p : parts) {
                ExprPtr n = normalize_node(p);
                keyed.emplace_back(unparse_node(n), n);
            }
            std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            ExprPtr acc = keyed.front().second;
            for (std::size_t i = 1; i < keyed.size(); ++i) acc = ExprNode::make_binary(NodeKind::add, acc, keyed[i].second);
            return acc;
        }
    }
    return e;
}

}  // namespace detail

/// Structural adjoint: sums map termwise, products reverse, inverses commute with *,
/// constants conjugate, and x** = x.
inline RatExpr expr_adjoint(const RatExpr& e) { return {detail::adjoint_node(e.root()), e.n_vars()}; }

/// Adjoints pushed down to variables, double adjoints removed, sums flattened and
/// their operands sorted by canonical text. Equal normal forms mean equal expressions.
inline RatExpr normalize(const RatExpr& e) { return {detail::normalize_node(e.root()), e.n_vars()}; }

namespace detail {

inline std::optional<NcPoly> expand(const ExprPtr& e, int n) {
    switch (e->kind) {
        case NodeKind::constant: return NcPoly::constant(n, e->value);
        case NodeKind::variable: return NcPoly::variable(n, e->var);
        case NodeKind::inv: return std::nullopt;
        case NodeKind::adjoint: {
            auto c = expand(e->left, n);
            if (!c) return std::nullopt;
            return c->adjoint();
        }
        case NodeKind::neg: {
            auto c = expand(e->left, n);
            if (!c) return std::nullopt;
            return -*c;
        }
        case NodeKind::add:
        case NodeKind::mul: {
            auto l = expand(e->left, n);
            if (!l) return std::nullopt;
            auto r = expand(e->right, n);
            if (!r) return std::nullopt;
            return e->kind == NodeKind::add ? *l + *r : *l * *r;
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// The expanded polynomial iff the expression contains no inverse.
inline std::optional<NcPoly> is_polynomial(const RatExpr& e) { return detail::expand(e.root(), e.n_vars()); }

namespace detail {

inline Eigen::MatrixXcd direct_eval(const ExprPtr& e, const MatrixModel& x) {
    const int d = x.d;
    switch (e->kind) {
        case NodeKind::constant: return e->value.to_complex() * Eigen::MatrixXcd::Identity(d, d);
        case NodeKind::variable: return x.var(e->var);
        case NodeKind::adjoint: return direct_eval(e->left, x).adjoint();
        case NodeKind::neg: return -direct_eval(e->left, x);
        case NodeKind::add: return direct_eval(e->left, x) + direct_eval(e->right, x);
        case NodeKind::mul: return direct_eval(e->left, x) * direct_eval(e->right, x);
        case NodeKind::inv: {
            Eigen::MatrixXcd m = direct_eval(e->left, x);
            Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
            const auto& s = svd.singularValues();
            double smin = s.size() ? s(s.size() - 1) : 0.0;
            double tol = static_cast<double>(d) * std::numeric_limits<double>::epsilon() * (s.size() ? s(0) : 0.0);
            if (!(smin > tol)) throw OutOfDomain("inverse of a singular matrix during direct evaluation", smin, tol);
            return m.partialPivLu().inverse();
        }
    }
    return {};
}

}  // namespace detail

/// Evaluates the expression tree node by node (inverses via explicit matrix inversion).
inline Eigen::MatrixXcd evaluate_direct(const RatExpr& e, const MatrixModel& x) {
    if (x.n_vars() != e.n_vars()) throw DimensionMismatch("model and expression variable counts differ");
    return detail::direct_eval(e.root(), x);
}

}  // namespace ncfield
