#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "segre/series.hpp"

namespace segre {

/*
 * Polynomial expression grammar shared by manifests and the CLI:
 *
 *   expr   := term (('+' | '-') term)*
 *   term   := unary (('*' | '/') unary)*        division only by nonzero constants
 *   unary  := '-' unary | '+' unary | power
 *   power  := atom ('^' integer)?
 *   atom   := integer | 'i' | identifier | '(' expr ')'
 *
 * Identifiers must name variables of the target space. Anything else
 * (functions, negative or fractional exponents) is rejected.
 */
class ExpressionParser {
public:
    ExpressionParser(std::string_view text, VarSpacePtr space, Order order)
        : text_(text), space_(std::move(space)), order_(order) {}

    Series parse() {
        Series s = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return s;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " at column " + std::to_string(pos_ + 1) + " in '" + std::string(text_) + "'");
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Series expr() {
        Series acc = term();
        for (;;) {
            if (accept('+')) acc += term();
            else if (accept('-')) acc -= term();
            else return acc;
        }
    }

    Series term() {
        Series acc = unary();
        for (;;) {
            if (accept('*')) {
                acc = acc * unary();
            } else if (accept('/')) {
                Series den = unary();
                if (den.degree() > 0) fail("division by a non-constant expression");
                const auto c = den.constant_term();
                if (c.is_zero()) fail("division by zero");
                acc *= GaussianRational(1) / c;
            } else {
                return acc;
            }
        }
    }

    Series unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Series power() {
        Series base = atom();
        if (accept('^')) {
            skip_ws();
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (start == pos_) fail("exponent must be a nonnegative integer");
            const unsigned long e = std::stoul(std::string(text_.substr(start, pos_ - start)));
            if (e > 1000) fail("exponent too large");
            return base.pow(static_cast<unsigned>(e));
        }
        return base;
    }

    Series atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Series s = expr();
            if (!accept(')')) fail("expected ')'");
            return s;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            mpq_class q(std::string(text_.substr(start, pos_ - start)));
            return Series::constant(space_, GaussianRational(q), order_);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            const std::string name(text_.substr(start, pos_ - start));
            if (name == "i") return Series::constant(space_, GaussianRational::i(), order_);
            auto idx = space_->find(name);
            if (!idx) {
                pos_ = start;
                fail("unknown identifier '" + name + "'");
            }
            return Series::variable(space_, *idx, order_);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    VarSpacePtr space_;
    Order order_;
    std::size_t pos_ = 0;
};

inline Series parse_series(std::string_view text, const VarSpacePtr& space, Order order = kExact) {
    return ExpressionParser(text, space, order).parse();
}

/// Parses a constant expression such as `1/2-3*i`.
inline GaussianRational parse_scalar(std::string_view text) {
    static const VarSpacePtr empty = VarSpace::Builder().build();
    Series s = parse_series(text, empty);
    return s.constant_term();
}

inline std::string monomial_string(const VarSpace& space, const Exponents& e) {
    std::string out;
    for (std::size_t v = 0; v < e.size(); ++v) {
        if (e[v] == 0) continue;
        if (!out.empty()) out += "*";
        out += space.var(v).name;
        if (e[v] > 1) out += "^" + std::to_string(e[v]);
    }
    return out;
}

/*
 * Canonical text form: terms in graded-lex order (highest degree first),
 * coefficients written as a/b, c/d*i or (a/b+c/d*i). Parsing the result
 * gives back the same series.
 */
inline std::string to_string(const Series& s) {
    if (s.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : s.terms()) {
        const std::string mono = monomial_string(*s.space(), e);
        bool negative = false;
        GaussianRational k = c;
        if ((k.is_real() && sgn(k.re()) < 0) || (k.is_imaginary() && sgn(k.im()) < 0)) {
            negative = true;
            k = -k;
        }
        std::string coef;
        if (k.is_one()) coef = mono.empty() ? "1" : "";
        else if (k.is_real() || k.is_imaginary()) coef = k.to_string();
        else coef = "(" + k.to_string() + ")";
        std::string body = coef;
        if (!mono.empty()) body += (coef.empty() ? "" : "*") + mono;
        if (first) out += negative ? "-" + body : body;
        else out += negative ? " - " + body : " + " + body;
        first = false;
    }
    return out;
}

inline std::string to_string(const SeriesMap& m) {
    std::string out = "(";
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) out += ", ";
        out += to_string(m[i]);
    }
    return out + ")";
}

}  // namespace segre
