#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "segre/errors.hpp"
#include "segre/gaussian_rational.hpp"
#include "segre/var_space.hpp"

namespace segre {

using Exponents = std::vector<std::uint16_t>;

/// Truncation order: a total degree N, or std::nullopt for EXACT (polynomial) mode.
using Order = std::optional<int>;
inline constexpr Order kExact = std::nullopt;

inline int total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

/// Graded-lexicographic order, highest degree first.
struct GradedLexGreater {
    bool operator()(const Exponents& a, const Exponents& b) const {
        const int da = total_degree(a), db = total_degree(b);
        if (da != db) return da > db;
        return a > b;
    }
};

inline Order min_order(Order a, Order b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

/*
 * Series
 * ------
 * Sparse multivariate polynomial / truncated power series over Q(i).
 *
 * Terms are keyed by exponent vectors over a shared VarSpace. Zero
 * coefficients are never stored and, in truncated mode, every stored term
 * has total degree <= order. Values are immutable in practice: all
 * operations return new series.
 */
class Series {
public:
    using Terms = std::map<Exponents, GaussianRational, GradedLexGreater>;

    explicit Series(VarSpacePtr space, Order order = kExact) : space_(std::move(space)), order_(order) {
        if (order_ && *order_ < 0) order_ = -1;
    }

    static Series constant(VarSpacePtr space, const GaussianRational& c, Order order = kExact) {
        Series s(std::move(space), order);
        s.add_term(Exponents(s.space_->size(), 0), c);
        return s;
    }

    static Series variable(VarSpacePtr space, std::size_t index, Order order = kExact) {
        if (index >= space->size()) throw UnknownVariable("variable index out of range");
        Exponents e(space->size(), 0);
        e[index] = 1;
        Series s(std::move(space), order);
        s.add_term(std::move(e), GaussianRational(1));
        return s;
    }

    static Series variable(VarSpacePtr space, const std::string& name, Order order = kExact) {
        const auto idx = space->index(name);
        return variable(std::move(space), idx, order);
    }

    static Series monomial(VarSpacePtr space, Exponents e, const GaussianRational& c, Order order = kExact) {
        if (e.size() != space->size()) throw DimensionMismatch("exponent vector length mismatch");
        Series s(std::move(space), order);
        s.add_term(std::move(e), c);
        return s;
    }

    const VarSpacePtr& space() const { return space_; }
    Order order() const { return order_; }
    bool is_exact() const { return !order_.has_value(); }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    /// Highest total degree present, -1 for the zero series.
    int degree() const { return terms_.empty() ? -1 : total_degree(terms_.begin()->first); }

    /// Lowest total degree present, -1 for the zero series.
    int valuation() const { return terms_.empty() ? -1 : total_degree(terms_.rbegin()->first); }

    GaussianRational coefficient(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? GaussianRational(0) : it->second;
    }

    GaussianRational constant_term() const { return coefficient(Exponents(space_->size(), 0)); }

    bool depends_on(std::size_t var) const {
        for (const auto& [e, c] : terms_)
            if (e[var] != 0) return true;
        return false;
    }

    /// Accumulates c*x^e, dropping it when above the truncation order and erasing cancellations.
    void add_term(Exponents e, const GaussianRational& c) {
        if (c.is_zero()) return;
        if (order_ && total_degree(e) > *order_) return;
        auto [it, inserted] = terms_.try_emplace(std::move(e), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Series with_order(Order order) const {
        Series out(space_, order);
        for (const auto& [e, c] : terms_) out.add_term(e, c);
        return out;
    }

    Series operator-() const {
        Series out(space_, order_);
        for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
        return out;
    }

    Series& operator+=(const Series& o) {
        check_space(o);
        order_ = min_order(order_, o.order_);
        if (order_) drop_above(*order_);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Series& operator-=(const Series& o) {
        check_space(o);
        order_ = min_order(order_, o.order_);
        if (order_) drop_above(*order_);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    Series& operator*=(const GaussianRational& k) {
        if (k.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= k;
        return *this;
    }

    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(Series a, const GaussianRational& k) { return a *= k; }
    friend Series operator*(const GaussianRational& k, Series a) { return a *= k; }

    friend Series operator*(const Series& a, const Series& b) {
        a.check_space(b);
        const Order order = min_order(a.order_, b.order_);
        Series out(a.space_, order);
        if (a.is_zero() || b.is_zero()) return out;
        const std::size_t n = a.space_->size();
        Exponents e(n);
        for (const auto& [ea, ca] : a.terms_) {
            const int da = total_degree(ea);
            for (const auto& [eb, cb] : b.terms_) {
                if (order && da + total_degree(eb) > *order) continue;
                for (std::size_t v = 0; v < n; ++v) e[v] = static_cast<std::uint16_t>(ea[v] + eb[v]);
                out.add_term(e, ca * cb);
            }
        }
        return out;
    }
    Series& operator*=(const Series& o) { return *this = *this * o; }

    Series pow(unsigned k) const {
        Series result = constant(space_, 1, order_);
        Series base = *this;
        while (k) {
            if (k & 1u) result *= base;
            k >>= 1u;
            if (k) base *= base;
        }
        return result;
    }

    /// Same space, same truncation order and same terms.
    friend bool operator==(const Series& a, const Series& b) {
        return same_space(a.space_, b.space_) && a.order_ == b.order_ && a.terms_ == b.terms_;
    }

    /// True when a - b has no terms of total degree <= n.
    friend bool equal_mod(const Series& a, const Series& b, int n) {
        a.check_space(b);
        Series diff = a - b;
        for (const auto& [e, c] : diff.terms_)
            if (total_degree(e) <= n) return false;
        return true;
    }

    /// Same values regardless of the recorded truncation orders.
    friend bool same_terms(const Series& a, const Series& b) {
        return same_space(a.space_, b.space_) && a.terms_ == b.terms_;
    }

private:
    void check_space(const Series& o) const {
        if (!same_space(space_, o.space_)) throw VarSpaceMismatch("series live over different variable spaces");
    }

    void drop_above(int n) {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (total_degree(it->first) > n) it = terms_.erase(it);
            else break;  // map is sorted by descending degree
        }
    }

    VarSpacePtr space_;
    Order order_;
    Terms terms_;
};

/*
 * SeriesMap
 * ---------
 * An ordered tuple of series over a common domain space; component j is the
 * value assigned to variable j of the codomain space.
 */
class SeriesMap {
public:
    SeriesMap(VarSpacePtr domain, VarSpacePtr codomain, std::vector<Series> components)
        : domain_(std::move(domain)), codomain_(std::move(codomain)), comps_(std::move(components)) {
        if (comps_.size() != codomain_->size())
            throw DimensionMismatch("component count " + std::to_string(comps_.size()) + " != codomain dimension " +
                                    std::to_string(codomain_->size()));
        Order order = kExact;
        for (const auto& c : comps_) {
            if (!same_space(c.space(), domain_)) throw VarSpaceMismatch("map component over foreign space");
            order = min_order(order, c.order());
        }
        if (order)
            for (auto& c : comps_) c = c.with_order(order);
    }

    /// The identity substitution on `space`.
    static SeriesMap identity(const VarSpacePtr& space, Order order = kExact) {
        std::vector<Series> comps;
        for (std::size_t i = 0; i < space->size(); ++i) comps.push_back(Series::variable(space, i, order));
        return {space, space, std::move(comps)};
    }

    const VarSpacePtr& domain() const { return domain_; }
    const VarSpacePtr& codomain() const { return codomain_; }
    const std::vector<Series>& components() const { return comps_; }
    const Series& operator[](std::size_t i) const { return comps_.at(i); }
    const Series& at(const std::string& codomain_var) const { return comps_.at(codomain_->index(codomain_var)); }
    std::size_t size() const { return comps_.size(); }
    Order order() const { return comps_.empty() ? kExact : comps_.front().order(); }

    friend bool operator==(const SeriesMap& a, const SeriesMap& b) {
        return same_space(a.domain_, b.domain_) && same_space(a.codomain_, b.codomain_) && a.comps_ == b.comps_;
    }

private:
    VarSpacePtr domain_;
    VarSpacePtr codomain_;
    std::vector<Series> comps_;
};

/// A new space holding copies of the named blocks of `space` (pairings between kept blocks are kept).
inline VarSpacePtr subspace(const VarSpace& space, const std::vector<std::string>& labels) {
    VarSpace::Builder b;
    for (const auto& l : labels) {
        const auto& blk = space.block(l);
        std::vector<std::string> names;
        for (auto v : blk.vars) names.push_back(space.var(v).name);
        b.named_block(l, blk.role, names);
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = i; j < labels.size(); ++j) {
            const auto& bi = space.block(labels[i]);
            if (bi.vars.empty()) continue;
            auto p = space.partner(bi.vars.front());
            if (!p || space.var(*p).block != space.block_index(labels[j])) continue;
            if (i == j) b.self_paired(labels[i]);
            else if (p != bi.vars.front()) b.pair(labels[i], labels[j]);
        }
    }
    return b.build();
}

/// Components of `map` for the named codomain blocks, as a map into the corresponding subspace.
inline SeriesMap project(const SeriesMap& map, const std::vector<std::string>& labels) {
    auto target = subspace(*map.codomain(), labels);
    std::vector<Series> comps;
    for (auto v : map.codomain()->indices_of(labels)) comps.push_back(map[v]);
    return {map.domain(), target, std::move(comps)};
}

// ---------------------------------------------------------------------------
// Calculus and substitution

/// Partial derivative with respect to variable index `v`; truncation order drops by one.
inline Series diff(const Series& f, std::size_t v) {
    if (v >= f.space()->size()) throw UnknownVariable("variable index out of range");
    Series out(f.space(), f.order() ? Order(*f.order() - 1) : kExact);
    for (const auto& [e, c] : f.terms()) {
        if (e[v] == 0) continue;
        Exponents de = e;
        de[v] -= 1;
        out.add_term(std::move(de), c * GaussianRational(static_cast<long>(e[v])));
    }
    return out;
}

inline Series diff(const Series& f, const std::string& name) { return diff(f, f.space()->index(name)); }

namespace detail {

// Horner-style recursive substitution over variables v, v+1, ... of the terms in [first, last).
struct ComposeContext {
    const SeriesMap* sub;
    Order order;
    std::vector<std::vector<Series>> powers;  // powers[v][k] = sub[v]^k

    const Series& power(std::size_t v, unsigned k) {
        auto& p = powers[v];
        if (p.empty()) p.push_back(Series::constant(sub->domain(), 1, order));
        while (p.size() <= k) p.push_back(p.back() * (*sub)[v]);
        return p[k];
    }
};

using TermRef = std::pair<const Exponents*, const GaussianRational*>;

inline Series compose_rec(ComposeContext& ctx, std::vector<TermRef>& terms, std::size_t v) {
    const std::size_t n = ctx.sub->size();
    while (v < n && std::all_of(terms.begin(), terms.end(), [&](const TermRef& t) { return (*t.first)[v] == 0; }))
        ++v;
    if (v == n) {
        GaussianRational c(0);
        for (const auto& t : terms) c += *t.second;
        return Series::constant(ctx.sub->domain(), c, ctx.order);
    }
    std::map<unsigned, std::vector<TermRef>> groups;
    for (const auto& t : terms) groups[(*t.first)[v]].push_back(t);
    Series out(ctx.sub->domain(), ctx.order);
    for (auto& [k, group] : groups) {
        Series inner = compose_rec(ctx, group, v + 1);
        if (k == 0) out += inner;
        else out += inner * ctx.power(v, k);
    }
    return out;
}

}  // namespace detail

/*
 * f o sub: substitutes sub[j] for variable j of f's space. Exact in EXACT
 * mode; correct modulo the result's truncation order otherwise.
 */
inline Series compose(const Series& f, const SeriesMap& sub) {
    if (!same_space(f.space(), sub.codomain()))
        throw VarSpaceMismatch("substitution does not cover the series' variable space");
    if (!f.is_exact()) {
        for (std::size_t v = 0; v < sub.size(); ++v)
            if (f.depends_on(v) && !sub[v].constant_term().is_zero())
                throw TruncationUnsound("nonzero constant substituted for '" + f.space()->var(v).name +
                                        "' in a truncated series");
    }
    const Order order = min_order(f.order(), sub.order());
    detail::ComposeContext ctx{&sub, order, std::vector<std::vector<Series>>(sub.size())};
    std::vector<detail::TermRef> terms;
    terms.reserve(f.size());
    for (const auto& [e, c] : f.terms()) terms.emplace_back(&e, &c);
    if (terms.empty()) return Series(sub.domain(), order);
    return detail::compose_rec(ctx, terms, 0);
}

inline SeriesMap compose(const SeriesMap& f, const SeriesMap& sub) {
    std::vector<Series> comps;
    comps.reserve(f.size());
    for (const auto& c : f.components()) comps.push_back(compose(c, sub));
    return {sub.domain(), f.codomain(), std::move(comps)};
}

/// Builds a substitution into `target` from named assignments; unassigned variables map to themselves
/// when `domain` shares the name, else error.
inline SeriesMap substitution(const VarSpacePtr& target, const VarSpacePtr& domain,
                              const std::vector<std::pair<std::string, Series>>& assignments, Order order = kExact) {
    std::vector<std::optional<Series>> comps(target->size());
    for (const auto& [name, s] : assignments) comps[target->index(name)] = s;
    std::vector<Series> out;
    for (std::size_t v = 0; v < target->size(); ++v) {
        if (comps[v]) {
            out.push_back(*comps[v]);
            continue;
        }
        const auto& name = target->var(v).name;
        auto idx = domain->find(name);
        if (!idx) throw UnknownVariable("no substitution given for '" + name + "'");
        out.push_back(Series::variable(domain, *idx, order));
    }
    return {domain, target, std::move(out)};
}

/// Re-expresses `f` over `target`, mapping each variable by name. Every used variable must exist there.
inline Series rename_into(const Series& f, const VarSpacePtr& target) {
    for (std::size_t v = 0; v < f.space()->size(); ++v)
        if (!target->find(f.space()->var(v).name) && f.depends_on(v))
            throw UnknownVariable("variable '" + f.space()->var(v).name + "' missing from target space");
    Series out(target, f.order());
    for (const auto& [e, c] : f.terms()) {
        Exponents te(target->size(), 0);
        for (std::size_t v = 0; v < e.size(); ++v)
            if (e[v]) te[*target->find(f.space()->var(v).name)] = e[v];
        out.add_term(std::move(te), c);
    }
    return out;
}

inline SeriesMap rename_into(const SeriesMap& f, const VarSpacePtr& target) {
    std::vector<Series> comps;
    for (const auto& c : f.components()) comps.push_back(rename_into(c, target));
    return {target, f.codomain(), std::move(comps)};
}

/*
 * The sigma involution on series: conjugates every coefficient and moves
 * each exponent to the sigma-partner variable (w <-> zeta, z <-> xi).
 */
inline Series sigma_conjugate(const Series& f) {
    const auto& sp = *f.space();
    for (std::size_t v = 0; v < sp.size(); ++v)
        if (!sp.partner(v) && f.depends_on(v))
            throw UnpairedVariable("variable '" + sp.var(v).name + "' has no sigma partner");
    Series out(f.space(), f.order());
    for (const auto& [e, c] : f.terms()) {
        Exponents se(e.size(), 0);
        for (std::size_t v = 0; v < e.size(); ++v)
            if (e[v]) se[*sp.partner(v)] = e[v];
        out.add_term(std::move(se), c.conj());
    }
    return out;
}

/// Coefficient-wise complex conjugation, variables untouched.
inline Series conjugate_coefficients(const Series& f) {
    Series out(f.space(), f.order());
    for (const auto& [e, c] : f.terms()) out.add_term(e, c.conj());
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

class PowerTable {
public:
    explicit PowerTable(std::span<const GaussianRational> point) : point_(point), pows_(point.size()) {}

    const GaussianRational& get(std::size_t v, unsigned k) {
        auto& p = pows_[v];
        if (p.empty()) p.emplace_back(1);
        while (p.size() <= k) p.push_back(p.back() * point_[v]);
        return p[k];
    }

private:
    std::span<const GaussianRational> point_;
    std::vector<std::vector<GaussianRational>> pows_;
};

}  // namespace detail

/// Value of the polynomial part of f at `point` (jet semantics in truncated mode).
inline GaussianRational evaluate(const Series& f, std::span<const GaussianRational> point) {
    if (point.size() != f.space()->size())
        throw DimensionMismatch("point has " + std::to_string(point.size()) + " coordinates, space has " +
                                std::to_string(f.space()->size()));
    detail::PowerTable pt(point);
    GaussianRational acc(0);
    for (const auto& [e, c] : f.terms()) {
        GaussianRational t = c;
        for (std::size_t v = 0; v < e.size(); ++v)
            if (e[v]) t *= pt.get(v, e[v]);
        acc += t;
    }
    return acc;
}

inline std::vector<GaussianRational> evaluate(const SeriesMap& f, std::span<const GaussianRational> point) {
    std::vector<GaussianRational> out;
    out.reserve(f.size());
    for (const auto& c : f.components()) out.push_back(evaluate(c, point));
    return out;
}

/// Values at `point` of the partial derivatives of f with respect to the variables `wrt`.
inline std::vector<GaussianRational> evaluate_gradient(const Series& f, std::span<const GaussianRational> point,
                                                       std::span<const std::size_t> wrt) {
    if (point.size() != f.space()->size()) throw DimensionMismatch("point dimension mismatch");
    detail::PowerTable pt(point);
    std::vector<GaussianRational> out(wrt.size(), GaussianRational(0));
    for (const auto& [e, c] : f.terms()) {
        for (std::size_t j = 0; j < wrt.size(); ++j) {
            const auto v = wrt[j];
            if (e[v] == 0) continue;
            GaussianRational t = c * GaussianRational(static_cast<long>(e[v]));
            for (std::size_t u = 0; u < e.size(); ++u) {
                const unsigned k = (u == v) ? e[u] - 1u : e[u];
                if (k) t *= pt.get(u, k);
            }
            out[j] += t;
        }
    }
    return out;
}

/// Symbolic Jacobian: entry (i, j) = d f_i / d wrt_j.
inline std::vector<std::vector<Series>> jacobian(const SeriesMap& f, std::span<const std::size_t> wrt) {
    std::vector<std::vector<Series>> J;
    for (const auto& c : f.components()) {
        std::vector<Series> row;
        for (auto v : wrt) row.push_back(diff(c, v));
        J.push_back(std::move(row));
    }
    return J;
}

inline std::vector<std::vector<Series>> jacobian(const SeriesMap& f, const std::vector<std::string>& blocks) {
    const auto wrt = f.domain()->indices_of(blocks);
    return jacobian(f, std::span<const std::size_t>(wrt));
}

}  // namespace segre
