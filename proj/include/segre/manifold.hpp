#pragma once

#include <string>
#include <vector>

#include "segre/expression.hpp"
#include "segre/linalg.hpp"
#include "segre/series.hpp"
#include "segre/vector_field.hpp"

namespace segre {

/*
 * CRManifold
 * ----------
 * A generic real-analytic manifold of CR dimension m and codimension d,
 * given through the complexified graph z = xi + i*theta_bar(w, zeta, xi).
 * All series live over the ambient space (w, z, zeta, xi). theta is the
 * sigma-conjugate of theta_bar, so that xi = z - i*theta(zeta, w, z).
 */
struct CRManifold {
    std::size_t m = 0;
    std::size_t d = 0;
    Order order = kExact;
    VarSpacePtr ambient;
    VarSpacePtr chart;               // intrinsic chart (w, zeta, xi)
    std::vector<Series> theta_bar;   // over ambient, in (w, zeta, xi)
    std::vector<Series> theta;       // over ambient, in (zeta, w, z)
    std::string name;

    std::size_t n() const { return m + d; }

    Series xi(std::size_t j) const { return Series::variable(ambient, m + d + m + j, order); }
    Series z(std::size_t j) const { return Series::variable(ambient, m + j, order); }

    /// Qbar_j(w, zeta, xi) = xi_j + i*theta_bar_j.
    Series qbar(std::size_t j) const { return xi(j) + GaussianRational::i() * theta_bar.at(j); }
    /// Q_j(zeta, w, z) = z_j - i*theta_j.
    Series q(std::size_t j) const { return z(j) - GaussianRational::i() * theta.at(j); }

    /// rho_j = z_j - xi_j - i*theta_bar_j.
    std::vector<Series> rho() const {
        std::vector<Series> out;
        for (std::size_t j = 0; j < d; ++j) out.push_back(z(j) - qbar(j));
        return out;
    }

    /// Substitution (w, z, zeta, xi) -> (w, Qbar, zeta, xi) over the ambient space.
    SeriesMap onto_graph() const {
        std::vector<std::pair<std::string, Series>> a;
        for (std::size_t j = 0; j < d; ++j) a.emplace_back(ambient->var(m + j).name, qbar(j));
        return substitution(ambient, ambient, a, order);
    }

    /// theta_bar as series in the intrinsic chart.
    std::vector<Series> theta_bar_chart() const {
        std::vector<Series> out;
        for (const auto& t : theta_bar) out.push_back(rename_into(t, chart));
        return out;
    }

    /// Regular coordinates: theta_bar(w, 0, 0) == 0.
    bool regular() const {
        std::vector<std::pair<std::string, Series>> a;
        for (auto v : ambient->indices_of({"zeta", "xi"})) a.emplace_back(ambient->var(v).name, Series(ambient, order));
        auto sub = substitution(ambient, ambient, a, order);
        for (const auto& t : theta_bar)
            if (!compose(t, sub).is_zero()) return false;
        return true;
    }
};

namespace detail {

inline std::string first_monomial(const Series& s) {
    if (s.is_zero()) return "0";
    const auto& [e, c] = *s.terms().rbegin();  // lowest degree
    Series one(s.space());
    one.add_term(e, c);
    return to_string(one);
}

// Solves z = xi + i*theta_bar(w, zeta, xi) for xi as a jet of order N in (w, zeta, z).
inline std::vector<Series> invert_graph(const CRManifold& M, int N) {
    const auto& sp = M.ambient;
    const std::size_t m = M.m, d = M.d;
    std::vector<Series> qb;
    for (std::size_t j = 0; j < d; ++j) qb.push_back(M.qbar(j).with_order(N));
    // B = dQbar/dxi at 0, R = Qbar - B*xi
    Matrix B(d, Vector(d));
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k) {
            Exponents e(sp->size(), 0);
            e[2 * m + d + k] = 1;
            B[j][k] = qb[j].coefficient(e);
        }
    // invert B by elimination on [B | I]
    Matrix aug(d, Vector(2 * d));
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < d; ++k) aug[j][k] = B[j][k];
        aug[j][d + j] = 1;
    }
    auto ech = row_reduce(aug);
    if (ech.rank < d || ech.pivot_cols.back() >= d) throw SingularInput("d Qbar / d xi is singular at the origin");
    Matrix Binv(d, Vector(d));
    for (std::size_t r = d; r-- > 0;) {
        // back substitution on the reduced echelon form
        Vector row = ech.reduced[r];
        for (std::size_t s = r + 1; s < d; ++s) {
            const GaussianRational f = row[s];
            if (f.is_zero()) continue;
            for (std::size_t c = 0; c < 2 * d; ++c) row[c] -= f * ech.reduced[s][c];
        }
        ech.reduced[r] = row;
    }
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) Binv[r][c] = ech.reduced[r][d + c];
    std::vector<Series> R;
    for (std::size_t j = 0; j < d; ++j) {
        Series r = qb[j];
        for (std::size_t k = 0; k < d; ++k) r -= B[j][k] * M.xi(k).with_order(N);
        R.push_back(std::move(r));
    }
    // xi_{t+1} = B^-1 (z - R(w, zeta, xi_t)); xi_t lives in (w, zeta, z)
    std::vector<Series> xi(d, Series(sp, N));
    for (int it = 0; it <= N + 1; ++it) {
        std::vector<std::pair<std::string, Series>> a;
        for (std::size_t k = 0; k < d; ++k) a.emplace_back(sp->var(2 * m + d + k).name, xi[k]);
        auto sub = substitution(sp, sp, a, N);
        std::vector<Series> next;
        for (std::size_t j = 0; j < d; ++j) {
            Series acc(sp, N);
            for (std::size_t k = 0; k < d; ++k) {
                if (Binv[j][k].is_zero()) continue;
                acc += Binv[j][k] * (M.z(k).with_order(N) - compose(R[k], sub));
            }
            next.push_back(std::move(acc));
        }
        if (next == xi) break;
        xi = std::move(next);
    }
    return xi;
}

}  // namespace detail

/*
 * Builds and validates a manifold from theta_bar (series over the ambient
 * space that must not involve z). theta is derived by sigma-conjugation and
 * the reality identity theta(zeta, w, xi + i*theta_bar) == theta_bar is
 * checked; a formal inversion of the graph equation cross-checks theta.
 */
inline CRManifold new_manifold(std::size_t m, std::size_t d, std::vector<Series> theta_bar, Order order = kExact,
                               std::string name = {}) {
    if (m == 0 || d == 0) throw DimensionMismatch("m and d must be positive");
    if (theta_bar.size() != d) throw DimensionMismatch("expected " + std::to_string(d) + " theta_bar components");
    CRManifold M;
    M.m = m;
    M.d = d;
    M.order = order;
    M.ambient = ambient_space(m, d);
    M.chart = chart_space(m, d);
    M.name = std::move(name);
    for (std::size_t j = 0; j < d; ++j) {
        Series t = theta_bar[j];
        if (!same_space(t.space(), M.ambient)) t = rename_into(t, M.ambient);
        if (order) t = t.with_order(*order);
        for (auto v : M.ambient->indices_of({"z"}))
            if (t.depends_on(v)) throw VarSpaceMismatch("theta_bar_" + std::to_string(j + 1) + " must not involve z");
        if (!t.constant_term().is_zero())
            throw SingularInput("theta_bar_" + std::to_string(j + 1) + " has a nonzero constant term");
        M.theta_bar.push_back(std::move(t));
    }
    for (const auto& t : M.theta_bar) M.theta.push_back(sigma_conjugate(t));

    const auto graph = M.onto_graph();
    for (std::size_t j = 0; j < d; ++j) {
        Series lhs = compose(M.theta[j], graph);
        Series defect = lhs - M.theta_bar[j];
        if (order) defect = defect.with_order(*order);
        if (!defect.is_zero())
            throw RealityViolation("reality identity fails for theta_bar_" + std::to_string(j + 1) +
                                   " at monomial " + detail::first_monomial(defect));
    }

    // cross-check: theta recovered from the inverted graph equation
    int deg = 0;
    for (const auto& t : M.theta_bar) deg = std::max(deg, t.degree());
    const int N = order ? *order : deg + 2;
    const auto xi = detail::invert_graph(M, N);
    for (std::size_t j = 0; j < d; ++j) {
        // xi = z - i*theta  =>  theta = -i*(z - xi)
        Series recovered = (M.z(j).with_order(N) - xi[j]) * (-GaussianRational::i());
        if (!equal_mod(recovered, M.theta[j].with_order(N), N))
            throw RealityViolation("formal inversion disagrees with sigma(theta_bar) in component " +
                                   std::to_string(j + 1));
    }
    return M;
}

/// new_manifold from theta_bar given as expressions in w, zeta, xi.
inline CRManifold parse_manifold(std::size_t m, std::size_t d, const std::vector<std::string>& theta_bar,
                               Order order = kExact, std::string name = {}) {
    auto sp = ambient_space(m, d);
    std::vector<Series> tb;
    for (const auto& s : theta_bar) tb.push_back(parse_series(s, sp, order));
    return new_manifold(m, d, std::move(tb), order, std::move(name));
}

/*
 * From real equations y = h(w, wbar, x) (series over real_space(m, d)):
 * z - zbar = 2i*h(w, wbar, (z + zbar)/2) with z = zbar + i*theta_bar gives
 * theta_bar = 2*h(w, zeta, xi + (i/2)*theta_bar), solved by iteration.
 */
inline CRManifold graph_from_real(std::size_t m, std::size_t d, const std::vector<Series>& h, Order order = kExact,
                                  std::string name = {}) {
    if (h.size() != d) throw DimensionMismatch("expected " + std::to_string(d) + " real equations");
    const auto rs = real_space(m, d);
    for (std::size_t j = 0; j < d; ++j) {
        if (!same_space(h[j].space(), rs)) throw VarSpaceMismatch("h must be a series in (w, wbar, x)");
        if (!h[j].constant_term().is_zero()) throw SingularInput("h(0) != 0");
        for (const auto& [e, c] : h[j].terms())
            if (total_degree(e) == 1) throw SingularInput("dh(0) != 0");
        if (sigma_conjugate(h[j]) != h[j])
            throw RealityViolation("h_" + std::to_string(j + 1) + " is not real-valued");
    }
    const auto sp = ambient_space(m, d);
    // h expressed in (w, zeta, xi); x will be replaced by xi + (i/2)*theta_bar
    std::vector<std::pair<std::string, Series>> rename;
    for (std::size_t k = 1; k <= m; ++k) {
        rename.emplace_back("w" + std::to_string(k), Series::variable(sp, "w" + std::to_string(k), order));
        rename.emplace_back("wbar" + std::to_string(k), Series::variable(sp, "zeta" + std::to_string(k), order));
    }
    const int cap = order ? *order + 2 : 64;
    std::vector<Series> tb(d, Series(sp, order));
    bool converged = false;
    for (int it = 0; it < cap; ++it) {
        auto a = rename;
        for (std::size_t j = 0; j < d; ++j)
            a.emplace_back("x" + std::to_string(j + 1),
                           Series::variable(sp, "xi" + std::to_string(j + 1), order) +
                               GaussianRational::from_fraction(0, 1, 1, 2) * tb[j]);
        SeriesMap sub(sp, rs, [&] {
            std::vector<Series> c(rs->size(), Series(sp, order));
            for (auto& [nm, s] : a) c[rs->index(nm)] = s;
            return c;
        }());
        std::vector<Series> next;
        for (std::size_t j = 0; j < d; ++j) next.push_back(GaussianRational(2) * compose(h[j], sub));
        if (next == tb) {
            converged = true;
            break;
        }
        tb = std::move(next);
    }
    if (!converged && !order)
        throw TruncationRequired("theta_bar is not polynomial; give a truncation order");
    return new_manifold(m, d, tb, order, std::move(name));
}

// ---------------------------------------------------------------------------
// Basepoints

struct Basepoint {
    enum class Kind { Origin, Numeric, Symbolic };
    Kind kind = Kind::Origin;
    Vector w, z, zeta, xi;  // numeric coordinates (zero for the origin)

    static Basepoint origin(const CRManifold& M) {
        return {Kind::Origin, Vector(M.m), Vector(M.d), Vector(M.m), Vector(M.d)};
    }

    static Basepoint symbolic(const CRManifold& M) {
        Basepoint b = origin(M);
        b.kind = Kind::Symbolic;
        return b;
    }

    /// The point (w, Qbar(w, zeta, xi), zeta, xi) of the complexified manifold.
    static Basepoint on_graph(const CRManifold& M, Vector w, Vector zeta, Vector xi) {
        if (w.size() != M.m || zeta.size() != M.m || xi.size() != M.d)
            throw DimensionMismatch("basepoint coordinates have wrong dimensions");
        Basepoint b{Kind::Numeric, std::move(w), Vector(M.d), std::move(zeta), std::move(xi)};
        const auto pt = b.ambient_point();
        for (std::size_t j = 0; j < M.d; ++j) b.z[j] = evaluate(M.qbar(j), pt);
        return b;
    }

    /// A numeric point given in all four blocks; must lie on the manifold exactly.
    static Basepoint numeric(const CRManifold& M, Vector w, Vector z, Vector zeta, Vector xi) {
        Basepoint b{Kind::Numeric, std::move(w), std::move(z), std::move(zeta), std::move(xi)};
        if (b.w.size() != M.m || b.z.size() != M.d || b.zeta.size() != M.m || b.xi.size() != M.d)
            throw DimensionMismatch("basepoint coordinates have wrong dimensions");
        const auto pt = b.ambient_point();
        for (const auto& r : M.rho())
            if (!evaluate(r, pt).is_zero()) throw OffManifold("basepoint does not satisfy rho = 0");
        bool zero = true;
        for (const auto& c : pt) zero = zero && c.is_zero();
        if (zero) b.kind = Kind::Origin;
        return b;
    }

    Vector ambient_point() const {
        Vector p = w;
        p.insert(p.end(), z.begin(), z.end());
        p.insert(p.end(), zeta.begin(), zeta.end());
        p.insert(p.end(), xi.begin(), xi.end());
        return p;
    }

    Vector chart_point() const {
        Vector p = w;
        p.insert(p.end(), zeta.begin(), zeta.end());
        p.insert(p.end(), xi.begin(), xi.end());
        return p;
    }

    /// sigma(p) = (conj zeta, conj xi, conj w, conj z).
    Basepoint sigma() const {
        auto c = [](const Vector& v) {
            Vector o;
            for (const auto& x : v) o.push_back(x.conj());
            return o;
        };
        return {kind, c(zeta), c(xi), c(w), c(z)};
    }
};

// ---------------------------------------------------------------------------
// CR vector fields in the ambient chart

struct MVectorField {
    std::vector<VectorField> components;
};

struct VectorFieldCertificate {
    bool tangent = false;      // every component annihilates rho on the manifold
    bool commuting = false;    // all mutual brackets vanish
};

/// Checks tangency and commutativity of an m-vector field in the ambient chart.
inline VectorFieldCertificate certify_fields(const CRManifold& M, const MVectorField& f) {
    VectorFieldCertificate cert{true, true};
    const auto graph = M.onto_graph();
    const auto rho = M.rho();
    for (const auto& X : f.components)
        for (const auto& r : rho) {
            Series v = compose(X.apply(r), graph);
            if (M.order) v = v.with_order(*M.order - 1);
            cert.tangent = cert.tangent && v.is_zero();
        }
    for (std::size_t a = 0; a < f.components.size(); ++a)
        for (std::size_t b = a + 1; b < f.components.size(); ++b) {
            auto br = bracket(f.components[a], f.components[b]);
            for (auto& c : br.coeffs()) {
                Series v = c;
                if (M.order) v = v.with_order(*M.order - 2);
                cert.commuting = cert.commuting && v.is_zero();
            }
        }
    return cert;
}

struct CRVectorFields {
    MVectorField L;     // d/dw_j + i*theta_bar_{w_j} d/dz
    MVectorField Lbar;  // d/dzeta_j - i*theta_{zeta_j} d/dxi
    VectorFieldCertificate L_cert;
    VectorFieldCertificate Lbar_cert;
};

inline CRVectorFields vector_fields(const CRManifold& M) {
    const auto& sp = M.ambient;
    const auto I = GaussianRational::i();
    CRVectorFields out;
    for (std::size_t a = 0; a < M.m; ++a) {
        const std::size_t wa = a, za = M.n() + a;
        VectorField L = VectorField::coordinate(sp, wa, M.order);
        VectorField Lb = VectorField::coordinate(sp, za, M.order);
        for (std::size_t j = 0; j < M.d; ++j) {
            L[M.m + j] = I * diff(M.theta_bar[j], wa);
            Lb[M.n() + M.m + j] = -I * diff(M.theta[j], za);
        }
        out.L.components.push_back(std::move(L));
        out.Lbar.components.push_back(std::move(Lb));
    }
    out.L_cert = certify_fields(M, out.L);
    out.Lbar_cert = certify_fields(M, out.Lbar);
    return out;
}

// ---------------------------------------------------------------------------
// Complexified Segre varieties

/// Leaf space: parameters s_1..s_m, plus the fixed-point coordinates when symbolic.
inline VarSpacePtr leaf_space(std::size_t m, std::size_t d, bool symbolic_point) {
    VarSpace::Builder b;
    b.block("s", Role::Leaf, m, "s", true).self_paired("s");
    if (symbolic_point) {
        b.block("wp", Role::Base, m, "wp", true);
        b.block("zp", Role::Base, d, "zp", true);
        b.block("zetap", Role::Base, m, "zetap", true);
        b.block("xip", Role::Base, d, "xip", true);
        b.pair("wp", "zetap").pair("zp", "xip");
    }
    return b.build();
}

namespace detail {

inline SeriesMap ambient_map(const CRManifold& M, const VarSpacePtr& domain, const std::vector<Series>& w,
                             const std::vector<Series>& z, const std::vector<Series>& zeta,
                             const std::vector<Series>& xi) {
    std::vector<Series> c;
    c.insert(c.end(), w.begin(), w.end());
    c.insert(c.end(), z.begin(), z.end());
    c.insert(c.end(), zeta.begin(), zeta.end());
    c.insert(c.end(), xi.begin(), xi.end());
    return {domain, M.ambient, std::move(c)};
}

inline std::vector<Series> constants(const VarSpacePtr& sp, const Vector& v, Order o) {
    std::vector<Series> out;
    for (const auto& c : v) out.push_back(Series::constant(sp, c, o));
    return out;
}

inline std::vector<Series> block_vars(const VarSpacePtr& sp, const std::string& label, Order o) {
    std::vector<Series> out;
    for (auto v : sp->block(label).vars) out.push_back(Series::variable(sp, v, o));
    return out;
}

}  // namespace detail

/// S_{tau_p}: s -> (s, Qbar(s, zeta_p, xi_p), zeta_p, xi_p), for a numeric fixed point tau_p.
inline SeriesMap segre_leaf(const CRManifold& M, const Vector& zeta_p, const Vector& xi_p) {
    const auto sp = leaf_space(M.m, M.d, false);
    const auto s = detail::block_vars(sp, "s", M.order);
    const auto zeta = detail::constants(sp, zeta_p, M.order), xi = detail::constants(sp, xi_p, M.order);
    auto pre = detail::ambient_map(M, sp, s, std::vector<Series>(M.d, Series(sp, M.order)), zeta, xi);
    std::vector<Series> z;
    for (std::size_t j = 0; j < M.d; ++j) z.push_back(compose(M.qbar(j), pre));
    return detail::ambient_map(M, sp, s, z, zeta, xi);
}

/// Symbolic fixed point: the leaf through (zetap, xip), with the other blocks unused.
inline SeriesMap segre_leaf_symbolic(const CRManifold& M) {
    const auto sp = leaf_space(M.m, M.d, true);
    const auto s = detail::block_vars(sp, "s", M.order);
    const auto zeta = detail::block_vars(sp, "zetap", M.order), xi = detail::block_vars(sp, "xip", M.order);
    auto pre = detail::ambient_map(M, sp, s, std::vector<Series>(M.d, Series(sp, M.order)), zeta, xi);
    std::vector<Series> z;
    for (std::size_t j = 0; j < M.d; ++j) z.push_back(compose(M.qbar(j), pre));
    return detail::ambient_map(M, sp, s, z, zeta, xi);
}

/// Conjugate leaf through t_p: s -> (w_p, z_p, s, Q(s, w_p, z_p)).
inline SeriesMap conjugate_segre_leaf(const CRManifold& M, const Vector& w_p, const Vector& z_p) {
    const auto sp = leaf_space(M.m, M.d, false);
    const auto s = detail::block_vars(sp, "s", M.order);
    const auto w = detail::constants(sp, w_p, M.order), z = detail::constants(sp, z_p, M.order);
    auto pre = detail::ambient_map(M, sp, w, z, s, std::vector<Series>(M.d, Series(sp, M.order)));
    std::vector<Series> xi;
    for (std::size_t j = 0; j < M.d; ++j) xi.push_back(compose(M.q(j), pre));
    return detail::ambient_map(M, sp, w, z, s, xi);
}

/*
 * sigma applied to a parametrised map into the ambient space: the image
 * component for variable v is the sigma-conjugate of the component for its
 * partner, with the parameters conjugated along the domain's own pairing.
 */
inline SeriesMap sigma_image(const SeriesMap& f) {
    std::vector<Series> out;
    const auto& cod = *f.codomain();
    for (std::size_t v = 0; v < cod.size(); ++v) {
        auto p = cod.partner(v);
        if (!p) throw UnpairedVariable("codomain variable '" + cod.var(v).name + "' has no sigma partner");
        out.push_back(sigma_conjugate(f[*p]));
    }
    return {f.domain(), f.codomain(), std::move(out)};
}

/// rho composed with a map into the ambient space; all zero iff the map lands in the manifold.
inline bool lands_in_manifold(const CRManifold& M, const SeriesMap& f) {
    for (const auto& r : M.rho()) {
        Series v = compose(r, f);
        if (M.order) v = v.with_order(*M.order);
        if (!v.is_zero()) return false;
    }
    return true;
}

}  // namespace segre
