#pragma once

#include <vector>

#include "segre/linalg.hpp"
#include "segre/series.hpp"

namespace segre {

/// A vector field sum_v coeffs[v] * d/dx_v over the variables of `space`.
class VectorField {
public:
    explicit VectorField(VarSpacePtr space) : space_(space) {
        for (std::size_t v = 0; v < space_->size(); ++v) coeffs_.emplace_back(space_);
    }

    VectorField(VarSpacePtr space, std::vector<Series> coeffs) : space_(std::move(space)), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != space_->size()) throw DimensionMismatch("vector field has wrong number of coefficients");
        for (const auto& c : coeffs_)
            if (!same_space(c.space(), space_)) throw VarSpaceMismatch("vector field coefficient over foreign space");
    }

    /// d/dx_v.
    static VectorField coordinate(const VarSpacePtr& space, std::size_t v, Order order = kExact) {
        VectorField f(space);
        f.coeffs_[v] = Series::constant(space, 1, order);
        return f;
    }

    const VarSpacePtr& space() const { return space_; }
    const std::vector<Series>& coeffs() const { return coeffs_; }
    const Series& operator[](std::size_t v) const { return coeffs_.at(v); }
    Series& operator[](std::size_t v) { return coeffs_.at(v); }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (!c.is_zero()) return false;
        return true;
    }

    /// X(f) = sum_v X_v df/dx_v.
    Series apply(const Series& f) const {
        if (!same_space(f.space(), space_)) throw ChartMismatch("vector field and function live on different charts");
        Series out(space_, f.order());
        bool first = true;
        for (std::size_t v = 0; v < coeffs_.size(); ++v) {
            if (coeffs_[v].is_zero() || !f.depends_on(v)) continue;
            Series t = coeffs_[v] * diff(f, v);
            if (first) out = std::move(t), first = false;
            else out += t;
        }
        return out;
    }

    Vector at(const Vector& point) const {
        Vector out;
        out.reserve(coeffs_.size());
        for (const auto& c : coeffs_) out.push_back(evaluate(c, point));
        return out;
    }

    VectorField operator-() const {
        VectorField out(*this);
        for (auto& c : out.coeffs_) c = -c;
        return out;
    }
    VectorField& operator+=(const VectorField& o) {
        check(o);
        for (std::size_t v = 0; v < coeffs_.size(); ++v) coeffs_[v] += o.coeffs_[v];
        return *this;
    }
    VectorField& operator*=(const GaussianRational& k) {
        for (auto& c : coeffs_) c *= k;
        return *this;
    }
    friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
    friend VectorField operator-(VectorField a, const VectorField& b) { return a += -b; }
    friend VectorField operator*(const GaussianRational& k, VectorField a) { return a *= k; }

    friend bool operator==(const VectorField& a, const VectorField& b) {
        return same_space(a.space_, b.space_) && a.coeffs_ == b.coeffs_;
    }

    void check(const VectorField& o) const {
        if (!same_space(space_, o.space_)) throw ChartMismatch("vector fields live on different charts");
    }

private:
    VarSpacePtr space_;
    std::vector<Series> coeffs_;
};

/// [X, Y]_v = X(Y_v) - Y(X_v).
inline VectorField bracket(const VectorField& x, const VectorField& y) {
    x.check(y);
    std::vector<Series> out;
    out.reserve(x.space()->size());
    for (std::size_t v = 0; v < x.space()->size(); ++v) out.push_back(x.apply(y[v]) - y.apply(x[v]));
    return {x.space(), std::move(out)};
}

/// Applies X to each component of a vector-valued function.
inline std::vector<Series> apply(const VectorField& x, const std::vector<Series>& f) {
    std::vector<Series> out;
    out.reserve(f.size());
    for (const auto& c : f) out.push_back(x.apply(c));
    return out;
}

/*
 * Keeps a Q(i)-linear basis of a growing family of vector-valued polynomial
 * functions. Each element is flattened into (slot, monomial) coordinates
 * and reduced against the stored pivots, so membership tests are exact.
 */
class FunctionSpan {
public:
    /// Adds f; returns true when f was not already in the span.
    bool insert(const std::vector<Series>& f) {
        Row row = flatten(f);
        reduce(row);
        if (row.empty()) return false;
        const Key pivot = row.begin()->first;
        const GaussianRational inv = GaussianRational(1) / row.begin()->second;
        for (auto& [k, c] : row) c *= inv;
        for (auto& [p, r] : basis_) {
            auto it = r.find(pivot);
            if (it == r.end()) continue;
            const GaussianRational f2 = it->second;
            axpy(r, row, -f2);
        }
        basis_.emplace(pivot, std::move(row));
        return true;
    }

    std::size_t dimension() const { return basis_.size(); }

private:
    using Key = std::pair<std::size_t, Exponents>;
    struct KeyLess {
        bool operator()(const Key& a, const Key& b) const {
            if (a.first != b.first) return a.first < b.first;
            return GradedLexGreater{}(a.second, b.second);
        }
    };
    using Row = std::map<Key, GaussianRational, KeyLess>;

    static Row flatten(const std::vector<Series>& f) {
        Row row;
        for (std::size_t s = 0; s < f.size(); ++s)
            for (const auto& [e, c] : f[s].terms()) row.emplace(Key{s, e}, c);
        return row;
    }

    static void axpy(Row& r, const Row& x, const GaussianRational& k) {
        for (const auto& [key, c] : x) {
            auto [it, inserted] = r.try_emplace(key, c * k);
            if (!inserted) {
                it->second += c * k;
                if (it->second.is_zero()) r.erase(it);
            }
        }
    }

    void reduce(Row& row) const {
        for (const auto& [pivot, r] : basis_) {
            auto it = row.find(pivot);
            if (it == row.end()) continue;
            const GaussianRational k = it->second;
            axpy(row, r, -k);
        }
    }

    std::map<Key, Row, KeyLess> basis_;
};

}  // namespace segre
