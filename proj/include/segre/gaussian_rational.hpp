#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>

#include "segre/errors.hpp"

namespace segre {

/*
 * GaussianRational
 * ----------------
 * An element re + im*i of Q(i). Both parts are GMP rationals kept in
 * canonical form (coprime numerator/denominator, positive denominator),
 * so structural equality is field equality.
 */
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(long re) : re_(re) {}  // NOLINT: implicit from integers is intended
    GaussianRational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
        re_.canonicalize();
        im_.canonicalize();
    }

    static GaussianRational i() { return {mpq_class(0), mpq_class(1)}; }

    static GaussianRational from_fraction(long num, long den, long inum = 0, long iden = 1) {
        if (den == 0 || iden == 0) throw DivisionByZero("zero denominator in Gaussian rational");
        return {mpq_class(num, den), mpq_class(inum, iden)};
    }

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    bool is_imaginary() const { return sgn(re_) == 0 && sgn(im_) != 0; }

    GaussianRational conj() const { return {re_, -im_}; }

    GaussianRational operator-() const { return {-re_, -im_}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        if (o.is_real()) {
            re_ *= o.re_;
            im_ *= o.re_;
            return *this;
        }
        if (is_real()) {
            im_ = re_ * o.im_;
            re_ *= o.re_;
            return *this;
        }
        mpq_class r = re_ * o.re_ - im_ * o.im_;
        mpq_class s = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(s);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        if (o.is_zero()) throw DivisionByZero("division by zero in Q(i)");
        if (o.is_real()) {
            re_ /= o.re_;
            im_ /= o.re_;
            return *this;
        }
        mpq_class n = o.re_ * o.re_ + o.im_ * o.im_;
        *this *= o.conj();
        re_ /= n;
        im_ /= n;
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    GaussianRational pow(unsigned e) const {
        GaussianRational result(1);
        GaussianRational base = *this;
        while (e) {
            if (e & 1u) result *= base;
            e >>= 1u;
            if (e) base *= base;
        }
        return result;
    }

    /// Canonical text: `a/b`, `c/d*i`, or `a/b+c/d*i` (no surrounding parentheses).
    std::string to_string() const {
        if (is_zero()) return "0";
        if (is_real()) return re_.get_str();
        std::string imag;
        if (im_ == 1) imag = "i";
        else if (im_ == -1) imag = "-i";
        else imag = im_.get_str() + "*i";
        if (sgn(re_) == 0) return imag;
        if (sgn(im_) > 0) return re_.get_str() + "+" + imag;
        return re_.get_str() + imag;
    }

    friend std::ostream& operator<<(std::ostream& os, const GaussianRational& g) { return os << g.to_string(); }

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

}  // namespace segre
