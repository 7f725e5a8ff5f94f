#pragma once

#include <complex>
#include <cstdint>
#include <ostream>

#include <boost/rational.hpp>

namespace sbtrace {

using cplx = std::complex<double>;

using Rational = boost::rational<long long>;

/// Complex number with exact rational real/imaginary parts. Used by the
/// exact coefficient mode of the polynomial ring, where operator identities
/// can be checked without any floating-point noise.
struct RationalComplex {
    Rational re{0};
    Rational im{0};

    RationalComplex() = default;
    RationalComplex(long long n) : re(n) {}
    RationalComplex(Rational r) : re(std::move(r)) {}
    RationalComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == Rational(0) && im == Rational(0); }

    RationalComplex operator-() const { return {-re, -im}; }

    RationalComplex& operator+=(const RationalComplex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    RationalComplex& operator-=(const RationalComplex& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    RationalComplex& operator*=(const RationalComplex& o) {
        const Rational r = re * o.re - im * o.im;
        const Rational i = re * o.im + im * o.re;
        re = r;
        im = i;
        return *this;
    }

    friend RationalComplex operator+(RationalComplex a, const RationalComplex& b) { return a += b; }
    friend RationalComplex operator-(RationalComplex a, const RationalComplex& b) { return a -= b; }
    friend RationalComplex operator*(RationalComplex a, const RationalComplex& b) { return a *= b; }
    friend bool operator==(const RationalComplex& a, const RationalComplex& b) {
        return a.re == b.re && a.im == b.im;
    }

    friend std::ostream& operator<<(std::ostream& os, const RationalComplex& z) {
        return os << "(" << z.re << "," << z.im << ")";
    }
};

inline RationalComplex conj(const RationalComplex& z) { return {z.re, -z.im}; }

/// Uniform coefficient interface used by the templated polynomial ring.
template <class C>
struct ScalarTraits;

template <>
struct ScalarTraits<cplx> {
    static bool is_zero(const cplx& c) { return c == cplx(0.0, 0.0); }
    static cplx from_int(long long n) { return cplx(static_cast<double>(n), 0.0); }
    static cplx conjugate(const cplx& c) { return std::conj(c); }
};

template <>
struct ScalarTraits<RationalComplex> {
    static bool is_zero(const RationalComplex& c) { return c.is_zero(); }
    static RationalComplex from_int(long long n) { return RationalComplex(n); }
    static RationalComplex conjugate(const RationalComplex& c) { return conj(c); }
};

inline cplx to_cplx(const RationalComplex& z) {
    return {boost::rational_cast<double>(z.re), boost::rational_cast<double>(z.im)};
}
inline cplx to_cplx(const cplx& z) { return z; }

}  // namespace sbtrace
