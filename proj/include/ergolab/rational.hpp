#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace ergolab {

// All core computations run on exact rationals; no floating point anywhere.
using Rat = mpq_class;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a construction would exceed a configured size budget.
struct SizeError : Error {
    using Error::Error;
};

// Parses "p", "-p" or "p/q" (q > 0 after canonicalization). Anything else throws.
Rat rat_from_string(const std::string& s);

// Canonical "p/q" form, denominator always written ("3" -> "3/1").
std::string rat_to_string(const Rat& r);

// Exact |r|.
inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline Rat rat_of(long long v) { return Rat(static_cast<long>(v)); }
inline Rat rat_frac(long long num, long long den) {
    Rat r(static_cast<long>(num), static_cast<long>(den));
    r.canonicalize();
    return r;
}

// Exact square root when the rational is a perfect square, nullopt otherwise.
std::optional<Rat> rat_sqrt_exact(const Rat& r);

// Floor/ceil of sqrt(r) scaled to `digits` extra decimal digits of precision,
// as exact rationals bracketing the true root: lo <= sqrt(r) <= hi.
std::pair<Rat, Rat> rat_sqrt_bracket(const Rat& r, unsigned digits = 30);

// Gaussian rationals a + bi; the scalar type of observables. Conjugation is exact.
struct GaussRat {
    Rat re;
    Rat im;

    GaussRat() : re(0), im(0) {}
    GaussRat(int v) : re(v), im(0) {}  // NOLINT(google-explicit-constructor)
    GaussRat(Rat r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
    GaussRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

    static GaussRat i() { return {Rat(0), Rat(1)}; }

    GaussRat conj() const { return {re, Rat(-im)}; }
    bool is_real() const { return im == 0; }
    bool is_zero() const { return re == 0 && im == 0; }
    Rat norm_sq() const { return re * re + im * im; }

    GaussRat& operator+=(const GaussRat& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussRat& operator-=(const GaussRat& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussRat& operator*=(const GaussRat& o) {
        Rat r = re * o.re - im * o.im;
        Rat i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    GaussRat& operator*=(const Rat& c) {
        re *= c;
        im *= c;
        return *this;
    }
    GaussRat& operator/=(const Rat& c) {
        if (c == 0) throw Error("division by zero rational");
        re /= c;
        im /= c;
        return *this;
    }

    friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
    friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
    friend GaussRat operator-(const GaussRat& a) { return {Rat(-a.re), Rat(-a.im)}; }
    friend GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
    friend GaussRat operator*(GaussRat a, const Rat& c) { return a *= c; }
    friend GaussRat operator*(const Rat& c, GaussRat a) { return a *= c; }
    friend GaussRat operator/(GaussRat a, const Rat& c) { return a /= c; }
    friend bool operator==(const GaussRat& a, const GaussRat& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }
};

std::string gauss_to_string(const GaussRat& z);

// Exact |z| when it is rational (z real, purely imaginary, or |z|^2 a perfect
// square); nullopt otherwise.
std::optional<Rat> gauss_abs_exact(const GaussRat& z);

}  // namespace ergolab
