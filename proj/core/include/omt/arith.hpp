#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace omt {

/// Exact rational number backed by GMP. Always kept in canonical form
/// (gcd(|num|, den) = 1, den > 0).
class Rational {
public:
    Rational() = default;
    Rational(int v) : value_(v) {}
    Rational(long v) : value_(v) {}
    Rational(long long v);
    Rational(long num, long den);
    explicit Rational(mpq_class v);

    /// Accepts "p", "p/q", "-p/q" and decimal "1.25".
    static Rational parse(std::string_view text);

    const mpq_class& get() const noexcept { return value_; }

    Rational numerator() const;
    Rational denominator() const;
    int sign() const noexcept { return sgn(value_); }
    bool is_zero() const noexcept { return sign() == 0; }
    bool is_integer() const noexcept { return value_.get_den() == 1; }
    Rational abs() const;
    Rational inverse() const;

    /// "p/q", with "/q" omitted when q = 1.
    std::string str() const;
    /// Always "p/q", including "/1".
    std::string fraction_str() const;

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class value_;
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// A value v + k*eps for a symbolic positive infinitesimal eps. Strict
/// bounds are encoded with unit eps coefficients: x < b becomes x <= b - eps.
struct DeltaRational {
    Rational real;
    Rational delta;

    DeltaRational() = default;
    DeltaRational(Rational r) : real(std::move(r)) {}
    DeltaRational(Rational r, Rational d) : real(std::move(r)), delta(std::move(d)) {}
    DeltaRational(int r) : real(r) {}

    DeltaRational& operator+=(const DeltaRational& o);
    DeltaRational& operator-=(const DeltaRational& o);
    DeltaRational& operator*=(const Rational& c);
    DeltaRational& operator/=(const Rational& c);

    friend DeltaRational operator+(DeltaRational a, const DeltaRational& b) { return a += b; }
    friend DeltaRational operator-(DeltaRational a, const DeltaRational& b) { return a -= b; }
    friend DeltaRational operator*(DeltaRational a, const Rational& c) { return a *= c; }
    friend DeltaRational operator*(const Rational& c, DeltaRational a) { return a *= c; }
    friend DeltaRational operator/(DeltaRational a, const Rational& c) { return a /= c; }
    friend DeltaRational operator-(const DeltaRational& a) { return {-a.real, -a.delta}; }

    friend bool operator==(const DeltaRational&, const DeltaRational&) = default;
    friend std::strong_ordering operator<=>(const DeltaRational& a, const DeltaRational& b);

    bool is_strict() const noexcept { return !delta.is_zero(); }

    /// Value for a concrete choice of eps.
    Rational concretize(const Rational& eps) const { return real + delta * eps; }

    /// "p/q" or "p/q + k*eps".
    std::string str() const;
    friend std::ostream& operator<<(std::ostream& os, const DeltaRational& d) { return os << d.str(); }
};

/// Lexicographic comparison on (real, delta).
std::strong_ordering delta_compare(const DeltaRational& a, const DeltaRational& b);

/// a + c*b, computed componentwise.
DeltaRational delta_combine(const DeltaRational& a, const Rational& c, const DeltaRational& b);

/// Largest eps0 in (0, 1] such that for every pair (lo, hi) with lo <= hi
/// symbolically, lo.concretize(eps) <= hi.concretize(eps) for all 0 < eps <= eps0.
Rational concretization_epsilon(const std::vector<std::pair<DeltaRational, DeltaRational>>& ordered_pairs);

/// Cost value as used throughout the optimizer: a finite (possibly strict)
/// delta-rational, +infinity (unsatisfiable) or -infinity (unbounded).
class Extended {
public:
    enum class Kind : std::uint8_t { MinusInfinity, Finite, PlusInfinity };

    Extended() : kind_(Kind::PlusInfinity) {}
    Extended(DeltaRational v) : kind_(Kind::Finite), value_(std::move(v)) {}
    static Extended plus_infinity() { return Extended(Kind::PlusInfinity); }
    static Extended minus_infinity() { return Extended(Kind::MinusInfinity); }

    Kind kind() const noexcept { return kind_; }
    bool is_finite() const noexcept { return kind_ == Kind::Finite; }
    bool is_plus_infinity() const noexcept { return kind_ == Kind::PlusInfinity; }
    bool is_minus_infinity() const noexcept { return kind_ == Kind::MinusInfinity; }
    const DeltaRational& value() const;

    friend bool operator==(const Extended&, const Extended&) = default;
    friend std::strong_ordering operator<=>(const Extended& a, const Extended& b);

    std::string str() const;
    friend std::ostream& operator<<(std::ostream& os, const Extended& e) { return os << e.str(); }

private:
    explicit Extended(Kind k) : kind_(k) {}
    Kind kind_;
    DeltaRational value_;
};

} // namespace omt
