#include "omt/arith.hpp"

#include <stdexcept>

#include "omt/errors.hpp"

namespace omt {

Rational::Rational(long long v)
{
    // mpz from long long is not portable; go through the decimal string.
    value_ = mpq_class(std::to_string(v));
}

Rational::Rational(long num, long den)
{
    if (den == 0)
        throw UsageError("rational with zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
}

Rational::Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text)
{
    std::string s(text);
    if (s.empty())
        throw ParseError("empty rational literal", 0, 0);
    auto valid_int = [](std::string_view t) {
        std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size())
            return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9')
                return false;
        return true;
    };
    if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string int_part = s.substr(0, dot);
        std::string frac_part = s.substr(dot + 1);
        bool negative = !int_part.empty() && int_part[0] == '-';
        if (int_part.empty() || int_part == "-" || int_part == "+")
            int_part += "0";
        if (!valid_int(int_part) || frac_part.empty() || !valid_int(frac_part) || frac_part[0] == '-' ||
            frac_part[0] == '+')
            throw ParseError("malformed decimal literal '" + s + "'", 0, 0);
        mpz_class whole(int_part[0] == '+' ? int_part.substr(1) : int_part);
        mpz_class frac(frac_part);
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_part.size());
        mpz_class num = ::abs(whole) * scale + frac;
        if (negative)
            num = -num;
        return Rational(mpq_class(num, scale));
    }
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    if (!num.empty() && num[0] == '+')
        num = num.substr(1);
    if (!valid_int(num))
        throw ParseError("malformed rational literal '" + s + "'", 0, 0);
    if (slash == std::string::npos)
        return Rational(mpq_class(mpz_class(num)));
    std::string den = s.substr(slash + 1);
    if (!valid_int(den) || den[0] == '-' || den[0] == '+')
        throw ParseError("malformed rational literal '" + s + "'", 0, 0);
    mpz_class d(den);
    if (d == 0)
        throw ParseError("zero denominator in '" + s + "'", 0, 0);
    return Rational(mpq_class(mpz_class(num), d));
}

Rational Rational::numerator() const { return Rational(mpq_class(value_.get_num())); }
Rational Rational::denominator() const { return Rational(mpq_class(value_.get_den())); }
Rational Rational::abs() const { return Rational(mpq_class(::abs(value_))); }

Rational Rational::inverse() const
{
    if (is_zero())
        throw UsageError("inverse of zero");
    return Rational(mpq_class(1) / value_);
}

std::string Rational::str() const { return value_.get_str(); }

std::string Rational::fraction_str() const
{
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational& Rational::operator/=(const Rational& o)
{
    if (o.is_zero())
        throw UsageError("division by zero");
    value_ /= o.value_;
    return *this;
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

DeltaRational& DeltaRational::operator+=(const DeltaRational& o)
{
    real += o.real;
    delta += o.delta;
    return *this;
}

DeltaRational& DeltaRational::operator-=(const DeltaRational& o)
{
    real -= o.real;
    delta -= o.delta;
    return *this;
}

DeltaRational& DeltaRational::operator*=(const Rational& c)
{
    real *= c;
    delta *= c;
    return *this;
}

DeltaRational& DeltaRational::operator/=(const Rational& c)
{
    real /= c;
    delta /= c;
    return *this;
}

std::strong_ordering operator<=>(const DeltaRational& a, const DeltaRational& b)
{
    if (auto c = a.real <=> b.real; c != 0)
        return c;
    return a.delta <=> b.delta;
}

std::string DeltaRational::str() const
{
    if (delta.is_zero())
        return real.str();
    return real.str() + " + " + delta.str() + "*eps";
}

std::strong_ordering delta_compare(const DeltaRational& a, const DeltaRational& b) { return a <=> b; }

DeltaRational delta_combine(const DeltaRational& a, const Rational& c, const DeltaRational& b)
{
    return {a.real + c * b.real, a.delta + c * b.delta};
}

Rational concretization_epsilon(const std::vector<std::pair<DeltaRational, DeltaRational>>& ordered_pairs)
{
    // lo <= hi means lo.real < hi.real, or equal reals and lo.delta <= hi.delta.
    // Only the first case can break for large eps: need
    // eps * (lo.delta - hi.delta) <= hi.real - lo.real.
    Rational eps(1);
    for (const auto& [lo, hi] : ordered_pairs) {
        if (lo.real < hi.real && lo.delta > hi.delta) {
            Rational bound = (hi.real - lo.real) / (lo.delta - hi.delta);
            if (bound < eps)
                eps = bound;
        }
    }
    return eps;
}

const DeltaRational& Extended::value() const
{
    if (!is_finite())
        throw UsageError("value() of an infinite cost");
    return value_;
}

std::strong_ordering operator<=>(const Extended& a, const Extended& b)
{
    if (a.kind_ != b.kind_)
        return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    if (a.is_finite())
        return a.value_ <=> b.value_;
    return std::strong_ordering::equal;
}

std::string Extended::str() const
{
    switch (kind_) {
    case Kind::MinusInfinity:
        return "-inf";
    case Kind::PlusInfinity:
        return "+inf";
    case Kind::Finite:
        break;
    }
    return value_.str();
}

} // namespace omt
