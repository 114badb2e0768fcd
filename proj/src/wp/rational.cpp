#include "mathfind/wp/rational.hpp"

#include <cstdio>
#include <limits>

#include "mathfind/error.hpp"

namespace mathfind {

namespace {

WideInt gcd128(WideInt a, WideInt b)
{
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        auto t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits(WideInt v)
{
    return v >= std::numeric_limits<std::int64_t>::min() + 1 &&
           v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d)
{
    *this = make(n, d);
}

Rational Rational::make(WideInt n, WideInt d)
{
    if (d == 0) {
        throw EvalError("division by zero");
    }
    if (d < 0) {
        n = -n;
        d = -d;
    }
    auto g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    if (!fits(n) || !fits(d)) {
        throw EvalError("rational overflow");
    }
    Rational r;
    r.m_num = static_cast<std::int64_t>(n);
    r.m_den = static_cast<std::int64_t>(d);
    return r;
}

Rational Rational::parse(std::string_view text)
{
    auto bad = [&] { return EvalError("not a number: '" + std::string(text) + "'"); };
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        neg = text[i] == '-';
        ++i;
    }
    WideInt n = 0;
    WideInt d = 1;
    bool digits = false;
    bool point = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.' && !point) {
            point = true;
            continue;
        }
        if (c < '0' || c > '9') {
            throw bad();
        }
        digits = true;
        n = n * 10 + (c - '0');
        if (point) {
            d *= 10;
        }
        if (n > std::numeric_limits<std::int64_t>::max() || d > std::numeric_limits<std::int64_t>::max()) {
            throw EvalError("number too large: '" + std::string(text) + "'");
        }
    }
    if (!digits) {
        throw bad();
    }
    return make(neg ? -n : n, d);
}

std::string Rational::str() const
{
    return m_den == 1 ? std::to_string(m_num) : std::to_string(m_num) + "/" + std::to_string(m_den);
}

std::string Rational::decimal() const
{
    if (m_den == 1) {
        return std::to_string(m_num);
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", to_double());
    return buf;
}

Rational Rational::pow(std::int64_t e) const
{
    if (e < 0) {
        return Rational(1) / pow(-e);
    }
    Rational out(1);
    Rational base = *this;
    while (e > 0) {
        if (e & 1) {
            out *= base;
        }
        e >>= 1;
        if (e > 0) {
            base *= base;
        }
    }
    return out;
}

Rational operator+(Rational const& a, Rational const& b)
{
    return Rational::make(static_cast<WideInt>(a.m_num) * b.m_den + static_cast<WideInt>(b.m_num) * a.m_den,
                          static_cast<WideInt>(a.m_den) * b.m_den);
}

Rational operator-(Rational const& a, Rational const& b)
{
    return a + (-b);
}

Rational operator*(Rational const& a, Rational const& b)
{
    return Rational::make(static_cast<WideInt>(a.m_num) * b.m_num,
                          static_cast<WideInt>(a.m_den) * b.m_den);
}

Rational operator/(Rational const& a, Rational const& b)
{
    return Rational::make(static_cast<WideInt>(a.m_num) * b.m_den,
                          static_cast<WideInt>(a.m_den) * b.m_num);
}

Rational Rational::operator-() const
{
    Rational r = *this;
    r.m_num = -r.m_num;
    return r;
}

std::strong_ordering operator<=>(Rational const& a, Rational const& b)
{
    auto l = static_cast<WideInt>(a.m_num) * b.m_den;
    auto r = static_cast<WideInt>(b.m_num) * a.m_den;
    return l <=> r;
}

}  // namespace mathfind
