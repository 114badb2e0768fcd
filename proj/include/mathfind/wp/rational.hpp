#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace mathfind {

__extension__ typedef __int128 WideInt;

/// Exact fraction with 64-bit parts, always reduced with a positive
/// denominator. Overflow and division by zero raise EvalError.
class Rational {
  public:
    Rational() = default;
    Rational(std::int64_t n) : m_num(n) {}  // NOLINT(google-explicit-constructor)
    Rational(std::int64_t n, std::int64_t d);

    /// Integer or decimal literal such as `-12`, `2.5`, `.75`. Throws EvalError.
    [[nodiscard]] static Rational parse(std::string_view text);

    [[nodiscard]] std::int64_t num() const noexcept { return m_num; }
    [[nodiscard]] std::int64_t den() const noexcept { return m_den; }
    [[nodiscard]] bool is_zero() const noexcept { return m_num == 0; }
    [[nodiscard]] bool is_integer() const noexcept { return m_den == 1; }
    [[nodiscard]] double to_double() const noexcept
    {
        return static_cast<double>(m_num) / static_cast<double>(m_den);
    }
    /// `3`, `-1/2`.
    [[nodiscard]] std::string str() const;
    /// `3`, `2.5`, `0.333333333333`.
    [[nodiscard]] std::string decimal() const;

    /// Integer exponent only.
    [[nodiscard]] Rational pow(std::int64_t e) const;

    friend Rational operator+(Rational const& a, Rational const& b);
    friend Rational operator-(Rational const& a, Rational const& b);
    friend Rational operator*(Rational const& a, Rational const& b);
    friend Rational operator/(Rational const& a, Rational const& b);
    Rational operator-() const;
    Rational& operator+=(Rational const& b) { return *this = *this + b; }
    Rational& operator-=(Rational const& b) { return *this = *this - b; }
    Rational& operator*=(Rational const& b) { return *this = *this * b; }
    Rational& operator/=(Rational const& b) { return *this = *this / b; }

    friend bool operator==(Rational const&, Rational const&) = default;
    friend std::strong_ordering operator<=>(Rational const& a, Rational const& b);

  private:
    static Rational make(WideInt n, WideInt d);

    std::int64_t m_num = 0;
    std::int64_t m_den = 1;
};

}  // namespace mathfind
