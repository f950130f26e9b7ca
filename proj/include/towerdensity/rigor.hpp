#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "towerdensity/errors.hpp"

namespace towerdensity {

// Convention: every DirectedDecimal states which side of its exact target it
// certifies.  Down values never exceed the target, Up values never fall
// below it; each primitive operation adds at most one unit in the last
// decimal place of one-sided error.
enum class Rounding { Down, Up };

constexpr Rounding opposite(Rounding r) {
    return r == Rounding::Down ? Rounding::Up : Rounding::Down;
}

// value = mantissa * 10^exponent, kept to at most `precision` significant
// decimal digits.  A value that never rounded is exact and certifies both
// directions (e.g. the literal 1 in "1 - x").
class DirectedDecimal {
public:
    DirectedDecimal() = default; // exact zero

    static DirectedDecimal exact_integer(long v, int precision);
    static DirectedDecimal exact_integer(const mpz_class& v, int precision);

    const mpz_class& mantissa() const { return mantissa_; }
    long exponent() const { return exponent_; }
    int precision() const { return precision_; }
    Rounding direction() const { return direction_; }
    bool is_exact() const { return exact_; }
    bool certifies(Rounding r) const { return exact_ || direction_ == r; }
    int sign() const { return sgn(mantissa_); }
    bool is_zero() const { return sign() == 0; }

    mpq_class to_rational() const; // the stored value, exactly

    // Same value re-rounded to a (smaller) precision, in the stored
    // direction; lets callers work with guard digits and round once.
    DirectedDecimal rounded(int precision) const;

    // One unit in the last of `precision` significant digits.
    mpq_class ulp() const;

    // Directed decimal rendering: Down prints a string <= the stored value,
    // Up prints one >= it.  Defaults to the value's own direction, so the
    // printed digits stay certified.
    std::string to_decimal_string(int digits) const;
    std::string to_decimal_string(int digits, Rounding print_direction) const;

    friend DirectedDecimal dd_from_rational(const mpz_class& num, const mpz_class& den,
                                            int precision, Rounding direction);
    friend DirectedDecimal dd_add(const DirectedDecimal&, const DirectedDecimal&, Rounding);
    friend DirectedDecimal dd_sub(const DirectedDecimal&, const DirectedDecimal&, Rounding);
    friend DirectedDecimal dd_mul(const DirectedDecimal&, const DirectedDecimal&, Rounding);
    friend DirectedDecimal dd_div(const DirectedDecimal&, const DirectedDecimal&, Rounding);

private:
    mpz_class mantissa_{0};
    long exponent_ = 0;
    int precision_ = 1;
    Rounding direction_ = Rounding::Down;
    bool exact_ = true;

    void normalize();
};

DirectedDecimal dd_from_rational(const mpz_class& num, const mpz_class& den, int precision,
                                 Rounding direction);

// result_direction states which side the result certifies; operands must
// certify the side the operation needs (subtraction and division flip the
// direction of their second operand).  mul/div/pow are defined for
// nonnegative operands only.
DirectedDecimal dd_add(const DirectedDecimal& a, const DirectedDecimal& b, Rounding result_direction);
DirectedDecimal dd_sub(const DirectedDecimal& a, const DirectedDecimal& b, Rounding result_direction);
DirectedDecimal dd_mul(const DirectedDecimal& a, const DirectedDecimal& b, Rounding result_direction);
DirectedDecimal dd_div(const DirectedDecimal& a, const DirectedDecimal& b, Rounding result_direction);
DirectedDecimal dd_pow_int(const DirectedDecimal& a, unsigned long k, Rounding result_direction);

// sign of a - b, on the stored values
int dd_cmp(const DirectedDecimal& a, const DirectedDecimal& b);

// Leading significant decimal digits shared by a and b (0 if their leading
// digit positions differ).
int shared_significant_digits(const DirectedDecimal& a, const DirectedDecimal& b, int max_digits);

// low <= zeta(s) <= high
struct ZetaEnclosure {
    long s = 0;
    long terms = 0;
    DirectedDecimal low;  // direction Down
    DirectedDecimal high; // direction Up
};

// Partial sum of M terms plus integral tail bounds
//   sum_{n<=M} n^-s + (M+1)^(1-s)/(s-1)  <=  zeta(s)  <=  sum_{n<=M} n^-s + M^(1-s)/(s-1),
// clamped to the elementary bounds below.  Width ~ M^-s plus rounding slack.
ZetaEnclosure zeta_enclosure(long s, long terms, int precision);

// Euler-Maclaurin refinement of the same partial sum; the remainder after
// the last correction term is bounded by the first omitted term (x^-s is
// completely monotone), taken on the appropriate side.  Width at the
// default M = 1e5 is far below 128-digit working precision.
ZetaEnclosure zeta_enclosure_euler_maclaurin(long s, long terms, int precision);

// 1 + 2^-s <= zeta(s) <= 1 + (s+1)/(2^s (s-1)), valid for real s > 1.
std::pair<DirectedDecimal, DirectedDecimal> elementary_zeta_bounds(long s, int precision);

// Exact Bernoulli number B_n (B_1 = -1/2 convention); cached.
mpq_class bernoulli(unsigned n);

} // namespace towerdensity
