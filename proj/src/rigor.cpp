#include "towerdensity/rigor.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace towerdensity {

namespace {

// Per-thread cache; a deque never moves existing elements on growth, so the
// returned references stay valid across later calls (gmpxx expression
// templates hold them until the whole expression evaluates).
const mpz_class& pow10(long k) {
    thread_local std::deque<mpz_class> cache{1_mpz};
    while (static_cast<long>(cache.size()) <= k) {
        cache.push_back(cache.back() * 10);
    }
    return cache[static_cast<std::size_t>(k)];
}

// exact number of decimal digits of |x|, x != 0
long digits10(const mpz_class& x) {
    std::size_t est = mpz_sizeinbase(x.get_mpz_t(), 10); // exact or one too big
    if (est > 1 && mpz_cmpabs(x.get_mpz_t(), pow10(static_cast<long>(est) - 1).get_mpz_t()) < 0) {
        --est;
    }
    return static_cast<long>(est);
}

// q = round_dir(num / den), den > 0
mpz_class div_directed(const mpz_class& num, const mpz_class& den, Rounding dir, bool* exact_out) {
    mpz_class q, r;
    if (dir == Rounding::Down) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    } else {
        mpz_cdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    }
    if (exact_out) *exact_out = (r == 0);
    return q;
}

} // namespace

void DirectedDecimal::normalize() {
    if (mantissa_ == 0) {
        exponent_ = 0;
        return;
    }
    while (digits10(mantissa_) > precision_) {
        long shift = digits10(mantissa_) - precision_;
        bool exact = false;
        mantissa_ = div_directed(mantissa_, pow10(shift), direction_, &exact);
        if (!exact) exact_ = false;
        exponent_ += shift;
        if (mantissa_ == 0) { // e.g. rounding 0.4 down at too-small precision
            exponent_ = 0;
            return;
        }
    }
    while (mantissa_ != 0 && mpz_divisible_ui_p(mantissa_.get_mpz_t(), 10)) {
        mantissa_ /= 10;
        ++exponent_;
    }
}

DirectedDecimal DirectedDecimal::exact_integer(long v, int precision) {
    return exact_integer(mpz_class(v), precision);
}

DirectedDecimal DirectedDecimal::exact_integer(const mpz_class& v, int precision) {
    if (precision < 1) throw std::invalid_argument("DirectedDecimal: precision must be >= 1");
    DirectedDecimal d;
    d.mantissa_ = v;
    d.exponent_ = 0;
    d.precision_ = precision;
    d.exact_ = true;
    d.normalize();
    if (!d.exact_) throw std::invalid_argument("exact_integer: value does not fit precision");
    return d;
}

mpq_class DirectedDecimal::to_rational() const {
    mpq_class v;
    if (exponent_ >= 0) {
        v = mpq_class(mantissa_ * pow10(exponent_));
    } else {
        v = mpq_class(mantissa_, pow10(-exponent_));
    }
    v.canonicalize();
    return v;
}

DirectedDecimal DirectedDecimal::rounded(int precision) const {
    if (precision < 1) throw std::invalid_argument("rounded: precision must be >= 1");
    DirectedDecimal r = *this;
    r.precision_ = precision;
    r.normalize();
    return r;
}

mpq_class DirectedDecimal::ulp() const {
    if (mantissa_ == 0) return mpq_class(0);
    long top = exponent_ + digits10(mantissa_) - 1;
    long e = top - precision_ + 1;
    if (e >= 0) return mpq_class(pow10(e));
    return mpq_class(1, pow10(-e));
}

DirectedDecimal dd_from_rational(const mpz_class& num, const mpz_class& den, int precision,
                                 Rounding direction) {
    if (den == 0) throw std::invalid_argument("dd_from_rational: zero denominator");
    if (precision < 1) throw std::invalid_argument("dd_from_rational: precision must be >= 1");
    mpz_class n = num, d = den;
    if (d < 0) {
        n = -n;
        d = -d;
    }
    DirectedDecimal r;
    r.precision_ = precision;
    r.direction_ = direction;
    if (n == 0) return r;
    long shift = precision + 1 + digits10(d) - digits10(n);
    bool exact = false;
    if (shift >= 0) {
        r.mantissa_ = div_directed(n * pow10(shift), d, direction, &exact);
    } else {
        r.mantissa_ = div_directed(n, d * pow10(-shift), direction, &exact);
    }
    r.exponent_ = -shift;
    r.exact_ = exact;
    r.normalize();
    return r;
}

namespace {

void require_direction(const DirectedDecimal& v, Rounding needed, const char* op) {
    if (!v.certifies(needed)) {
        throw std::logic_error(std::string(op) + ": operand does not certify the required side");
    }
}

void require_nonnegative(const DirectedDecimal& v, const char* op) {
    if (v.sign() < 0) {
        throw std::logic_error(std::string(op) + ": operand must be nonnegative");
    }
}

} // namespace

DirectedDecimal dd_add(const DirectedDecimal& a, const DirectedDecimal& b, Rounding dir) {
    require_direction(a, dir, "dd_add");
    require_direction(b, dir, "dd_add");
    long e = std::min(a.exponent_, b.exponent_);
    mpz_class m = a.mantissa_ * pow10(a.exponent_ - e) + b.mantissa_ * pow10(b.exponent_ - e);
    DirectedDecimal r;
    r.mantissa_ = std::move(m);
    r.exponent_ = e;
    r.precision_ = std::max(a.precision_, b.precision_);
    r.direction_ = dir;
    r.exact_ = a.exact_ && b.exact_;
    r.normalize();
    return r;
}

DirectedDecimal dd_sub(const DirectedDecimal& a, const DirectedDecimal& b, Rounding dir) {
    require_direction(a, dir, "dd_sub");
    require_direction(b, opposite(dir), "dd_sub");
    long e = std::min(a.exponent_, b.exponent_);
    mpz_class m = a.mantissa_ * pow10(a.exponent_ - e) - b.mantissa_ * pow10(b.exponent_ - e);
    DirectedDecimal r;
    r.mantissa_ = std::move(m);
    r.exponent_ = e;
    r.precision_ = std::max(a.precision_, b.precision_);
    r.direction_ = dir;
    r.exact_ = a.exact_ && b.exact_;
    r.normalize();
    return r;
}

DirectedDecimal dd_mul(const DirectedDecimal& a, const DirectedDecimal& b, Rounding dir) {
    require_direction(a, dir, "dd_mul");
    require_direction(b, dir, "dd_mul");
    require_nonnegative(a, "dd_mul");
    require_nonnegative(b, "dd_mul");
    DirectedDecimal r;
    r.mantissa_ = a.mantissa_ * b.mantissa_;
    r.exponent_ = a.exponent_ + b.exponent_;
    r.precision_ = std::max(a.precision_, b.precision_);
    r.direction_ = dir;
    r.exact_ = a.exact_ && b.exact_;
    r.normalize();
    return r;
}

DirectedDecimal dd_div(const DirectedDecimal& a, const DirectedDecimal& b, Rounding dir) {
    require_direction(a, dir, "dd_div");
    require_direction(b, opposite(dir), "dd_div");
    require_nonnegative(a, "dd_div");
    if (b.sign() <= 0) {
        throw std::logic_error("dd_div: divisor's certified side permits zero");
    }
    int precision = std::max(a.precision_, b.precision_);
    DirectedDecimal r = dd_from_rational(a.mantissa_, b.mantissa_, precision, dir);
    r.exponent_ += a.exponent_ - b.exponent_;
    r.exact_ = r.exact_ && a.exact_ && b.exact_;
    r.normalize();
    return r;
}

DirectedDecimal dd_pow_int(const DirectedDecimal& a, unsigned long k, Rounding dir) {
    if (k == 0) return DirectedDecimal::exact_integer(1L, a.precision());
    require_direction(a, dir, "dd_pow_int");
    require_nonnegative(a, "dd_pow_int");
    DirectedDecimal base = a;
    DirectedDecimal result = DirectedDecimal::exact_integer(1L, a.precision());
    while (k) {
        if (k & 1) result = dd_mul(result, base, dir);
        k >>= 1;
        if (k) base = dd_mul(base, base, dir);
    }
    return result;
}

int dd_cmp(const DirectedDecimal& a, const DirectedDecimal& b) {
    long e = std::min(a.exponent(), b.exponent());
    mpz_class am = a.mantissa() * pow10(a.exponent() - e);
    mpz_class bm = b.mantissa() * pow10(b.exponent() - e);
    return cmp(am, bm) < 0 ? -1 : (am == bm ? 0 : 1);
}

std::string DirectedDecimal::to_decimal_string(int digits) const {
    return to_decimal_string(digits, direction_);
}

std::string DirectedDecimal::to_decimal_string(int digits, Rounding print_dir) const {
    if (digits < 1) throw std::invalid_argument("to_decimal_string: digits must be >= 1");
    if (mantissa_ == 0) return "0";
    bool neg = sign() < 0;
    long top = exponent_ + digits10(mantissa_) - 1;
    long target_exp = top - digits + 1;
    long shift = exponent_ - target_exp;
    mpz_class d;
    if (shift >= 0) {
        d = mantissa_ * pow10(shift);
    } else {
        d = div_directed(mantissa_, pow10(-shift), print_dir, nullptr);
    }
    mpz_class mag = abs(d);
    if (mag != 0 && digits10(mag) > digits) { // ceiling carried into a new digit
        d /= 10; // exact: the carry result ends in 0
        ++top;
    }
    mag = abs(d);
    std::string ds = mag.get_str();
    while (static_cast<long>(ds.size()) < digits) ds.insert(ds.begin(), '0'); // value rounded to 0.0...
    std::string out;
    if (target_exp >= 0 && top >= digits - 1) {
        out = ds + std::string(static_cast<std::size_t>(top - digits + 1), '0');
    } else if (top >= 0) {
        out = ds.substr(0, static_cast<std::size_t>(top + 1)) + "." +
              ds.substr(static_cast<std::size_t>(top + 1));
    } else {
        out = "0." + std::string(static_cast<std::size_t>(-top - 1), '0') + ds;
    }
    return neg ? "-" + out : out;
}

int shared_significant_digits(const DirectedDecimal& a, const DirectedDecimal& b, int max_digits) {
    if (a.sign() <= 0 || b.sign() <= 0) return 0;
    std::string sa = a.to_decimal_string(max_digits, Rounding::Down);
    std::string sb = b.to_decimal_string(max_digits, Rounding::Down);
    if (sa.size() != sb.size()) return 0;
    int n = 0;
    bool significant = false;
    for (std::size_t i = 0; i < sa.size(); ++i) {
        if (sa[i] != sb[i]) break;
        if (sa[i] >= '1' && sa[i] <= '9') significant = true;
        if (significant && sa[i] != '.') ++n;
    }
    return n;
}

// ---------------------------------------------------------------------------
// zeta enclosures
// ---------------------------------------------------------------------------

mpq_class bernoulli(unsigned n) {
    static std::mutex mu;
    static std::vector<mpq_class> cache{mpq_class(1), mpq_class(-1, 2)};
    std::lock_guard<std::mutex> lock(mu);
    while (cache.size() <= n) {
        unsigned m = static_cast<unsigned>(cache.size());
        // sum_{j<m} C(m+1, j) B_j = 0
        mpq_class s(0);
        for (unsigned j = 0; j < m; ++j) {
            if (cache[j] == 0) continue;
            mpz_class binom;
            mpz_bin_uiui(binom.get_mpz_t(), m + 1, j);
            s += mpq_class(binom) * cache[j];
        }
        s /= -static_cast<long>(m + 1);
        s.canonicalize();
        cache.push_back(s);
    }
    return cache[n];
}

namespace {

struct ScaledSums {
    mpz_class low;  // units of 10^-G, floor-accumulated
    mpz_class high; // units of 10^-G, ceil-accumulated
};

void accumulate(ScaledSums& acc, const mpz_class& num, const mpz_class& den) {
    acc.low += div_directed(num, den, Rounding::Down, nullptr);
    acc.high += div_directed(num, den, Rounding::Up, nullptr);
}

// sum_{n=first}^{last} n^-s in units of 10^-G; terms below one unit are
// bounded wholesale (0 from below, one unit each from above).
void partial_sum(ScaledSums& acc, long first, long last, long s, const mpz_class& scale) {
    mpz_class ns;
    for (long n = first; n <= last; ++n) {
        mpz_ui_pow_ui(ns.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(s));
        if (ns > scale) {
            acc.high += (last - n + 1);
            return;
        }
        accumulate(acc, scale, ns);
    }
}

ZetaEnclosure finish(long s, long terms, int precision, const ScaledSums& acc, const mpz_class& scale) {
    ZetaEnclosure z;
    z.s = s;
    z.terms = terms;
    z.low = dd_from_rational(acc.low, scale, precision, Rounding::Down);
    z.high = dd_from_rational(acc.high, scale, precision, Rounding::Up);
    return z;
}

void validate_zeta_args(long s, long terms) {
    if (s < 2) throw std::invalid_argument("zeta enclosure requires s >= 2");
    if (terms < 2) throw std::invalid_argument("zeta enclosure requires terms >= 2");
    if (terms > 100'000'000) throw CapacityError("zeta terms exceed 1e8");
}

} // namespace

std::pair<DirectedDecimal, DirectedDecimal> elementary_zeta_bounds(long s, int precision) {
    if (s < 2) throw std::invalid_argument("elementary_zeta_bounds requires s >= 2");
    mpz_class p2;
    mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(s));
    DirectedDecimal low = dd_from_rational(p2 + 1, p2, precision, Rounding::Down);
    mpz_class den = p2 * (s - 1);
    DirectedDecimal high = dd_from_rational(den + s + 1, den, precision, Rounding::Up);
    return {low, high};
}

ZetaEnclosure zeta_enclosure(long s, long terms, int precision) {
    validate_zeta_args(s, terms);
    long g = precision + 12;
    const mpz_class& scale = pow10(g);
    ScaledSums acc;
    partial_sum(acc, 1, terms, s, scale);
    // integral tail: (M+1)^(1-s)/(s-1) <= sum_{n>M} n^-s <= M^(1-s)/(s-1)
    mpz_class m_pow, m1_pow;
    mpz_ui_pow_ui(m_pow.get_mpz_t(), static_cast<unsigned long>(terms),
                  static_cast<unsigned long>(s - 1));
    mpz_ui_pow_ui(m1_pow.get_mpz_t(), static_cast<unsigned long>(terms + 1),
                  static_cast<unsigned long>(s - 1));
    acc.low += div_directed(scale, m1_pow * (s - 1), Rounding::Down, nullptr);
    acc.high += div_directed(scale, m_pow * (s - 1), Rounding::Up, nullptr);
    ZetaEnclosure z = finish(s, terms, precision, acc, scale);
    auto [elem_low, elem_high] = elementary_zeta_bounds(s, precision);
    if (dd_cmp(z.low, elem_low) < 0) z.low = elem_low;
    if (dd_cmp(z.high, elem_high) > 0) z.high = elem_high;
    return z;
}

ZetaEnclosure zeta_enclosure_euler_maclaurin(long s, long terms, int precision) {
    validate_zeta_args(s, terms);
    long g = precision + 12;
    const mpz_class& scale = pow10(g);
    const long m = terms;
    ScaledSums acc;
    partial_sum(acc, 1, m - 1, s, scale);

    mpz_class m_pow; // M^(s-1)
    mpz_ui_pow_ui(m_pow.get_mpz_t(), static_cast<unsigned long>(m),
                  static_cast<unsigned long>(s - 1));
    accumulate(acc, scale, m_pow * (s - 1)); // M^(1-s)/(s-1)
    accumulate(acc, scale, m_pow * m * 2);   // M^-s / 2

    // correction terms t_k = B_2k/(2k)! * s(s+1)...(s+2k-2) * M^(1-s-2k);
    // stop once |t| drops below one unit or stops shrinking, then charge the
    // first omitted term as the remainder on its own side.
    mpz_class rising(s);               // s (s+1) ... (s + 2k - 2)
    mpz_class m_pow_k = m_pow * m * m; // M^(s + 2k - 1)
    mpz_class fact(2);                 // (2k)!
    mpq_class prev_abs(0);
    for (unsigned k = 1;; ++k) {
        if (k > 1) {
            rising *= (s + 2 * (static_cast<long>(k) - 1) - 1);
            rising *= (s + 2 * (static_cast<long>(k) - 1));
            m_pow_k *= static_cast<unsigned long>(m);
            m_pow_k *= static_cast<unsigned long>(m);
            fact *= (2 * k - 1);
            fact *= (2 * k);
        }
        mpq_class b = bernoulli(2 * k);
        mpz_class num = b.get_num() * rising * scale;
        mpz_class den = b.get_den() * fact * m_pow_k;
        mpq_class t_abs(abs(num), den);
        t_abs.canonicalize();
        bool below_unit = abs(num) < den;
        bool growing = (k > 1 && t_abs >= prev_abs);
        if (below_unit || growing || k > 500) {
            // remainder R lies between 0 and this first omitted term
            if (num > 0) {
                acc.high += div_directed(num, den, Rounding::Up, nullptr);
            } else if (num < 0) {
                acc.low += div_directed(num, den, Rounding::Down, nullptr);
            }
            break;
        }
        accumulate(acc, num, den);
        prev_abs = t_abs;
    }
    return finish(s, m, precision, acc, scale);
}

} // namespace towerdensity
