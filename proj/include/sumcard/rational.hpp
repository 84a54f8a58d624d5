#pragma once
// Exact rationals over BigInt. Denominator kept positive, fraction reduced.
// This is the correctness anchor: the estimation formulas are evaluated in
// this type when exact answers are required, and in double otherwise.

#include "sumcard/bigint.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace sumcard {

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(int v) : num_(v), den_(1) {}
    Rational(long long v) : num_(v), den_(1) {}
    Rational(std::uint64_t v) : num_(v), den_(1) {}
    Rational(BigInt n) : num_(std::move(n)), den_(1) {}
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }
    Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

    static Rational from_u128_ratio(unsigned __int128 n, unsigned __int128 d) {
        return Rational(BigInt::from_u128(n), BigInt::from_u128(d));
    }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_negative() const { return num_.is_negative(); }
    int sign() const { return num_.sign(); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw std::domain_error("Rational: division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }
    Rational operator-() const {
        Rational r = *this;
        r.num_ = -r.num_;
        return r;
    }
    Rational& operator+=(const Rational& b) { return *this = *this + b; }
    Rational& operator-=(const Rational& b) { return *this = *this - b; }
    Rational& operator*=(const Rational& b) { return *this = *this * b; }
    Rational& operator/=(const Rational& b) { return *this = *this / b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return cmp(a.num_ * b.den_, b.num_ * a.den_) < 0;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    double to_double() const { return BigInt::ratio_as_double(num_, den_); }

    std::string to_string() const {
        if (den_ == BigInt(1)) return num_.to_string();
        return num_.to_string() + "/" + den_.to_string();
    }

private:
    BigInt num_;
    BigInt den_;

    void normalize() {
        if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
        if (den_.is_negative()) { num_ = -num_; den_ = -den_; }
        if (num_.is_zero()) { den_ = BigInt(1); return; }
        BigInt g = BigInt::gcd(num_, den_);
        if (!(g == BigInt(1))) {
            num_ = divide_exact(num_, g);
            den_ = divide_exact(den_, g);
        }
    }

    // exact division by a known common divisor via binary long division
    static BigInt divide_exact(const BigInt& a, const BigInt& d) {
        // d > 0 and d | a by construction
        bool neg = a.is_negative();
        BigInt x = neg ? -a : a;
        if (d.fits_u64()) {
            std::uint64_t rem = x.divmod_u64(d.as_u64());
            assert(rem == 0);
            (void)rem;
            return neg ? -x : x;
        }
        // shift-and-subtract, quotient assembled bit by bit
        BigInt q(0), r(0);
        std::size_t bits = x.bit_length();
        for (std::size_t i = bits; i-- > 0;) {
            r.shl1();
            if (x.bit(i)) r += BigInt(1);
            q.shl1();
            if (r >= d) { r -= d; q += BigInt(1); }
        }
        assert(r.is_zero());
        return neg ? -q : q;
    }
};

}  // namespace sumcard
