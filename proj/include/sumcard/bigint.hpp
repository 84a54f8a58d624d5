#pragma once
// Arbitrary-precision signed integers, sign-magnitude over base-2^32 limbs.
// Covers exact world counts and rational coefficient arithmetic on
// desk-scale inputs; not a general number-theory kit.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sumcard {

class BigInt {
public:
    BigInt() = default;

    BigInt(int v) : BigInt(static_cast<long long>(v)) {}
    BigInt(long v) : BigInt(static_cast<long long>(v)) {}
    BigInt(long long v) {
        neg_ = v < 0;
        unsigned long long u = neg_ ? -static_cast<unsigned long long>(v)
                                    : static_cast<unsigned long long>(v);
        push_u64(u);
    }
    BigInt(unsigned v) : BigInt(static_cast<unsigned long long>(v)) {}
    BigInt(unsigned long v) : BigInt(static_cast<unsigned long long>(v)) {}
    BigInt(unsigned long long v) { push_u64(v); }

    static BigInt from_u128(unsigned __int128 v) {
        BigInt r;
        while (v != 0) {
            r.limbs_.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
            v >>= 32;
        }
        return r;
    }

    bool is_zero() const { return limbs_.empty(); }
    bool is_negative() const { return neg_; }
    int sign() const { return is_zero() ? 0 : (neg_ ? -1 : 1); }

    std::size_t bit_length() const {
        if (limbs_.empty()) return 0;
        std::uint32_t top = limbs_.back();
        std::size_t bits = (limbs_.size() - 1) * 32;
        while (top != 0) { ++bits; top >>= 1; }
        return bits;
    }

    bool bit(std::size_t i) const {
        std::size_t limb = i / 32;
        if (limb >= limbs_.size()) return false;
        return (limbs_[limb] >> (i % 32)) & 1u;
    }

    bool fits_u64() const { return !neg_ && bit_length() <= 64; }
    std::uint64_t as_u64() const {
        assert(fits_u64());
        std::uint64_t v = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) v = (v << 32) | limbs_[i];
        return v;
    }

    friend int cmp(const BigInt& a, const BigInt& b) {
        if (a.neg_ != b.neg_) return a.neg_ ? -1 : 1;
        int m = cmp_mag(a, b);
        return a.neg_ ? -m : m;
    }
    friend bool operator==(const BigInt& a, const BigInt& b) {
        return a.neg_ == b.neg_ && a.limbs_ == b.limbs_;
    }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator<(const BigInt& a, const BigInt& b) { return cmp(a, b) < 0; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return cmp(a, b) <= 0; }
    friend bool operator>(const BigInt& a, const BigInt& b) { return cmp(a, b) > 0; }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return cmp(a, b) >= 0; }

    BigInt operator-() const {
        BigInt r = *this;
        if (!r.is_zero()) r.neg_ = !r.neg_;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.neg_ == b.neg_) {
            BigInt r = add_mag(a, b);
            r.neg_ = a.neg_ && !r.is_zero();
            return r;
        }
        int m = cmp_mag(a, b);
        if (m == 0) return BigInt{};
        const BigInt& big = m > 0 ? a : b;
        const BigInt& small = m > 0 ? b : a;
        BigInt r = sub_mag(big, small);
        r.neg_ = big.neg_ && !r.is_zero();
        return r;
    }
    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.is_zero() || b.is_zero()) return BigInt{};
        BigInt r;
        r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
        for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
            std::uint64_t carry = 0;
            for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
                std::uint64_t cur = static_cast<std::uint64_t>(a.limbs_[i]) * b.limbs_[j] +
                                    r.limbs_[i + j] + carry;
                r.limbs_[i + j] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
            }
            std::size_t k = i + b.limbs_.size();
            while (carry != 0) {
                std::uint64_t cur = r.limbs_[k] + carry;
                r.limbs_[k] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
                ++k;
            }
        }
        r.trim();
        r.neg_ = a.neg_ != b.neg_;
        return r;
    }

    BigInt& operator+=(const BigInt& b) { return *this = *this + b; }
    BigInt& operator-=(const BigInt& b) { return *this = *this - b; }
    BigInt& operator*=(const BigInt& b) { return *this = *this * b; }

    // Quotient digit invariant: remainder < divisor keeps each digit < 2^32.
    std::uint64_t divmod_u64(std::uint64_t d) {
        if (d == 0) throw std::domain_error("BigInt: division by zero");
        unsigned __int128 rem = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            unsigned __int128 cur = (rem << 32) | limbs_[i];
            limbs_[i] = static_cast<std::uint32_t>(cur / d);
            rem = cur % d;
        }
        trim();
        return static_cast<std::uint64_t>(rem);
    }

    BigInt& mul_u64(std::uint64_t f) {
        if (f == 0 || is_zero()) return *this = BigInt{};
        bool n = neg_;
        *this = *this * BigInt(f);
        neg_ = n;
        return *this;
    }

    bool is_even() const { return limbs_.empty() || (limbs_[0] & 1u) == 0; }

    void shr1() {
        std::uint32_t carry = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            std::uint32_t next = limbs_[i] & 1u;
            limbs_[i] = (limbs_[i] >> 1) | (carry << 31);
            carry = next;
        }
        trim();
    }
    void shl1() {
        std::uint32_t carry = 0;
        for (auto& limb : limbs_) {
            std::uint32_t next = limb >> 31;
            limb = (limb << 1) | carry;
            carry = next;
        }
        if (carry) limbs_.push_back(carry);
    }

    static BigInt gcd(BigInt a, BigInt b) {
        a.neg_ = false;
        b.neg_ = false;
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        int shift = 0;
        while (a.is_even() && b.is_even()) { a.shr1(); b.shr1(); ++shift; }
        while (a.is_even()) a.shr1();
        for (;;) {
            while (b.is_even()) b.shr1();
            if (cmp_mag(a, b) > 0) std::swap(a, b);
            b = sub_mag(b, a);
            if (b.is_zero()) break;
        }
        while (shift-- > 0) a.shl1();
        return a;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        BigInt t = *this;
        t.neg_ = false;
        std::string digits;
        while (!t.is_zero()) {
            std::uint64_t chunk = t.divmod_u64(1000000000ull);
            std::string part = std::to_string(chunk);
            if (t.is_zero()) {
                digits.insert(0, part);
            } else {
                digits.insert(0, std::string(9 - part.size(), '0') + part);
            }
        }
        return neg_ ? "-" + digits : digits;
    }

    double to_double() const {
        double m;
        long e;
        top_mantissa(m, e);
        return std::ldexp(m, static_cast<int>(e));
    }

    // a/b as double without overflowing intermediate conversions.
    static double ratio_as_double(const BigInt& a, const BigInt& b) {
        if (b.is_zero()) throw std::domain_error("BigInt: ratio with zero denominator");
        if (a.is_zero()) return 0.0;
        double ma, mb;
        long ea, eb;
        a.top_mantissa(ma, ea);
        b.top_mantissa(mb, eb);
        return std::ldexp(ma / mb, static_cast<int>(ea - eb));
    }

private:
    bool neg_ = false;
    std::vector<std::uint32_t> limbs_;  // little-endian, no trailing zero limbs

    void push_u64(std::uint64_t v) {
        while (v != 0) {
            limbs_.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
            v >>= 32;
        }
    }
    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
        if (limbs_.empty()) neg_ = false;
    }

    static int cmp_mag(const BigInt& a, const BigInt& b) {
        if (a.limbs_.size() != b.limbs_.size())
            return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
        for (std::size_t i = a.limbs_.size(); i-- > 0;) {
            if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
        }
        return 0;
    }

    static BigInt add_mag(const BigInt& a, const BigInt& b) {
        BigInt r;
        const auto& x = a.limbs_.size() >= b.limbs_.size() ? a.limbs_ : b.limbs_;
        const auto& y = a.limbs_.size() >= b.limbs_.size() ? b.limbs_ : a.limbs_;
        r.limbs_.reserve(x.size() + 1);
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            std::uint64_t cur = carry + x[i] + (i < y.size() ? y[i] : 0u);
            r.limbs_.push_back(static_cast<std::uint32_t>(cur));
            carry = cur >> 32;
        }
        if (carry) r.limbs_.push_back(static_cast<std::uint32_t>(carry));
        return r;
    }

    // requires |a| >= |b|
    static BigInt sub_mag(const BigInt& a, const BigInt& b) {
        BigInt r;
        r.limbs_.reserve(a.limbs_.size());
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
            std::int64_t cur = static_cast<std::int64_t>(a.limbs_[i]) - borrow -
                               (i < b.limbs_.size() ? b.limbs_[i] : 0u);
            borrow = cur < 0;
            if (cur < 0) cur += (std::int64_t{1} << 32);
            r.limbs_.push_back(static_cast<std::uint32_t>(cur));
        }
        assert(borrow == 0);
        r.trim();
        return r;
    }

    // value = m * 2^e with m in [0.5, 1), by sign
    void top_mantissa(double& m, long& e) const {
        if (is_zero()) { m = 0.0; e = 0; return; }
        std::size_t bits = bit_length();
        std::uint64_t top = 0;
        int take = static_cast<int>(bits < 64 ? bits : 64);
        for (int k = 0; k < take; ++k) {
            std::size_t pos = bits - 1 - static_cast<std::size_t>(k);
            std::uint32_t limb = limbs_[pos / 32];
            std::uint64_t bit = (limb >> (pos % 32)) & 1u;
            top = (top << 1) | bit;
        }
        m = std::ldexp(static_cast<double>(top), -take);
        if (neg_) m = -m;
        e = static_cast<long>(bits);
    }
};

// C(n, k), exact. Steps divide exactly because every prefix is a binomial.
inline BigInt binomial(unsigned __int128 n, std::uint64_t k) {
    if (k > n) return BigInt{};
    if (k > n - k) k = static_cast<std::uint64_t>(n - k);
    BigInt c(1);
    for (std::uint64_t i = 1; i <= k; ++i) {
        unsigned __int128 f = n - k + i;
        std::uint64_t lo = static_cast<std::uint64_t>(f);
        std::uint64_t hi = static_cast<std::uint64_t>(f >> 64);
        if (hi == 0) {
            c.mul_u64(lo);
        } else {
            c = c * BigInt::from_u128(f);
        }
        std::uint64_t rem = c.divmod_u64(i);
        assert(rem == 0);
        (void)rem;
    }
    return c;
}

}  // namespace sumcard
