#include "sumcard/bigint.hpp"
#include "sumcard/rational.hpp"

#include <doctest.h>

#include <random>

using namespace sumcard;

TEST_CASE("bigint arithmetic against 64-bit reference") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        std::int64_t a = static_cast<std::int64_t>(rng() % 2000000) - 1000000;
        std::int64_t b = static_cast<std::int64_t>(rng() % 2000000) - 1000000;
        BigInt A(a), B(b);
        CHECK((A + B).to_string() == std::to_string(a + b));
        CHECK((A - B).to_string() == std::to_string(a - b));
        CHECK((A * B).to_string() == std::to_string(a * b));
        CHECK(cmp(A, B) == (a < b ? -1 : a > b ? 1 : 0));
    }
}

TEST_CASE("bigint multiplication grows past 64 bits") {
    BigInt v(1);
    std::uint64_t ref_mod = 1;
    const std::uint64_t p = 1000000007ull;
    for (int i = 1; i <= 25; ++i) {
        v.mul_u64(static_cast<std::uint64_t>(i));
        ref_mod = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(ref_mod) * static_cast<std::uint64_t>(i)) % p);
    }
    CHECK(v.to_string() == "15511210043330985984000000");  // 25!
    CHECK(v.to_double() == doctest::Approx(1.5511210043330986e25));
    std::uint64_t rem = v.divmod_u64(p);
    CHECK(rem == ref_mod);
}

TEST_CASE("binomial coefficients") {
    CHECK(binomial(4, 2).to_string() == "6");
    CHECK(binomial(4, 0).to_string() == "1");
    CHECK(binomial(3, 5).to_string() == "0");
    CHECK(binomial(60, 30).to_string() == "118264581564861424");
    // large n through the 128-bit path
    unsigned __int128 n = (static_cast<unsigned __int128>(1) << 70);
    BigInt c = binomial(n, 2);
    // C(2^70, 2) = 2^69 * (2^70 - 1)
    BigInt expect = BigInt::from_u128(static_cast<unsigned __int128>(1) << 69) *
                    (BigInt::from_u128(n) - BigInt(1));
    CHECK(c == expect);
}

TEST_CASE("rational normalisation and ordering") {
    Rational a(1, 2), b(2, 4);
    CHECK(a == b);
    CHECK((a + b) == Rational(1));
    CHECK((a * b) == Rational(1, 4));
    CHECK((a - b).is_zero());
    CHECK(Rational(-1, 2) < Rational(1, 3));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(7, 3).to_string() == "7/3");
    CHECK(Rational(1, 3).to_double() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("rational arithmetic against double reference") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        long long an = static_cast<long long>(rng() % 200) - 100;
        long long ad = 1 + static_cast<long long>(rng() % 40);
        long long bn = static_cast<long long>(rng() % 200) - 100;
        long long bd = 1 + static_cast<long long>(rng() % 40);
        Rational a(an, ad), b(bn, bd);
        double da = double(an) / double(ad), db = double(bn) / double(bd);
        CHECK((a + b).to_double() == doctest::Approx(da + db));
        CHECK((a * b).to_double() == doctest::Approx(da * db));
        if (bn != 0) CHECK((a / b).to_double() == doctest::Approx(da / db));
    }
}

TEST_CASE("falling factorial identity over random triples") {
    // C(n-k, m-k) / C(n, m) == (m)_k / (n)_k for 0 < k <= m <= n
    std::mt19937_64 rng(13);
    for (int i = 0; i < 1000; ++i) {
        std::uint64_t n = 1 + rng() % 30;
        std::uint64_t m = 1 + rng() % n;
        std::uint64_t k = 1 + rng() % m;
        Rational lhs(binomial(n - k, m - k), binomial(n, m));
        BigInt fm(1), fn(1);
        for (std::uint64_t i2 = 0; i2 < k; ++i2) {
            fm.mul_u64(m - i2);
            fn.mul_u64(n - i2);
        }
        Rational rhs{fm, fn};
        CHECK(lhs == rhs);
    }
}
