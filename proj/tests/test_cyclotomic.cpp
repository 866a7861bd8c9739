#include <doctest.h>

#include <array>
#include <cmath>

#include "tlw/cyclotomic.hpp"

using namespace tlw;

TEST_SUITE("cyclotomic") {

TEST_CASE("exact arithmetic in Q(zeta_N)") {
    CHECK(euler_phi(12) == 4);
    CHECK(cyclotomic_polynomial(6) == std::vector<std::int64_t>{1, -1, 1});
    Cyclotomic s;
    for (int i = 0; i < 5; ++i) s += Cyclotomic::root(i, 5);
    CHECK(s.is_zero());
    CHECK(Cyclotomic::root(1, 4) * Cyclotomic::root(1, 4) == Cyclotomic::from_int(-1));
    CHECK(Cyclotomic::root(2, 6) == Cyclotomic::root(1, 3));
    CHECK(Cyclotomic::root(1, 3).lift(12) == Cyclotomic::root(4, 12));
    const std::array<std::int64_t, 3> counts{2, 1, 1};
    CHECK(Cyclotomic::from_group_ring(counts) == Cyclotomic::from_int(1));
    const auto x = Cyclotomic::root(1, 7) + Cyclotomic::from_int(3);
    CHECK(x * x.inverse() == Cyclotomic::from_int(1));
    CHECK(x.conj().conj() == x);
    CHECK(std::abs(x.to_complex() - (std::polar(1.0, 2 * M_PI / 7) + 3.0)) < 1e-12);
}

TEST_CASE("square roots of primes and roots of unity") {
    for (std::uint32_t p : {3u, 5u, 7u}) {
        const auto r = Cyclotomic::sqrt_prime(p);
        CHECK(r * r == Cyclotomic::from_int(p));
        CHECK(r.to_complex().real() > 0);
    }
    CHECK(Cyclotomic::root(5, 12).as_root_of_unity() == QZ(5, 12));
    CHECK(!Cyclotomic::from_int(2).as_root_of_unity());
    CHECK((Cyclotomic::root(1, 3) + Cyclotomic::root(2, 3)).rational_value() == -1);
}

TEST_CASE("epsilon values with half-integral powers of p") {
    const EpsilonValue g(Cyclotomic::root(1, 3) - Cyclotomic::root(2, 3), -1, 3);
    CHECK(g.has_unit_modulus());
    CHECK(g.as_root_of_unity() == QZ(1, 4));
    CHECK(g * g == EpsilonValue::root(QZ(1, 2), 3));
    CHECK(g.inverse() * g == EpsilonValue::one(3));
    CHECK(g.pow(4) == EpsilonValue::one(3));
}

}
