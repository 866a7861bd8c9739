#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracle.hpp"
#include "tlw/epsilon.hpp"
#include "tlw/errors.hpp"
#include "tlw/identities.hpp"

using namespace tlw;
using Elem = FiniteField::Elem;

namespace {

// Absolute trace k_K -> F_p by summing Frobenius powers with the oracle.
std::uint32_t oracle_trace(const oracle::PolyField& o, Elem x, std::uint32_t deg) {
    Elem s = 0, y = x;
    for (std::uint32_t i = 0; i < deg; ++i) s = o.add(s, y), y = o.pow(y, o.p);
    CHECK(s < o.p);
    return s;
}

std::complex<double> oracle_gauss(const Tower& t, FieldId k, std::uint64_t a, Elem b) {
    const oracle::PolyField o(t.amb());
    const std::uint64_t units = t.residue_units(k);
    const Elem g = t.residue_generator(k);
    std::complex<double> s = 0;
    Elem x = 1;
    for (std::uint64_t i = 0; i < units; ++i, x = o.mul(x, g)) {
        const auto tr = oracle_trace(o, o.mul(b, x), t.residue_prime_degree(k));
        s += oracle::root(QZ(static_cast<std::int64_t>(a * i % units), static_cast<std::int64_t>(units))) *
             oracle::root(QZ(tr, t.p()));
    }
    return s;
}

bool close(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) < 1e-9; }

}  // namespace

TEST_SUITE("epsilon") {

TEST_CASE("quadratic Gauss sum over F_3") {
    const auto t = Tower::build(3, 3, 2, 1);
    const Cyclotomic g = gauss_sum(*t, FieldId::F, 1, 1);
    CHECK(g == Cyclotomic::root(1, 3) - Cyclotomic::root(2, 3));
    CHECK(gauss_sum(*t, FieldId::F, 0, 1) == Cyclotomic::from_int(-1));
    CHECK((g * g.conj()) == Cyclotomic::from_int(3));
    CHECK_THROWS(gauss_sum(*t, FieldId::F, 1, 0));
}

TEST_CASE("Gauss sums agree with direct summation") {
    const auto t = Tower::build(3, 3, 2, 1);
    std::mt19937_64 rng(3);
    for (FieldId k : {FieldId::E, FieldId::L}) {
        const std::uint64_t units = t->residue_units(k);
        for (int trial = 0; trial < 12; ++trial) {
            const std::uint64_t a = rng() % units;
            const Elem b = t->amb().pow(t->residue_generator(k), static_cast<std::int64_t>(rng() % units));
            const Cyclotomic g = gauss_sum(*t, k, a, b);
            CHECK(close(g.to_complex(), oracle_gauss(*t, k, a, b)));
            if (a != 0) CHECK((g * g.conj()) == Cyclotomic::from_int(static_cast<std::int64_t>(units + 1)));
        }
    }
}

TEST_CASE("tame root numbers agree with direct summation at every level") {
    const auto t = Tower::build(3, 3, 2, 1);
    const oracle::PolyField o(t->amb());
    for (std::int64_t level : {-1, 0, 1})
        for (FieldId k : {FieldId::F, FieldId::E}) {
            const AddChar psi = psi_with_level(t, level).lift(k);
            const std::int64_t units = static_cast<std::int64_t>(t->residue_units(k));
            for (std::int64_t a = 1; a < units; ++a) {
                const MultChar chi = make_char(*t, k, QZ(1, 4), a);
                const std::int64_t kk = 1 - level;
                std::complex<double> s = 0;
                Elem u = 1;
                for (std::int64_t i = 0; i < units; ++i, u = o.mul(u, t->residue_generator(k))) {
                    const QZ inv = QZ(1, 4).times(kk) - QZ(a * i % units, units);
                    s += oracle::root(inv) * oracle::root(QZ(oracle_trace(o, u, t->residue_prime_degree(k)), 3));
                }
                s /= std::sqrt(static_cast<double>(units + 1));
                CHECK(close(epsilon_char(chi, psi).to_complex(), s));
            }
        }
}

TEST_CASE("unramified characters") {
    const auto t = Tower::build(3, 3, 2, 1);
    for (std::int64_t level : {-1, 0, 2}) {
        const AddChar psi = psi_with_level(t, level);
        CHECK(psi.level() == level);
        CHECK(epsilon_char(trivial_char(FieldId::F), psi) == EpsilonValue::one(3));
        const MultChar chi = unramified_char(FieldId::F, QZ(1, 5));
        CHECK(epsilon_char(chi, psi) == EpsilonValue::root(QZ(1, 5).times(-level), 3));
    }
}

TEST_CASE("root numbers: twisting psi, duality, unit modulus") {
    std::mt19937_64 rng(5);
    for (std::uint32_t e : {1u, 2u}) {
        const auto t = Tower::build(3, 3, 2, e);
        for (FieldId k : {FieldId::F, FieldId::E}) {
            const AddChar psi = AddChar::standard(t, FieldId::F).lift(k);
            const auto units = static_cast<std::int64_t>(t->residue_units(k));
            const Elem g = t->residue_generator(k);
            for (int trial = 0; trial < 40; ++trial) {
                const std::optional<Elem> beta =
                    trial % 2 ? std::optional<Elem>(t->amb().pow(g, static_cast<std::int64_t>(rng() % units)))
                              : std::nullopt;
                const MultChar chi =
                    make_char(*t, k, QZ(static_cast<std::int64_t>(rng() % 6), 6), static_cast<std::int64_t>(rng() % units), beta);
                const EpsilonValue eps = epsilon_char(chi, psi);
                CHECK(eps.has_unit_modulus());

                const auto a = t->constant(k, t->amb().pow(g, static_cast<std::int64_t>(rng() % units)), 4) *
                               t->uniformizer(k, 4).pow(static_cast<std::int64_t>(rng() % 3) - 1) *
                               (t->one(k, 4) + t->constant(k, t->amb().pow(g, static_cast<std::int64_t>(rng() % units)), 4) *
                                                   t->uniformizer(k, 4));
                CHECK(epsilon_char(chi, psi.twisted(a)) == eps * EpsilonValue::root(evaluate(*t, chi, a), 3));

                const QZ sign = evaluate(*t, chi, t->constant(k, t->amb().neg(1), 3));
                CHECK(eps * epsilon_char(inverse(*t, chi), psi) == EpsilonValue::root(sign, 3));
            }
        }
    }
}

TEST_CASE("lambda constants") {
    const auto u = Tower::build(3, 3, 2, 1);
    CHECK(lambda_constant(FieldId::E, psi_with_level(u, 0)) == EpsilonValue::one(3));
    CHECK(lambda_constant(FieldId::E, psi_with_level(u, 1)) == EpsilonValue::root(QZ(1, 2), 3));

    const auto r = Tower::build(3, 3, 2, 2);
    for (std::int64_t level : {-1, 0, 1}) {
        const AddChar psi = psi_with_level(r, level);
        const EpsilonValue l = lambda_constant(FieldId::E, psi);
        // omega_{E/F}(-1) = -1 at q = 3
        CHECK(l * l == EpsilonValue::root(QZ(1, 2), 3));
        for (const auto& t : {u, r}) {
            const AddChar pf = psi_with_level(t, level);
            const FieldId top = t->ramified() ? FieldId::M : FieldId::L;
            const EpsilonValue whole = lambda_constant(top, pf);
            const EpsilonValue split = lambda_constant(top, pf.lift(FieldId::E)) *
                                       lambda_constant(FieldId::E, pf).pow(t->degree(FieldId::E, top));
            CHECK(whole == split);
        }
    }
}

TEST_CASE("trace zero element") {
    for (std::uint32_t e : {1u, 2u}) {
        const auto t = Tower::build(3, 3, 2, e);
        const auto d = trace_zero_element(*t, FieldId::L0, FieldId::L);
        CHECK(!d.is_zero());
        CHECK(t->trace(d, FieldId::L0).is_zero());
    }
}

}
