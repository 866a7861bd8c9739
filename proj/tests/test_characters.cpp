#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "tlw/characters.hpp"
#include "tlw/errors.hpp"

using namespace tlw;
using Elem = FiniteField::Elem;

namespace {

TruncatedElement random_unit(const Tower& t, FieldId k, std::mt19937_64& rng) {
    const Elem g = t.residue_generator(k);
    const auto u0 = t.amb().pow(g, static_cast<std::int64_t>(rng() % t.residue_units(k)));
    const auto w = t.amb().pow(g, static_cast<std::int64_t>(rng() % t.residue_units(k)));
    return t.constant(k, u0, 3) * (t.one(k, 3) + t.constant(k, w, 3) * t.uniformizer(k, 3));
}

}  // namespace

TEST_SUITE("characters") {

TEST_CASE("values on uniformizers and residue units") {
    const auto t = Tower::build(3, 3, 2, 1);
    const MultChar eta = unramified_char(FieldId::L, QZ(1, 2));
    CHECK(evaluate(*t, eta, t->uniformizer(FieldId::L, 3)) == QZ(1, 2));
    CHECK(evaluate(*t, eta, t->one(FieldId::L, 3)) == QZ());

    const MultChar chi = make_char(*t, FieldId::L, QZ(), 1);
    const Elem g10 = t->amb().pow(t->residue_generator(FieldId::L), 10);
    CHECK(evaluate(*t, chi, t->constant(FieldId::L, g10, 3)) == QZ(1, 8));
    CHECK(unit_value(*t, chi, g10, 0) == QZ(1, 8));
}

TEST_CASE("wild part of a conductor-2 character") {
    const auto t = Tower::build(3, 3, 2, 2);
    const MultChar mu = make_char(*t, FieldId::E, QZ(), 0, Elem{1});
    CHECK(mu.conductor() == 2);
    const auto x = t->one(FieldId::E, 3) + t->uniformizer(FieldId::E, 3);
    CHECK(evaluate(*t, mu, x) == QZ(1, 3));
    CHECK(unit_value(*t, mu, 1, 1) == QZ(1, 3));
    CHECK(unit_value(*t, mu, 1, t->amb().neg(1)) == QZ(2, 3));
}

TEST_CASE("group operations agree with pointwise values") {
    std::mt19937_64 rng(7);
    for (std::uint32_t e : {1u, 2u}) {
        const auto t = Tower::build(3, 3, 2, e);
        for (FieldId k : {FieldId::F, FieldId::E, FieldId::L}) {
            const Elem g = t->residue_generator(k);
            for (int trial = 0; trial < 20; ++trial) {
                const auto units = static_cast<std::int64_t>(t->residue_units(k));
                const MultChar x = make_char(*t, k, QZ(static_cast<std::int64_t>(rng() % 4), 4),
                                             static_cast<std::int64_t>(rng()) % units,
                                             t->amb().pow(g, static_cast<std::int64_t>(rng() % units)));
                const MultChar y = make_char(*t, k, QZ(1, 3), static_cast<std::int64_t>(rng() % units));
                const auto u = random_unit(*t, k, rng) * t->uniformizer(k, 3);
                CHECK(evaluate(*t, multiply(*t, x, y), u) == evaluate(*t, x, u) + evaluate(*t, y, u));
                CHECK(evaluate(*t, inverse(*t, x), u) == -evaluate(*t, x, u));
                CHECK(evaluate(*t, power(*t, x, 5), u) == evaluate(*t, x, u).times(5));
            }
        }
    }
}

TEST_CASE("restriction and composition with the norm") {
    const auto t = Tower::build(3, 3, 2, 1);
    for (std::int64_t a = 0; a < 80; ++a) {
        const MultChar chi = make_char(*t, FieldId::L, QZ(1, 4), a);
        const MultChar r = restrict_char(*t, chi, FieldId::L0);
        CHECK(r.a == static_cast<std::uint64_t>(a % 8));
        CHECK(r.pi_value == QZ(1, 4));
    }
    for (std::int64_t b = 0; b < 2; ++b) {
        const MultChar alpha = make_char(*t, FieldId::F, QZ(1, 3), b);
        const MultChar up = compose_with_norm(*t, alpha, FieldId::L0);
        CHECK(up.a == static_cast<std::uint64_t>(4 * b % 8));
        CHECK(up.pi_value == QZ(2, 3));
    }
    std::mt19937_64 rng(11);
    const MultChar mu = make_char(*t, FieldId::E, QZ(1, 5), 3, t->amb().pow(t->residue_generator(FieldId::E), 2));
    const MultChar up = compose_with_norm(*t, mu, FieldId::L);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = random_unit(*t, FieldId::L, rng);
        CHECK(evaluate(*t, up, x) == evaluate(*t, mu, t->norm(x, FieldId::E)));
    }
}

TEST_CASE("Frobenius conjugation multiplies the tame exponent by q") {
    const auto t = Tower::build(3, 3, 2, 1);
    const MultChar chi = make_char(*t, FieldId::L, QZ(), 7);
    const MultChar c = galois_conjugate(*t, chi, GaloisElt{1, 0});
    CHECK(c.a == 21);
    CHECK(is_regular(*t, chi));
    CHECK(!is_regular(*t, make_char(*t, FieldId::L, QZ(), 10)));
    CHECK(!is_regular(*t, trivial_char(FieldId::L)));
    // 80 units, orbits of size 4 among the 72 regular exponents
    CHECK(enumerate_admissible_pairs(*t, 1).size() == 18);
}

TEST_CASE("quadratic characters attached to E/F") {
    const auto u = Tower::build(3, 3, 2, 1);
    const MultChar w = omega_quadratic(*u, FieldId::F, FieldId::E);
    CHECK(w == unramified_char(FieldId::F, QZ(1, 2)));
    CHECK(evaluate(*u, w, u->constant(FieldId::F, u->amb().neg(1), 3)) == QZ());

    const auto r = Tower::build(3, 3, 2, 2);
    const MultChar wr = omega_quadratic(*r, FieldId::F, FieldId::E);
    CHECK(evaluate(*r, wr, r->constant(FieldId::F, r->amb().neg(1), 3)) == QZ(1, 2));
    for (const auto& t : {u, r})
        CHECK(compose_with_norm(*t, omega_quadratic(*t, FieldId::F, FieldId::E), FieldId::E) ==
              trivial_char(FieldId::E));
    CHECK(galois_characters(*r, FieldId::F, FieldId::E).size() == 2);
}

TEST_CASE("json round trip") {
    const auto t = Tower::build(3, 3, 2, 2);
    const MultChar mu = make_char(*t, FieldId::E, QZ(3, 4), 1, Elem{2});
    CHECK(char_from_json(*t, to_json(*t, mu)) == mu);
    CHECK(!to_string(*t, mu).empty());
}

TEST_CASE("character_from_values recovers a character and rejects deep conductor") {
    const auto t = Tower::build(3, 3, 2, 1);
    const MultChar mu = make_char(*t, FieldId::E, QZ(1, 6), 5, t->residue_generator(FieldId::E));
    const MultChar back = character_from_values(*t, FieldId::E, [&](const TruncatedElement& x) { return evaluate(*t, mu, x); });
    CHECK(back == mu);
    CHECK_THROWS_AS(character_from_values(*t, FieldId::E,
                                          [&](const TruncatedElement& x) {
                                              if (x.valuation() != 0 || x.absolute_precision() < 3) return QZ();
                                              return QZ(x.coeff(2) != 0 ? 1 : 0, 3);
                                          }),
                    ConductorCapError);
}

TEST_CASE("additive characters") {
    const auto t = Tower::build(3, 3, 2, 1);
    const AddChar psi = AddChar::standard(t, FieldId::F);
    CHECK(psi.level() == 0);
    CHECK(psi.value(t->uniformizer(FieldId::F, 3).inverse()) == QZ(1, 3));
    CHECK(psi.value(t->one(FieldId::F, 3)) == QZ());
    const AddChar up = psi.lift(FieldId::E);
    const auto d = t->delta(3);
    CHECK(up.value(d * t->uniformizer(FieldId::E, 3).inverse()) == QZ());
    CHECK(psi.inverse().value(t->uniformizer(FieldId::F, 3).inverse()) == QZ(2, 3));
}

}
