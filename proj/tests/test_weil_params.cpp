#include <doctest.h>

#include "tlw/errors.hpp"
#include "tlw/identities.hpp"
#include "tlw/ptb_engine.hpp"
#include "tlw/weil_params.hpp"

using namespace tlw;
using Elem = FiniteField::Elem;

namespace {

bool same_orbit(const Tower& t, const MultChar& a, const MultChar& b) {
    for (const GaloisElt& g : t.galois_group())
        if (galois_conjugate(t, a, g) == b) return true;
    return false;
}

std::vector<MultChar> mu_sample(const Tower& t) { return ptb_mu_characters(t, 2, 2); }

}  // namespace

TEST_SUITE("weil_params") {

TEST_CASE("determinant of an induced character") {
    const auto t = Tower::build(3, 3, 2, 1);
    const MultChar w = omega(*t, FieldId::F, FieldId::L);
    CHECK(det_param(*t, MonomialParam{FieldId::L, trivial_char(FieldId::L)}) == w);
    const auto gf = t->teichmuller(TameUnitClass{FieldId::F, 0, 1}, 3);
    for (const MultChar& chi : enumerate_admissible_pairs(*t, 4)) {
        const MonomialParam phi{FieldId::L, chi};
        CHECK(is_irreducible(*t, phi));
        CHECK(dimension(*t, phi) == 4);
        const MultChar d = det_param(*t, phi);
        CHECK(d == multiply(*t, w, restrict_char(*t, chi, FieldId::F)));
        const FiniteMatrixModel model = build_model(*t, phi);
        CHECK(determinant(model.t_matrix()) == Cyclotomic::from_qz(evaluate(*t, d, gf)));
        CHECK(determinant(model.phi_matrix()) == Cyclotomic::from_qz(evaluate(*t, d, t->uniformizer(FieldId::F, 3))));
    }
}

TEST_CASE("matrix model satisfies the tame relation") {
    const auto t = Tower::build(3, 3, 2, 1);
    const auto chis = enumerate_admissible_pairs(*t, 2);
    for (std::size_t i = 0; i < chis.size(); i += 5) {
        const FiniteMatrixModel model = build_model(*t, {FieldId::L, chis[i]});
        const CycMatrix T = model.t_matrix(), P = model.phi_matrix();
        CycMatrix Tq = T;
        for (int k = 1; k < 3; ++k) Tq = mat_mul(Tq, T);
        CHECK(mat_mul(T, P) == mat_mul(P, Tq));
    }
}

TEST_CASE("tensor with the quadratic induction") {
    for (std::uint32_t e : {1u, 2u}) {
        const auto t = Tower::build(3, 3, 2, e);
        const auto chis = enumerate_admissible_pairs(*t, 2);
        const auto mus = mu_sample(*t);
        for (std::size_t i = 0; i < chis.size(); i += 3)
            for (std::size_t j = 0; j < mus.size(); j += 7) {
                const ParamSum s = tensor_with_quadratic(*t, chis[i], mus[j]);
                CHECK(dimension(*t, s) == 8);
                CHECK(s.parts.size() == (t->ramified() ? 1u : 2u));
                if (!t->ramified()) continue;
                const MultChar core = multiply(*t, compose_with_norm(*t, chis[i], FieldId::M),
                                               inverse(*t, compose_with_norm(*t, mus[j], FieldId::M)));
                const MultChar eta = compose_with_norm(*t, unramified_char(FieldId::L, QZ(1, 2)), FieldId::M);
                CHECK(s.parts[0].chi == multiply(*t, eta, core));
                if (restriction_matches({t, chis[i], mus[j], 0}))
                    CHECK(restrict_char(*t, core, FieldId::L2) == trivial_char(FieldId::L2));
            }
    }
    const auto u = Tower::build(3, 3, 2, 1);
    for (const MultChar& chi : enumerate_admissible_pairs(*u, 2)) {
        const ParamSum s = tensor_with_quadratic(*u, chi, trivial_char(FieldId::E));
        REQUIRE(s.parts.size() == 2);
        CHECK(s.parts[0].field == FieldId::L);
        const MultChar shifted = multiply(*u, unramified_char(FieldId::L, QZ(1, 2)), chi);
        CHECK(same_orbit(*u, s.parts[0].chi, shifted));
        CHECK(same_orbit(*u, s.parts[1].chi, shifted));
    }
}

TEST_CASE("Mackey decomposition matches the Kronecker product") {
    const auto t = Tower::build(3, 3, 2, 1);
    const auto chis = enumerate_admissible_pairs(*t, 2);
    const auto mus = enumerate_tame(*t, FieldId::E, 2);
    for (std::size_t i = 0; i < chis.size(); i += 4)
        for (std::size_t j = 0; j < mus.size(); j += 3) CHECK(mackey_consistent(*t, chis[i], mus[j]));
}

TEST_CASE("self-duality examples at q = 3, m = 2") {
    const auto t = Tower::build(3, 3, 2, 1);
    const MultChar one = trivial_char(FieldId::F);
    auto both = [&](std::int64_t a, QZ pi) {
        const MonomialParam phi{FieldId::L, make_char(*t, FieldId::L, pi, a)};
        const SelfDuality s = classify_selfduality(*t, phi, one);
        CHECK(classify_selfduality_bruteforce(*t, phi, one).type == s);
        return s;
    };
    CHECK(both(8, QZ()) == SelfDuality::orthogonal);
    CHECK(both(8, QZ(1, 2)) == SelfDuality::symplectic);
    CHECK(both(8, QZ(1, 4)) == SelfDuality::not_selfdual);
    CHECK(both(1, QZ()) == SelfDuality::not_selfdual);
    // exponent 4 on k_{L0}^*: eta_{L/L0} is unramified, so this is not the symplectic branch
    CHECK(both(4, QZ()) == SelfDuality::not_selfdual);
    CHECK(both(4, QZ(1, 2)) == SelfDuality::not_selfdual);
    CHECK(det_param(*t, {FieldId::L, make_char(*t, FieldId::L, QZ(1, 2), 8)}) == power(*t, one, 2));
}

TEST_CASE("brute-force forms: one-dimensional and of a single type") {
    const auto t = Tower::build(3, 3, 2, 1);
    const auto alphas = enumerate_tame(*t, FieldId::F, 2);
    const auto chis = enumerate_admissible_pairs(*t, 2);
    for (std::size_t i = 0; i < chis.size(); i += 2)
        for (const MultChar& alpha : alphas) {
            const MonomialParam phi{FieldId::L, chis[i]};
            const auto b = classify_selfduality_bruteforce(*t, phi, alpha);
            CHECK(b.dim_total <= 1);
            CHECK(!(b.dim_symmetric && b.dim_alternating));
            CHECK((b.type == SelfDuality::not_selfdual) == (b.dim_total == 0));
            CHECK(b.type == classify_selfduality(*t, phi, alpha));
            if (b.type == SelfDuality::symplectic) CHECK(det_param(*t, phi) == power(*t, alpha, 2));
        }
}

TEST_CASE("root numbers of induced parameters") {
    const auto t = Tower::build(3, 3, 2, 1);
    for (std::int64_t level : {-1, 0, 1}) {
        const EpsilonContext ctx(t, psi_with_level(t, level));
        CHECK(epsilon_param(ctx, MonomialParam{FieldId::L, trivial_char(FieldId::L)}) ==
              ctx.lambda(FieldId::L) * epsilon_char(trivial_char(FieldId::L), ctx.psi(FieldId::L)));
        const auto chis = enumerate_admissible_pairs(*t, 2);
        for (std::size_t i = 0; i + 1 < chis.size(); i += 3) {
            const MonomialParam a{FieldId::L, chis[i]}, b{FieldId::L, chis[i + 1]};
            const MonomialParam c{FieldId::E, make_char(*t, FieldId::E, QZ(1, 3), static_cast<std::int64_t>(i % 8))};
            CHECK(epsilon_param(ctx, ParamSum{{a, b, c}}) ==
                  epsilon_param(ctx, a) * epsilon_param(ctx, b) * epsilon_param(ctx, c));

            const MultChar nu = unramified_char(FieldId::F, QZ(1, 6));
            const MonomialParam twisted{FieldId::L, multiply(*t, chis[i], compose_with_norm(*t, nu, FieldId::L))};
            const std::int64_t dim = 4, cond = dim * chis[i].conductor();
            CHECK(epsilon_param(ctx, twisted) ==
                  epsilon_param(ctx, a) * EpsilonValue::root(QZ(1, 6).times(-level * dim + cond), 3));
        }
    }
}

}
