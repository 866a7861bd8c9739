#include <doctest.h>

#include <functional>
#include <optional>

#include "tlw/errors.hpp"
#include "tlw/identities.hpp"
#include "tlw/ptb_engine.hpp"

using namespace tlw;

namespace {

std::optional<PtbCase> find_case(const TowerPtr& t, const std::function<bool(const PtbCase&)>& want) {
    for (const MultChar& chi : enumerate_admissible_pairs(*t, 4))
        for (const MultChar& mu : ptb_mu_characters(*t, 2, 4)) {
            const PtbCase c{t, chi, mu, 0};
            if (central_compatible(c) && want(c)) return c;
        }
    return std::nullopt;
}

bool matching(const PtbCase& c) { return restriction_matches(c); }

}  // namespace

TEST_SUITE("ptb_engine") {

TEST_CASE("distinction predicate") {
    const auto u = Tower::build(3, 3, 2, 1);
    const auto r = Tower::build(3, 3, 2, 2);

    const auto a = find_case(u, [](const PtbCase& c) { return matching(c) && c.mu.tame(); });
    REQUIRE(a);
    CHECK(distinction_predicate(*a).distinguished);
    CHECK(distinction_predicate(*a).multiplicity == 1u);

    const auto b = find_case(r, [](const PtbCase& c) { return matching(c) && c.mu.tame(); });
    REQUIRE(b);
    CHECK(!distinction_predicate(*b).distinguished);
    CHECK(distinction_predicate(*b).multiplicity == 0u);

    const auto c = find_case(r, [](const PtbCase& c) { return matching(c) && c.mu.conductor() == 2; });
    REQUIRE(c);
    CHECK(distinction_predicate(*c).distinguished);
    CHECK(!distinction_predicate(*c).multiplicity.has_value());

    const auto d = find_case(u, [](const PtbCase& c) { return !matching(c); });
    REQUIRE(d);
    CHECK(!distinction_predicate(*d).distinguished);
}

TEST_CASE("symplectic predicate and the classifier") {
    const auto t = Tower::build(3, 3, 2, 1);
    const auto c = find_case(t, matching);
    REQUIRE(c);
    CHECK(symplectic_predicate(*c));
    const MultChar eta = unramified_char(FieldId::L, QZ(1, 2));
    const MultChar mu_f = restrict_char(*t, c->mu, FieldId::F);
    CHECK(classify_selfduality(*t, {FieldId::L, multiply(*t, eta, c->chi)}, mu_f) == SelfDuality::symplectic);

    // shifting chi by eta moves chi|_{L0} onto the eta_{L/L0} branch
    PtbCase shifted = *c;
    shifted.chi = multiply(*t, eta, c->chi);
    CHECK(!symplectic_predicate(shifted));
    CHECK(classify_selfduality(*t, {FieldId::L, multiply(*t, eta, shifted.chi)}, mu_f) == SelfDuality::orthogonal);

    const auto n = find_case(t, [&](const PtbCase& x) {
        const MultChar ec = multiply(*t, eta, x.chi);
        return classify_selfduality(*t, {FieldId::L, ec}, restrict_char(*t, x.mu, FieldId::F)) ==
               SelfDuality::not_selfdual;
    });
    REQUIRE(n);
    CHECK(!symplectic_predicate(*n));
}

TEST_CASE("root numbers against the closed forms") {
    for (std::uint32_t e : {1u, 2u})
        for (int cond : {0, 1, 2}) {
            const auto t = Tower::build(3, 3, 2, e);
            const auto c = find_case(t, [&](const PtbCase& x) { return matching(x) && x.mu.conductor() == cond; });
            REQUIRE(c);
            for (std::int64_t level : {-1, 0, 1}) {
                const EpsilonContext ctx(t, psi_with_level(t, level));
                const EpsilonValue eps = epsilon_ptb(*c, ctx);
                const QZ w = evaluate(*t, omega_quadratic(*t, FieldId::F, FieldId::E),
                                      t->constant(FieldId::F, t->amb().neg(1), 3));
                const QZ m1 = evaluate(*t, c->mu, t->constant(FieldId::E, t->amb().neg(1), 3));
                const QZ base = (w + m1).times(2);
                const QZ sign = e == 2 && cond < 2 ? QZ(1, 2) : QZ();
                CHECK(eps == EpsilonValue::root(base + sign, 3));
                CHECK(epsilon_expected(*c) == base);
                CHECK(epsilon_closed_form(*c) == base + sign);
            }
        }
}

TEST_CASE("central characters must match") {
    const auto t = Tower::build(3, 3, 2, 1);
    const MultChar chi = enumerate_admissible_pairs(*t, 1)[0];
    const PtbCase c{t, chi, make_char(*t, FieldId::E, QZ(1, 3), 0), 0};
    CHECK(!central_compatible(c));
    CHECK_THROWS_AS(epsilon_ptb(c, EpsilonContext(t, psi_with_level(t, 0))), DomainError);
}

TEST_CASE("sweeps") {
    SweepConfig cfg;
    cfg.ramification = {1};
    cfg.mu_conductor = 1;
    cfg.pi_order = 2;
    const auto v = sweep(cfg);
    CHECK(!v.empty());
    for (const auto& x : v) {
        CHECK(x.ok());
        CHECK(x.residual_agrees.value_or(false));
    }

    cfg.ramification = {2};
    cfg.residual = false;
    std::size_t hyp = 0;
    for (const auto& x : sweep(cfg)) {
        CHECK(!x.distinction.distinguished);
        CHECK(x.conjecture_holds);
        hyp += x.symplectic;
        if (x.symplectic) CHECK(!x.epsilon_condition);
    }
    CHECK(hyp > 0);

    cfg.ramification = {};
    CHECK(sweep(cfg).empty());
}

TEST_CASE("sweep output does not depend on the thread count") {
    SweepConfig cfg;
    cfg.ramification = {1, 2};
    cfg.pi_order = 2;
    cfg.psi_levels = {-1, 1};
    cfg.residual = false;
    const auto a = sweep(cfg);
    cfg.threads = 3;
    const auto b = sweep(cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(to_json(a[i]).dump() == to_json(b[i]).dump());
    CHECK(to_json(a[0]).contains("epsilon_expected"));
}

TEST_CASE("m below 2 is rejected") {
    SweepConfig cfg;
    cfg.m = 1;
    CHECK_THROWS_AS(sweep(cfg), DomainError);
}

}
