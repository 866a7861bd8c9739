#include <doctest.h>

#include <map>
#include <optional>

#include "tlw/cosets.hpp"
#include "tlw/errors.hpp"
#include "tlw/ptb_engine.hpp"

using namespace tlw;
using ff::Elem;
using ff::Mat;

namespace {

std::optional<PtbCase> find_case(const TowerPtr& t, bool match, int cond) {
    for (const MultChar& chi : enumerate_admissible_pairs(*t, 4))
        for (const MultChar& mu : ptb_mu_characters(*t, 2, 4)) {
            const PtbCase c{t, chi, mu, 0};
            if (central_compatible(c) && restriction_matches(c) == match && mu.conductor() == cond) return c;
        }
    return std::nullopt;
}

// Counts of J_lambda mod P keyed by (class of the reduction, det_E of the
// residue of a + delta b), enumerated over all x0, b0 at m = 2.
std::map<std::pair<ff::ConjInvariant, Elem>, std::uint64_t> direct_counts(const Tower& t, const ff::GLContext& ctx,
                                                                          const CosetLambda& lam) {
    const FiniteField& f = t.amb();
    const Elem d = t.delta(1).coeff(0);
    const auto& sc = ctx.scalars();
    std::map<std::pair<ff::ConjInvariant, Elem>, std::uint64_t> out;
    std::vector<Elem> x(4), b(4);
    for (std::uint32_t i = 0; i < 6561; ++i) {
        std::uint32_t k = i;
        for (int j = 0; j < 4; ++j) x[j] = sc[k % 3], k /= 3;
        for (int j = 0; j < 4; ++j) b[j] = sc[k % 3], k /= 3;
        Elem e[2][2];
        for (std::uint32_t r = 0; r < 2; ++r)
            for (std::uint32_t c = 0; c < 2; ++c) {
                const Elem a = lam[r] > lam[c] ? 0 : x[r * 2 + c];
                const Elem bb = lam[r] > 0 ? 0 : b[r * 2 + c];
                e[r][c] = f.add(a, f.mul(d, bb));
            }
        const Elem det = f.sub(f.mul(e[0][0], e[1][1]), f.mul(e[0][1], e[1][0]));
        if (det == 0) continue;
        const Mat red = coset_reduction(ctx, lam, Mat{2, x}, Mat{2, b});
        out[{ctx.invariant(red), det}] += 1;
    }
    return out;
}

}  // namespace

TEST_SUITE("cosets") {

TEST_CASE("dominant weights") {
    const auto w = dominant_weights(2, 3);
    CHECK(w.size() == 10);
    CHECK(w.front() == CosetLambda{0, 0});
    CHECK(w.back() == CosetLambda{3, 3});
    for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i - 1] < w[i]);
    CHECK(to_string(CosetLambda{2, 1}) == "(2,1)");
}

TEST_CASE("precision-one summaries agree with direct enumeration") {
    const auto t = Tower::build(3, 3, 2, 1);
    const auto ctx = ff::GLContext::make(3, 1, 4);
    for (const CosetLambda& lam : dominant_weights(2, 2)) {
        const auto direct = direct_counts(*t, *ctx, lam);
        const CosetSummary s = coset_summary(*t, *ctx, lam, 1);
        std::map<std::pair<ff::ConjInvariant, Elem>, std::uint64_t> got;
        std::uint64_t total = 0;
        for (const auto& [key, n] : s.counts) {
            CHECK(std::get<2>(key) == 0);
            got[{std::get<0>(key), std::get<1>(key)}] += n;
            total += n;
        }
        CHECK(total == s.group_order);
        CHECK(got == direct);
        const CosetSummary s2 = coset_summary(*t, *ctx, lam, 2, 2);
        CHECK(s2.group_order == s.group_order * 81 * 81);
    }
}

TEST_CASE("Hom dimensions on single cosets") {
    const auto t = Tower::build(3, 3, 2, 1);
    const auto c = find_case(t, true, 2);
    REQUIRE(c);
    CHECK(coset_hom_dim(*t, {1, 1}, c->chi, c->mu, 2) == 1);
    CHECK(coset_hom_dim(*t, {0, 0}, c->chi, c->mu, 2) == 0);
    CHECK(coset_hom_dim(*t, {2, 1}, c->chi, c->mu, 2) == 0);
    CHECK_THROWS_AS(coset_hom_dim(*t, {1, 1}, c->chi, c->mu, 1), PrecisionError);
    CHECK(shalika_factorization_holds(*t, c->mu));
}

TEST_CASE("audits over the box") {
    const auto t = Tower::build(3, 3, 2, 1);
    const CosetAuditor auditor(t, 3);

    const auto wild = find_case(t, true, 2);
    REQUIRE(wild);
    const CosetAudit a = auditor.audit(wild->chi, wild->mu);
    CHECK(a.pass);
    CHECK(a.distinguished);
    CHECK(a.expected == CosetLambda{1, 1});
    CHECK(a.total == 1);
    for (const auto& e : a.entries) CHECK(e.dim == (e.lambda == CosetLambda{1, 1} ? 1u : 0u));

    for (int cond : {0, 1}) {
        const auto tame = find_case(t, true, cond);
        REQUIRE(tame);
        const CosetAudit b = auditor.audit(tame->chi, tame->mu);
        CHECK(b.pass);
        CHECK(b.expected == CosetLambda{0, 0});
        for (const auto& e : b.entries) CHECK(e.dim == (e.lambda == CosetLambda{0, 0} ? 1u : 0u));
    }

    const auto off = find_case(t, false, 2);
    REQUIRE(off);
    const CosetAudit z = auditor.audit(off->chi, off->mu);
    CHECK(z.pass);
    CHECK(z.total == 0);
    CHECK(to_json(z).contains("entries"));
}

TEST_CASE("ramified E is refused") {
    const auto t = Tower::build(3, 3, 2, 2);
    const MultChar chi = enumerate_admissible_pairs(*t, 1)[0];
    CHECK_THROWS_AS(audit_box(t, chi, trivial_char(FieldId::E), 2), DomainError);
}

}
