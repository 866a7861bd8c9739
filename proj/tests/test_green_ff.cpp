#include <doctest.h>

#include <complex>
#include <set>

#include "oracle.hpp"
#include "tlw/green_ff.hpp"

using namespace tlw;
using namespace tlw::ff;

namespace {

Mat mat2(Elem a, Elem b, Elem c, Elem d) { return Mat{2, {a, b, c, d}}; }

std::complex<double> theta_at(const CuspidalFF& pi, Elem x) {
    const auto units = static_cast<std::int64_t>(pi.context().field().unit_order());
    const auto l = static_cast<std::int64_t>(pi.context().field().log(x));
    return oracle::root(QZ(static_cast<std::int64_t>(pi.theta()) * l % units, units));
}

bool close(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) < 1e-9; }

}  // namespace

TEST_SUITE("green_ff") {

TEST_CASE("Jordan decomposition and conjugacy invariants") {
    const auto ctx = GLContext::make(3, 1, 2);
    const FiniteField& f = ctx->field();
    const Elem two = f.neg(1);

    const auto j = ctx->jordan_decompose(mat2(1, 1, 0, 1));
    CHECK(j.s == ctx->identity(2));
    CHECK(j.invariant.d == 1);
    CHECK(j.invariant.partition == std::vector<std::uint32_t>{2});

    CHECK(!ctx->invariant(mat2(1, 0, 0, two)).primary());

    // x^2 + 1 is irreducible over F_3
    const auto e = ctx->invariant(mat2(0, two, 1, 0));
    CHECK(e.d == 2);
    CHECK(e.partition == std::vector<std::uint32_t>{1});

    const Mat g = mat2(two, 1, 0, two);
    const auto jd = ctx->jordan_decompose(g);
    CHECK(ctx->mul(jd.s, jd.u) == g);
    CHECK(ctx->mul(jd.s, jd.u) == ctx->mul(jd.u, jd.s));
    CHECK(jd.s == mat2(two, 0, 0, two));
}

TEST_CASE("cuspidal values of GL_2(F_3)") {
    const auto ctx = GLContext::make(3, 1, 2);
    const FiniteField& f = ctx->field();
    const Elem two = f.neg(1);
    for (std::uint64_t theta : regular_theta_representatives(*ctx)) {
        const CuspidalFF pi(ctx, theta);
        CHECK(pi.degree() == Cyclotomic::from_int(2));
        for (Elem z : {Elem{1}, two}) {
            const Mat g = mat2(z, 1, 0, z);
            CHECK(close(pi.value_exact(ctx->invariant(g)).to_complex(), -theta_at(pi, z)));
        }
        // eigenvalues of [[0, 2], [1, 0]] are the roots of x^2 + 1 in F_9
        const Mat el = mat2(0, two, 1, 0);
        Elem lambda = 0;
        for (Elem x = 1; x < f.size(); ++x)
            if (f.add(f.mul(x, x), 1) == 0) lambda = x;
        REQUIRE(lambda != 0);
        CHECK(close(pi.value_exact(ctx->invariant(el)).to_complex(),
                    -(theta_at(pi, lambda) + theta_at(pi, f.pow(lambda, 3)))));
        CHECK(pi.value_exact(ctx->invariant(mat2(1, 0, 0, two))).is_zero());
    }
}

TEST_CASE("degree, norm and cuspidality") {
    for (std::uint32_t n : {2u, 4u}) {
        const auto ctx = GLContext::make(3, 1, n);
        const auto reps = regular_theta_representatives(*ctx);
        CHECK(reps.size() == (n == 2 ? 3u : 18u));
        for (std::uint64_t theta : reps) {
            const CuspidalFF pi(ctx, theta);
            CHECK(pi.degree() == Cyclotomic::from_int(n == 2 ? 2 : 416));
            CHECK(pi.norm() == Cyclotomic::from_int(1));
            for (const auto& blocks : proper_compositions(n)) {
                CHECK(pi.radical_average(blocks).is_zero());
                CHECK(pi.parabolic_pairing(blocks).is_zero());
            }
        }
    }
    CHECK(proper_compositions(4).size() == 7);
}

TEST_CASE("Frobenius-conjugate thetas give the same character") {
    const auto ctx = GLContext::make(3, 1, 4);
    for (std::uint64_t theta : {1u, 7u, 13u}) {
        const CuspidalFF a(ctx, theta), b(ctx, theta * 3 % 80);
        for (const PrimaryClass& c : ctx->primary_classes())
            CHECK(a.value_exact(c.invariant) == b.value_exact(c.invariant));
    }
}

TEST_CASE("Dixon-Schneider table of GL_2(F_3)") {
    const auto ctx = GLContext::make(3, 1, 2);
    const CharacterTable tab = dixon_table(ctx);
    REQUIRE(tab.reps.size() == 8);
    REQUIRE(tab.rows.size() == 8);
    std::uint64_t total = 0;
    for (auto s : tab.class_sizes) total += s;
    CHECK(total == 48);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) {
            Cyclotomic s;
            for (std::size_t c = 0; c < 8; ++c)
                s += (tab.rows[i][c] * tab.rows[j][c].conj()).scaled(mpq_class(static_cast<long>(tab.class_sizes[c])));
            CHECK(s == Cyclotomic::from_int(i == j ? 48 : 0));
        }
    // every cuspidal character appears as a row
    for (std::uint64_t theta : regular_theta_representatives(*ctx)) {
        const CuspidalFF pi(ctx, theta);
        int matches = 0;
        for (const auto& row : tab.rows) {
            bool same = true;
            for (std::size_t c = 0; c < 8; ++c) same = same && row[c] == pi.value_exact(ctx->invariant(tab.reps[c]));
            matches += same;
        }
        CHECK(matches == 1);
    }
    std::multiset<std::int64_t> degrees;
    for (const auto& row : tab.rows) degrees.insert(static_cast<std::int64_t>(row[tab.class_index(ctx->identity(2))].rational_value().get_d()));
    CHECK(degrees == std::multiset<std::int64_t>{1, 1, 2, 2, 2, 3, 3, 4});
}

TEST_CASE("twisted Shalika dimensions at q = 3, n = 4") {
    const auto ctx = GLContext::make(3, 1, 4);
    const ShalikaSummary s = shalika_summary(*ctx);
    CHECK(s.group_order == 48 * 81);
    for (std::uint64_t theta : regular_theta_representatives(*ctx)) {
        const CuspidalFF pi(ctx, theta);
        for (std::uint64_t alpha : {0u, 1u}) {
            const std::uint64_t d1 = shalika_hom_dim(pi, alpha, 1, s);
            const std::uint64_t d2 = shalika_hom_dim(pi, alpha, ctx->field().neg(1), s);
            CHECK(d1 == d2);
            CHECK(d1 == (theta % 8 == 4 * alpha ? 1u : 0u));
        }
    }
}

TEST_CASE("distinction by GL_2(F_9) at q = 3, n = 4") {
    const auto ctx = GLContext::make(3, 1, 4);
    const HbarSummary h = hbar_summary(*ctx);
    CHECK(h.group_order == 5760);
    for (std::uint64_t theta : regular_theta_representatives(*ctx)) {
        const CuspidalFF pi(ctx, theta);
        for (std::uint64_t mu = 0; mu < 8; ++mu) {
            const std::uint64_t d = ff_distinction_dim(pi, mu, h);
            CHECK(d == (theta % 8 == 4 * (mu % 2) ? 1u : 0u));
            // central characters: theta on F_3^* against mu^2 on F_3^*
            if (theta % 2 != 0) CHECK(d == 0);
        }
    }
}

TEST_CASE("pairings agree with Dixon rows at n = 2") {
    for (std::uint32_t p : {3u, 5u}) {
        const auto ctx = GLContext::make(p, 1, 2);
        const CharacterTable tab = dixon_table(ctx);
        const ShalikaSummary s = shalika_summary(*ctx);
        const HbarSummary h = hbar_summary(*ctx);
        for (std::uint64_t theta : regular_theta_representatives(*ctx)) {
            const CuspidalFF pi(ctx, theta);
            std::size_t row = tab.rows.size();
            for (std::size_t i = 0; i < tab.rows.size(); ++i) {
                bool same = true;
                for (std::size_t c = 0; c < tab.reps.size(); ++c)
                    same = same && tab.rows[i][c] == pi.value_exact(ctx->invariant(tab.reps[c]));
                if (same) row = i;
            }
            REQUIRE(row < tab.rows.size());
            const ClassFunction chi = [&](const Mat& g) { return tab.rows[row][tab.class_index(g)]; };
            for (std::uint64_t alpha = 0; alpha < p - 1; ++alpha)
                CHECK(shalika_pairing(*ctx, chi, alpha, 1) ==
                      Cyclotomic::from_int(static_cast<std::int64_t>(shalika_hom_dim(pi, alpha, 1, s))));
            for (std::uint64_t mu = 0; mu < p * p - 1; mu += 3)
                CHECK(hbar_pairing(*ctx, chi, mu) ==
                      Cyclotomic::from_int(static_cast<std::int64_t>(ff_distinction_dim(pi, mu, h))));
        }
    }
}

}
