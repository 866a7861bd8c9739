#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>

#include "oracle.hpp"
#include "tlw/errors.hpp"
#include "tlw/local_fields.hpp"

using namespace tlw;
using Elem = FiniteField::Elem;

TEST_SUITE("local_fields") {

TEST_CASE("field arithmetic agrees with schoolbook multiplication") {
    for (auto [p, k] : {std::pair{3u, 4u}, std::pair{5u, 2u}, std::pair{3u, 2u}}) {
        const auto f = FiniteField::get(p, k);
        const oracle::PolyField o(*f);
        for (Elem a = 0; a < f->size(); a += 7)
            for (Elem b = 0; b < f->size(); b += 5) {
                CHECK(f->mul(a, b) == o.mul(a, b));
                CHECK(f->add(a, b) == o.add(a, b));
            }
        // gamma generates the unit group
        CHECK(o.log(f->gamma()) == 1);
        CHECK(o.pow(f->gamma(), f->unit_order()) == 1);
        for (std::uint64_t d = 1; d < f->unit_order(); ++d)
            if (f->unit_order() % d == 0) CHECK(o.pow(f->gamma(), d) != 1);
    }
}

TEST_CASE("log tables round-trip through the cache file") {
    const auto dir = std::filesystem::temp_directory_path() / "tlw_unit_cache";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto f = FiniteField::get(3, 4);
    const auto path = dir / FiniteField::cache_file_name(3, 4);
    f->save(path, 3, 4);
    const FiniteField g = FiniteField::load(path);
    for (Elem a = 1; a < f->size(); ++a) CHECK(g.log(a) == f->log(a));

    std::string bytes;
    {
        std::ifstream in(path, std::ios::binary);
        bytes.assign(std::istreambuf_iterator<char>(in), {});
    }
    CHECK(bytes.substr(0, 4) == "TLTW");
    bytes[0] = 'X';
    {
        std::ofstream out(path, std::ios::binary);
        out << bytes;
    }
    CHECK_THROWS_AS(FiniteField::load(path), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("unramified tower at q = 3, m = 2") {
    const auto t = Tower::build(3, 3, 2, 1);
    CHECK(t->residue_size(FieldId::L) == 81);
    CHECK(t->residue_size(FieldId::E) == 9);
    CHECK(t->residue_size(FieldId::L0) == 9);
    CHECK(!t->has(FieldId::M));
    const FiniteField& f = t->amb();
    const Elem xi = t->residue_generator(FieldId::E);
    CHECK(t->delta(2).coeff(0) == f.pow(xi, 2));
}

TEST_CASE("ramified tower: v = gamma^5 and v^8 = -1") {
    const auto t = Tower::build(3, 3, 2, 2);
    const FiniteField& f = t->amb();
    const oracle::PolyField o(f);
    CHECK(t->has(FieldId::M));
    CHECK(t->v_residue() == o.pow(f.gamma(), 5));
    CHECK(o.pow(t->v_residue(), 8) == o.neg(1));
}

TEST_CASE("Frobenius^m negates v in both towers") {
    for (std::uint32_t e : {1u, 2u}) {
        const auto t = Tower::build(3, 3, 2, e);
        const oracle::PolyField o(t->amb());
        CHECK(o.pow(t->v_residue(), 9) == o.neg(t->v_residue()));
        CHECK(t->amb().frobenius(t->v_residue(), 2) == t->amb().neg(t->v_residue()));
    }
}

TEST_CASE("N_{L/L0} on residue units is a -> 10a") {
    const auto t = Tower::build(3, 3, 2, 1);
    const FiniteField& f = t->amb();
    const oracle::PolyField o(f);
    for (std::uint64_t a = 0; a < 80; ++a) {
        const Elem u = f.exp(static_cast<std::int64_t>(a));
        const auto n = t->norm(t->constant(FieldId::L, u, 3), FieldId::L0);
        CHECK(n.valuation() == 0);
        CHECK(n.coeff(0) == o.mul(u, o.pow(u, 9)));
        CHECK(f.log(n.coeff(0)) == 10 * a % 80);
    }
}

TEST_CASE("N_{E/F}(pi_E) = -pi_F for ramified E") {
    const auto t = Tower::build(3, 3, 2, 2);
    const auto n = t->norm(t->uniformizer(FieldId::E, 3), FieldId::F);
    CHECK(n.valuation() == 1);
    CHECK(n.coeff(1) == t->amb().neg(1));
    CHECK(n.coeff(2) == 0);
}

TEST_CASE("Tr_{E/F}(delta) = 0 and delta^2 lies in F") {
    for (std::uint32_t e : {1u, 2u}) {
        const auto t = Tower::build(3, 3, 2, e);
        const auto d = t->delta(4);
        CHECK(t->trace(d, FieldId::F).is_zero());
        const auto d2 = d * d;
        for (const GaloisElt& g : t->galois_group()) {
            const auto moved = t->apply(g, t->coerce(d2, t->ramified() ? FieldId::M : FieldId::L));
            CHECK((moved - t->coerce(d2, moved.field())).is_zero());
        }
    }
}

TEST_CASE("tame classes") {
    const auto t = Tower::build(3, 3, 2, 1);
    const FiniteField& f = t->amb();
    const auto cls = jordan_of_unit_class(t->uniformizer(FieldId::F, 3));
    CHECK(cls.valuation == 1);
    CHECK(cls.residue_log == 0);
    const auto minus_one = jordan_of_unit_class(t->constant(FieldId::F, f.neg(1), 3));
    CHECK(minus_one.valuation == 0);
    CHECK(minus_one.residue_log == 1);
    const auto g = t->constant(FieldId::F, t->residue_generator(FieldId::F), 3);
    const auto x = g * (t->one(FieldId::F, 3) + t->uniformizer(FieldId::F, 3));
    const auto c = jordan_of_unit_class(x);
    CHECK(c.valuation == 0);
    CHECK(c.residue_log == 1);
}

TEST_CASE("series arithmetic: inverse and precision") {
    const auto t = Tower::build(3, 3, 2, 1);
    const auto x = t->one(FieldId::L, 5) + t->uniformizer(FieldId::L, 5);
    const auto y = x * x.inverse();
    CHECK((y - t->one(FieldId::L, 5)).is_zero());
    CHECK_THROWS_AS(t->one(FieldId::L, 2).coeff(7), PrecisionError);
}

TEST_CASE("degrees and Galois groups") {
    const auto t = Tower::build(3, 3, 2, 2);
    CHECK(t->degree(FieldId::F, FieldId::M) == 8);
    CHECK(t->degree(FieldId::L0, FieldId::L) == 2);
    CHECK(t->galois_order() == 8);
    CHECK(t->relative_group(FieldId::F, FieldId::E).size() == 2);
    for (const GaloisElt& g : t->galois_group()) CHECK(t->compose(g, t->invert(g)) == GaloisElt{});
    CHECK_THROWS_AS(Tower::build(3, 3, 1, 1), DomainError);
    CHECK_THROWS_AS(Tower::build(3, 3, 2, 3), DomainError);
}

}
