#include "tlw/epsilon.hpp"

#include <numeric>

#include "tlw/errors.hpp"

namespace tlw {

using Elem = FiniteField::Elem;

namespace {

std::int64_t pmod(std::int64_t a, std::int64_t n) {
    a %= n;
    return a < 0 ? a + n : a;
}

}  // namespace

Cyclotomic gauss_sum(const Tower& t, FieldId k, std::uint64_t a, Elem b) {
    if (b == 0) throw DomainError("gauss_sum: trivial additive character");
    const auto u = static_cast<std::int64_t>(t.residue_units(k));
    const std::int64_t p = t.p();
    const std::int64_t n = std::lcm(u, p);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
    const Elem g = t.residue_generator(k);
    Elem x = 1;
    for (std::int64_t i = 0; i < u; ++i, x = t.amb().mul(x, g)) {
        const std::int64_t e = static_cast<std::int64_t>(static_cast<__int128>(a % u) * i % u) * (n / u) +
                               static_cast<std::int64_t>(t.residue_trace(k, t.amb().mul(b, x))) * (n / p);
        counts[static_cast<std::size_t>(pmod(e, n))] += 1;
    }
    return Cyclotomic::from_group_ring(counts);
}

EpsilonValue epsilon_char(const MultChar& chi, const AddChar& psi) {
    const Tower& t = psi.tower();
    const FieldId k = chi.field;
    if (psi.field() != k) throw DomainError("epsilon_char: characters live on different fields");
    const std::int64_t c = chi.conductor();
    const std::int64_t nu = psi.exponent();
    if (c == 0) return EpsilonValue::root(chi.pi_value.times(nu), t.p());

    const std::int64_t kk = c + nu;
    const auto u = static_cast<std::int64_t>(t.residue_units(k));
    const std::int64_t p = t.p();
    const std::int64_t n = std::lcm(std::lcm(u, p), chi.pi_value.den());
    const std::int64_t su = n / u, sp = n / p;
    const std::int64_t base = chi.pi_value.times(kk).exponent_mod(n);
    const auto a = static_cast<std::int64_t>(chi.a);

    const FiniteField& A = t.amb();
    const Elem g = t.residue_generator(k);
    std::vector<Elem> residues{0};
    for (Elem x = 1; residues.size() <= static_cast<std::size_t>(u); x = A.mul(x, g)) residues.push_back(x);
    if (c == 1) residues.resize(1);

    std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
    Elem x = 1;
    for (std::int64_t i = 0; i < u; ++i, x = A.mul(x, g)) {
        const std::int64_t tame = static_cast<std::int64_t>(static_cast<__int128>(a) * i % u) * su;
        const std::int64_t psi0 = psi.term(-kk, x);
        for (Elem w : residues) {
            std::int64_t e = base - tame + psi0 * sp;
            if (w != 0) {
                const Elem xw = A.mul(x, w);
                e += (static_cast<std::int64_t>(psi.term(1 - kk, xw)) -
                      static_cast<std::int64_t>(t.residue_trace(k, A.mul(*chi.beta, w)))) *
                     sp;
            }
            counts[static_cast<std::size_t>(pmod(e, n))] += 1;
        }
    }
    const auto half = -static_cast<std::int64_t>(t.residue_prime_degree(k)) * c;
    return {Cyclotomic::from_group_ring(counts), half, t.p()};
}

EpsilonValue lambda_constant(FieldId k_sup, const AddChar& psi) {
    const Tower& t = psi.tower();
    EpsilonValue acc = EpsilonValue::one(t.p());
    for (const MultChar& xi : galois_characters(t, psi.field(), k_sup)) acc *= epsilon_char(xi, psi);
    return acc * epsilon_char(trivial_char(k_sup), psi.lift(k_sup)).inverse();
}

TruncatedElement trace_zero_element(const Tower& t, FieldId k, FieldId k_sup) {
    if (t.degree(k, k_sup) != 2) throw DomainError("trace_zero_element: extension is not quadratic");
    const Elem g = t.residue_generator(k_sup);
    for (std::int64_t v = 0; v < 2; ++v) {
        Elem c = 1;
        for (std::uint64_t i = 0; i < t.residue_units(k_sup); ++i, c = t.amb().mul(c, g)) {
            Series s{v, std::vector<Elem>(static_cast<std::size_t>(t.default_precision() + 3), 0)};
            s.coeffs[0] = c;
            const TruncatedElement x = t.make(k_sup, std::move(s));
            if (t.trace(x, k).is_zero()) return x;
        }
    }
    throw ConsistencyError("no monomial of trace zero found");
}

}  // namespace tlw
