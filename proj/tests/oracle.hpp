#pragma once

// Slow reference arithmetic used to check the library from outside.

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "tlw/finite_field.hpp"
#include "tlw/qz.hpp"

namespace oracle {

using Elem = tlw::FiniteField::Elem;

// Schoolbook multiplication of base-p digit vectors modulo the field polynomial.
struct PolyField {
    std::uint32_t p, k;
    std::vector<std::uint32_t> poly;

    explicit PolyField(const tlw::FiniteField& f)
        : p(f.characteristic()), k(f.degree()), poly(f.polynomial().begin(), f.polynomial().end()) {}

    std::vector<std::uint32_t> digits(Elem a) const {
        std::vector<std::uint32_t> d(k);
        for (auto& x : d) x = a % p, a /= p;
        return d;
    }
    Elem encode(const std::vector<std::uint32_t>& d) const {
        Elem r = 0;
        for (std::size_t i = d.size(); i-- > 0;) r = r * p + d[i];
        return r;
    }
    Elem add(Elem a, Elem b) const {
        auto x = digits(a), y = digits(b);
        for (std::uint32_t i = 0; i < k; ++i) x[i] = (x[i] + y[i]) % p;
        return encode(x);
    }
    Elem mul(Elem a, Elem b) const {
        auto x = digits(a), y = digits(b);
        std::vector<std::uint32_t> z(2 * k, 0);
        for (std::uint32_t i = 0; i < k; ++i)
            for (std::uint32_t j = 0; j < k; ++j) z[i + j] = (z[i + j] + x[i] * y[j]) % p;
        for (std::uint32_t d = 2 * k - 1; d >= k; --d) {
            const std::uint32_t c = z[d];
            if (!c) continue;
            z[d] = 0;
            for (std::uint32_t i = 0; i < k; ++i) z[d - k + i] = (z[d - k + i] + (p - c) * poly[i]) % p;
        }
        z.resize(k);
        return encode(z);
    }
    Elem pow(Elem a, std::uint64_t e) const {
        Elem r = 1;
        for (std::uint64_t i = 0; i < e; ++i) r = mul(r, a);
        return r;
    }
    Elem neg(Elem a) const {
        auto x = digits(a);
        for (auto& v : x) v = (p - v) % p;
        return encode(x);
    }
    // Smallest e >= 1 with gamma^e = a, by repeated multiplication.
    std::uint64_t log(Elem a) const {
        Elem x = 1;
        const Elem g = p;  // the element x
        for (std::uint64_t e = 0;; ++e, x = mul(x, g))
            if (x == a) return e;
    }
};

inline std::complex<double> root(const tlw::QZ& x) {
    const double t = 2 * std::numbers::pi * static_cast<double>(x.num()) / static_cast<double>(x.den());
    return {std::cos(t), std::sin(t)};
}

}  // namespace oracle
