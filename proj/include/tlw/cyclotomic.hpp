#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tlw/qz.hpp"

namespace tlw {

/// Exact element of the cyclotomic field Q(zeta_N).
///
/// Stored in the power basis 1, zeta, ..., zeta^{phi(N)-1} reduced modulo the
/// N-th cyclotomic polynomial, as integer numerators over one positive common
/// denominator with gcd 1. The representation is unique for a given N, so
/// equality is exact; values of different orders are compared in Q(zeta_lcm).
class Cyclotomic {
public:
    /// Zero of Q(zeta_1) = Q.
    Cyclotomic();

    static Cyclotomic from_int(std::int64_t v, std::int64_t order = 1);
    static Cyclotomic from_rational(const mpq_class& v, std::int64_t order = 1);
    /// zeta_N^e.
    static Cyclotomic root(std::int64_t e, std::int64_t order);
    /// exp(2 pi i x) for a rotation number x.
    static Cyclotomic from_qz(const QZ& x);
    /// sum_i counts[i] * zeta_N^i with N = counts.size().
    static Cyclotomic from_group_ring(std::span<const std::int64_t> counts);
    /// Positive square root of the prime p, as an element of Q(zeta_{4p}).
    static Cyclotomic sqrt_prime(std::uint32_t p);

    std::int64_t order() const { return order_; }
    bool is_zero() const;
    bool is_rational() const;
    /// Value as a rational; throws unless is_rational().
    mpq_class rational_value() const;
    bool is_integer() const { return is_rational() && den_ == 1; }

    /// Same element viewed in Q(zeta_M); M must be a multiple of order().
    Cyclotomic lift(std::int64_t m) const;
    /// Complex conjugate (zeta -> zeta^{-1}).
    Cyclotomic conj() const;
    Cyclotomic inverse() const;
    Cyclotomic pow(std::int64_t e) const;

    Cyclotomic operator+(const Cyclotomic& o) const;
    Cyclotomic operator-(const Cyclotomic& o) const;
    Cyclotomic operator-() const;
    Cyclotomic operator*(const Cyclotomic& o) const;
    Cyclotomic operator/(const Cyclotomic& o) const { return *this * o.inverse(); }
    Cyclotomic scaled(const mpq_class& s) const;
    Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
    Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

    bool operator==(const Cyclotomic& o) const;
    bool operator!=(const Cyclotomic& o) const { return !(*this == o); }

    /// If this is a root of unity, its rotation number.
    std::optional<QZ> as_root_of_unity() const;

    /// Evaluation at exp(2 pi i / N).
    std::complex<double> to_complex() const;

    std::span<const mpz_class> numerators() const { return num_; }
    const mpz_class& denominator() const { return den_; }
    std::string to_string() const;

private:
    Cyclotomic(std::int64_t order, std::vector<mpz_class> num, mpz_class den);
    void normalize();
    bool small() const;
    Cyclotomic mul_small(const Cyclotomic& o) const;
    Cyclotomic mul_general(const Cyclotomic& o) const;

    std::int64_t order_ = 1;
    std::vector<mpz_class> num_;
    mpz_class den_ = 1;
};

/// Euler phi.
std::int64_t euler_phi(std::int64_t n);
/// Integer coefficients of the n-th cyclotomic polynomial, constant term first.
const std::vector<std::int64_t>& cyclotomic_polynomial(std::int64_t n);

/// An epsilon value unit * p^{half_power/2}. Products of Gauss sums carry
/// their modulus in the half-integral power of p; folding into a single
/// cyclotomic number uses sqrt(p) in Q(zeta_{4p}).
class EpsilonValue {
public:
    EpsilonValue() : unit_(Cyclotomic::from_int(1)), half_power_(0), p_(0) {}
    EpsilonValue(Cyclotomic unit, std::int64_t half_power, std::uint32_t p)
        : unit_(std::move(unit)), half_power_(half_power), p_(p) {}
    static EpsilonValue one(std::uint32_t p) { return {Cyclotomic::from_int(1), 0, p}; }
    static EpsilonValue root(const QZ& x, std::uint32_t p) { return {Cyclotomic::from_qz(x), 0, p}; }

    const Cyclotomic& unit() const { return unit_; }
    std::int64_t half_power() const { return half_power_; }
    std::uint32_t prime() const { return p_; }

    EpsilonValue operator*(const EpsilonValue& o) const;
    EpsilonValue& operator*=(const EpsilonValue& o) { return *this = *this * o; }
    EpsilonValue inverse() const;
    EpsilonValue pow(std::int64_t e) const;

    /// Single exact cyclotomic number equal to this value.
    Cyclotomic to_cyclotomic() const;
    bool operator==(const EpsilonValue& o) const { return to_cyclotomic() == o.to_cyclotomic(); }
    bool operator!=(const EpsilonValue& o) const { return !(*this == o); }

    /// |value| == 1, checked exactly.
    bool has_unit_modulus() const;
    std::optional<QZ> as_root_of_unity() const { return to_cyclotomic().as_root_of_unity(); }
    std::complex<double> to_complex() const;
    std::string to_string() const;

private:
    Cyclotomic unit_;
    std::int64_t half_power_;
    std::uint32_t p_;
};

}  // namespace tlw
