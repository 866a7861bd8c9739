#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "tlw/errors.hpp"

namespace tlw {

/// An element of Q/Z, i.e. a root of unity exp(2*pi*i*num/den) written
/// additively. Always reduced with 0 <= num < den.
class QZ {
public:
    constexpr QZ() = default;
    QZ(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }

    static QZ zero() { return {}; }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_zero() const { return num_ == 0; }

    QZ operator+(const QZ& o) const {
        const std::int64_t g = std::gcd(den_, o.den_);
        const std::int64_t l = den_ / g * o.den_;
        return QZ(mulmod(num_, l / den_, l) + mulmod(o.num_, l / o.den_, l), l);
    }
    QZ operator-() const { return QZ(den_ - num_, den_); }
    QZ operator-(const QZ& o) const { return *this + (-o); }
    QZ& operator+=(const QZ& o) { return *this = *this + o; }
    QZ& operator-=(const QZ& o) { return *this = *this - o; }

    /// Integer multiple k * x.
    QZ times(std::int64_t k) const {
        std::int64_t kk = k % den_;
        if (kk < 0) kk += den_;
        return QZ(mulmod(num_, kk, den_), den_);
    }

    bool operator==(const QZ& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const QZ& o) const { return !(*this == o); }
    bool operator<(const QZ& o) const {
        return static_cast<__int128>(num_) * o.den_ < static_cast<__int128>(o.num_) * den_;
    }

    /// Order of this element in Q/Z.
    std::int64_t order() const { return den_; }

    /// Exponent of this root of unity as a power of a primitive N-th root.
    /// Throws if N is not a multiple of the denominator.
    std::int64_t exponent_mod(std::int64_t n) const {
        if (n % den_ != 0) throw DomainError("QZ::exponent_mod: denominator does not divide order");
        return num_ * (n / den_);
    }

    std::string to_string() const { return std::to_string(num_) + "/" + std::to_string(den_); }

    /// Parses "num/den" or an integer.
    static QZ parse(const std::string& s) {
        const auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return QZ(std::stoll(s), 1);
            return QZ(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
        } catch (const std::logic_error&) {
            throw DomainError("cannot parse rotation number '" + s + "'");
        }
    }

private:
    static std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
        return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
    }
    void normalize() {
        if (den_ == 0) throw DomainError("QZ: zero denominator");
        if (den_ < 0) {
            den_ = -den_;
            num_ = -num_;
        }
        num_ %= den_;
        if (num_ < 0) num_ += den_;
        const std::int64_t g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, const QZ& x) { return os << x.to_string(); }

}  // namespace tlw
