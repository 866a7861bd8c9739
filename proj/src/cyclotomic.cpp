#include "tlw/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "tlw/errors.hpp"
#include "tlw/finite_field.hpp"

namespace tlw {

namespace {

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return a / std::gcd(a, b) * b; }

std::int64_t mod(std::int64_t a, std::int64_t n) {
    a %= n;
    return a < 0 ? a + n : a;
}

// Reduces an integer polynomial (constant term first) modulo Phi_n in place
// and truncates it to phi(n) coefficients.
void reduce_mod_phi(std::vector<mpz_class>& poly, std::int64_t n) {
    const auto& phi = cyclotomic_polynomial(n);
    const std::size_t deg = phi.size() - 1;
    for (std::size_t top = poly.size(); top-- > deg;) {
        if (poly[top] == 0) continue;
        const mpz_class c = poly[top];
        const std::size_t shift = top - deg;
        for (std::size_t i = 0; i < deg; ++i)
            if (phi[i] != 0) poly[shift + i] -= c * phi[i];
        poly[top] = 0;
    }
    poly.resize(deg);
}

// Exact division of integer polynomials, b monic.
std::vector<std::int64_t> poly_div_exact(std::vector<std::int64_t> a, const std::vector<std::int64_t>& b) {
    const std::size_t db = b.size() - 1;
    std::vector<std::int64_t> q(a.size() - db);
    for (std::size_t top = a.size(); top-- > db;) {
        const std::int64_t c = a[top];
        q[top - db] = c;
        for (std::size_t i = 0; i <= db; ++i) a[top - db + i] -= c * b[i];
    }
    return q;
}

}  // namespace

std::int64_t euler_phi(std::int64_t n) {
    std::int64_t r = n;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        while (n % p == 0) n /= p;
        r -= r / p;
    }
    if (n > 1) r -= r / n;
    return r;
}

const std::vector<std::int64_t>& cyclotomic_polynomial(std::int64_t n) {
    static std::mutex mu;
    static std::map<std::int64_t, std::vector<std::int64_t>> cache;
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(n); it != cache.end()) return it->second;
    }
    if (n < 1) throw DomainError("cyclotomic_polynomial: order must be positive");
    // x^n - 1 divided by Phi_d for every proper divisor d.
    std::vector<std::int64_t> poly(static_cast<std::size_t>(n) + 1, 0);
    poly[0] = -1;
    poly[n] = 1;
    for (std::int64_t d = 1; d < n; ++d)
        if (n % d == 0) poly = poly_div_exact(std::move(poly), cyclotomic_polynomial(d));
    std::lock_guard lock(mu);
    return cache.emplace(n, std::move(poly)).first->second;
}

Cyclotomic::Cyclotomic() : order_(1), num_(1), den_(1) {}

Cyclotomic::Cyclotomic(std::int64_t order, std::vector<mpz_class> num, mpz_class den)
    : order_(order), num_(std::move(num)), den_(std::move(den)) {
    normalize();
}

void Cyclotomic::normalize() {
    if (den_ < 0) {
        den_ = -den_;
        for (auto& c : num_) c = -c;
    }
    mpz_class g = den_;
    for (const auto& c : num_) {
        if (g == 1) break;
        if (c != 0) g = gcd(g, c);
    }
    if (g != 1) {
        for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }
    if (is_zero()) den_ = 1;
}

Cyclotomic Cyclotomic::from_int(std::int64_t v, std::int64_t order) {
    std::vector<mpz_class> num(static_cast<std::size_t>(euler_phi(order)));
    num[0] = static_cast<long>(v);
    return Cyclotomic(order, std::move(num), 1);
}

Cyclotomic Cyclotomic::from_rational(const mpq_class& v, std::int64_t order) {
    std::vector<mpz_class> num(static_cast<std::size_t>(euler_phi(order)));
    num[0] = v.get_num();
    return Cyclotomic(order, std::move(num), v.get_den());
}

Cyclotomic Cyclotomic::root(std::int64_t e, std::int64_t order) {
    std::vector<mpz_class> poly(static_cast<std::size_t>(order));
    poly[mod(e, order)] = 1;
    reduce_mod_phi(poly, order);
    return Cyclotomic(order, std::move(poly), 1);
}

Cyclotomic Cyclotomic::from_qz(const QZ& x) { return root(x.num(), x.den()); }

Cyclotomic Cyclotomic::from_group_ring(std::span<const std::int64_t> counts) {
    const auto n = static_cast<std::int64_t>(counts.size());
    if (n == 0) throw DomainError("from_group_ring: empty vector");
    std::vector<mpz_class> poly(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) poly[i] = static_cast<long>(counts[i]);
    reduce_mod_phi(poly, n);
    return Cyclotomic(n, std::move(poly), 1);
}

Cyclotomic Cyclotomic::sqrt_prime(std::uint32_t p) {
    if (p < 3 || !is_prime(p)) throw DomainError("sqrt_prime: odd prime required");
    // Quadratic Gauss sum g = sum (x/p) zeta_p^x; g^2 = (-1/p) p.
    std::vector<std::int64_t> counts(4 * static_cast<std::size_t>(p), 0);
    for (std::uint32_t x = 1; x < p; ++x) {
        const std::uint64_t sq = static_cast<std::uint64_t>(x) * x % p;
        counts[4 * sq] += 1;
    }
    for (std::uint32_t x = 1; x < p; ++x) counts[4 * x] -= 1;
    Cyclotomic g = from_group_ring(counts);
    if (p % 4 == 1) return g;
    // g = i sqrt(p), so sqrt(p) = -i g.
    return -(root(p, 4 * p) * g);
}

bool Cyclotomic::is_zero() const {
    for (const auto& c : num_)
        if (c != 0) return false;
    return true;
}

bool Cyclotomic::is_rational() const {
    for (std::size_t i = 1; i < num_.size(); ++i)
        if (num_[i] != 0) return false;
    return true;
}

mpq_class Cyclotomic::rational_value() const {
    if (!is_rational()) throw DomainError("Cyclotomic::rational_value: not rational");
    mpq_class r(num_[0], den_);
    r.canonicalize();
    return r;
}

Cyclotomic Cyclotomic::lift(std::int64_t m) const {
    if (m % order_ != 0) throw DomainError("Cyclotomic::lift: target order is not a multiple");
    if (m == order_) return *this;
    const std::int64_t step = m / order_;
    std::vector<mpz_class> poly(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < num_.size(); ++i) poly[i * step] = num_[i];
    reduce_mod_phi(poly, m);
    return Cyclotomic(m, std::move(poly), den_);
}

Cyclotomic Cyclotomic::conj() const {
    std::vector<mpz_class> poly(static_cast<std::size_t>(order_));
    for (std::size_t i = 0; i < num_.size(); ++i) poly[mod(-static_cast<std::int64_t>(i), order_)] += num_[i];
    reduce_mod_phi(poly, order_);
    return Cyclotomic(order_, std::move(poly), den_);
}

Cyclotomic Cyclotomic::operator+(const Cyclotomic& o) const {
    if (order_ != o.order_) {
        const std::int64_t l = lcm64(order_, o.order_);
        return lift(l) + o.lift(l);
    }
    std::vector<mpz_class> r(num_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = num_[i] * o.den_ + o.num_[i] * den_;
    return Cyclotomic(order_, std::move(r), den_ * o.den_);
}

Cyclotomic Cyclotomic::operator-() const {
    Cyclotomic r = *this;
    for (auto& c : r.num_) c = -c;
    return r;
}

Cyclotomic Cyclotomic::operator-(const Cyclotomic& o) const { return *this + (-o); }

Cyclotomic Cyclotomic::operator*(const Cyclotomic& o) const {
    if (order_ != o.order_) {
        const std::int64_t l = lcm64(order_, o.order_);
        return lift(l) * o.lift(l);
    }
    if (small() && o.small()) return mul_small(o);
    return mul_general(o);
}

Cyclotomic Cyclotomic::mul_general(const Cyclotomic& o) const {
    std::vector<mpz_class> r(2 * num_.size() - 1);
    for (std::size_t i = 0; i < num_.size(); ++i) {
        if (num_[i] == 0) continue;
        for (std::size_t j = 0; j < o.num_.size(); ++j)
            if (o.num_[j] != 0) r[i + j] += num_[i] * o.num_[j];
    }
    reduce_mod_phi(r, order_);
    return Cyclotomic(order_, std::move(r), den_ * o.den_);
}

Cyclotomic Cyclotomic::scaled(const mpq_class& s) const {
    Cyclotomic r = *this;
    for (auto& c : r.num_) c *= s.get_num();
    r.den_ *= s.get_den();
    r.normalize();
    return r;
}

bool Cyclotomic::small() const {
    for (const auto& c : num_)
        if (!c.fits_sint_p()) return false;
    return true;
}

// Product of two elements with int-sized numerators, reduced in 128-bit
// arithmetic; coefficients of Phi_N for the orders used here are tiny.
Cyclotomic Cyclotomic::mul_small(const Cyclotomic& o) const {
    const std::size_t d = num_.size();
    std::vector<__int128> r(2 * d - 1, 0);
    std::vector<long> a(d), b(d);
    for (std::size_t i = 0; i < d; ++i) {
        a[i] = num_[i].get_si();
        b[i] = o.num_[i].get_si();
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < d; ++j) r[i + j] += static_cast<__int128>(a[i]) * b[j];
    }
    const auto& phi = cyclotomic_polynomial(order_);
    for (std::size_t top = r.size(); top-- > d;) {
        if (r[top] == 0) continue;
        const __int128 c = r[top];
        constexpr __int128 kLimit = static_cast<__int128>(1) << 100;
        if (c > kLimit || c < -kLimit) return mul_general(o);
        for (std::size_t i = 0; i < d; ++i)
            if (phi[i] != 0) r[top - d + i] -= c * phi[i];
        r[top] = 0;
    }
    std::vector<mpz_class> out(d);
    for (std::size_t i = 0; i < d; ++i) {
        const __int128 v = r[i];
        if (v >= INT64_MIN && v <= INT64_MAX) {
            out[i] = static_cast<long>(v);
        } else {
            const bool neg = v < 0;
            const unsigned __int128 m = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
            mpz_class hi = static_cast<unsigned long>(m >> 64);
            hi <<= 64;
            hi += static_cast<unsigned long>(m & 0xffffffffffffffffULL);
            out[i] = neg ? mpz_class(-hi) : hi;
        }
    }
    return Cyclotomic(order_, std::move(out), den_ * o.den_);
}

bool Cyclotomic::operator==(const Cyclotomic& o) const {
    if (order_ != o.order_) {
        const std::int64_t l = lcm64(order_, o.order_);
        return lift(l) == o.lift(l);
    }
    return den_ == o.den_ && num_ == o.num_;
}

Cyclotomic Cyclotomic::inverse() const {
    if (is_zero()) throw DomainError("Cyclotomic::inverse: zero");
    // Solve (multiplication by this) * x = 1 over Q by Gaussian elimination.
    const std::size_t d = num_.size();
    std::vector<std::vector<mpq_class>> a(d, std::vector<mpq_class>(d + 1));
    Cyclotomic basis = from_int(1, order_);
    const Cyclotomic zeta = root(1, order_);
    for (std::size_t j = 0; j < d; ++j) {
        const Cyclotomic col = *this * basis;
        for (std::size_t i = 0; i < d; ++i) a[i][j] = mpq_class(col.num_[i], col.den_);
        basis = basis * zeta;
    }
    for (auto& row : a) row[d] = 0;
    a[0][d] = 1;
    for (auto& row : a)
        for (auto& v : row) v.canonicalize();
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t piv = c;
        while (a[piv][c] == 0) ++piv;
        std::swap(a[piv], a[c]);
        const mpq_class inv = 1 / a[c][c];
        for (auto& v : a[c]) v *= inv;
        for (std::size_t r = 0; r < d; ++r) {
            if (r == c || a[r][c] == 0) continue;
            const mpq_class f = a[r][c];
            for (std::size_t k = c; k <= d; ++k) a[r][k] -= f * a[c][k];
        }
    }
    mpz_class den = 1;
    for (std::size_t i = 0; i < d; ++i) den = lcm(den, a[i][d].get_den());
    std::vector<mpz_class> num(d);
    for (std::size_t i = 0; i < d; ++i) num[i] = a[i][d].get_num() * (den / a[i][d].get_den());
    return Cyclotomic(order_, std::move(num), den);
}

Cyclotomic Cyclotomic::pow(std::int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    Cyclotomic r = from_int(1, order_);
    Cyclotomic b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

std::optional<QZ> Cyclotomic::as_root_of_unity() const {
    if (den_ != 1) return std::nullopt;
    // Roots of unity in Q(zeta_N) are the +-zeta_N^k.
    const std::int64_t n = order_ % 2 == 0 ? order_ : 2 * order_;
    const Cyclotomic self = lift(n);
    for (std::int64_t k = 0; k < n; ++k)
        if (root(k, n) == self) return QZ(k, n);
    return std::nullopt;
}

std::complex<double> Cyclotomic::to_complex() const {
    std::complex<long double> acc = 0;
    const long double d = den_.get_d();
    for (std::size_t i = 0; i < num_.size(); ++i) {
        if (num_[i] == 0) continue;
        const long double ang = 2 * std::numbers::pi_v<long double> * static_cast<long double>(i) / order_;
        acc += std::polar<long double>(num_[i].get_d() / d, ang);
    }
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

std::string Cyclotomic::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < num_.size(); ++i) {
        if (num_[i] == 0) continue;
        if (!first) os << (num_[i] > 0 ? "+" : "");
        first = false;
        os << num_[i];
        if (i > 0) os << "*z" << order_ << "^" << i;
    }
    if (first) os << "0";
    if (den_ != 1) return "(" + os.str() + ")/" + den_.get_str();
    return os.str();
}

EpsilonValue EpsilonValue::operator*(const EpsilonValue& o) const {
    return {unit_ * o.unit_, half_power_ + o.half_power_, p_ ? p_ : o.p_};
}

EpsilonValue EpsilonValue::inverse() const { return {unit_.inverse(), -half_power_, p_}; }

EpsilonValue EpsilonValue::pow(std::int64_t e) const {
    return {unit_.pow(e), half_power_ * e, p_};
}

Cyclotomic EpsilonValue::to_cyclotomic() const {
    if (half_power_ == 0) return unit_;
    const std::int64_t h = half_power_ < 0 ? -half_power_ : half_power_;
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), p_, static_cast<unsigned long>(h / 2));
    Cyclotomic f = Cyclotomic::from_rational(mpq_class(pk));
    if (h % 2) f = f * Cyclotomic::sqrt_prime(p_);
    return half_power_ > 0 ? unit_ * f : unit_ / f;
}

bool EpsilonValue::has_unit_modulus() const {
    const Cyclotomic n = unit_ * unit_.conj();
    if (!n.is_rational()) return false;
    mpq_class want = 1;
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), p_, static_cast<unsigned long>(half_power_ < 0 ? -half_power_ : half_power_));
    want = half_power_ >= 0 ? mpq_class(1, pk) : mpq_class(pk);
    want.canonicalize();
    return n.rational_value() == want;
}

std::complex<double> EpsilonValue::to_complex() const {
    return unit_.to_complex() * std::pow(static_cast<double>(p_), static_cast<double>(half_power_) / 2);
}

std::string EpsilonValue::to_string() const {
    if (auto r = as_root_of_unity()) return "e(" + r->to_string() + ")";
    return "[" + unit_.to_string() + "]*p^(" + std::to_string(half_power_) + "/2)";
}

}  // namespace tlw
