#include "tlw/local_fields.hpp"

#include <sstream>

#include "tlw/errors.hpp"

namespace tlw {

using Elem = FiniteField::Elem;

namespace {

constexpr std::array<std::string_view, 7> kLabels = {"F", "L0", "L", "E", "M", "L1", "L2"};

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

void strip(Series& s) {
    std::size_t lead = 0;
    while (lead < s.coeffs.size() && s.coeffs[lead] == 0) ++lead;
    if (lead == 0) return;
    s.val += static_cast<std::int64_t>(lead);
    s.coeffs.erase(s.coeffs.begin(), s.coeffs.begin() + static_cast<std::ptrdiff_t>(lead));
}

Elem coeff_at(const Series& s, std::int64_t k) {
    if (k < s.val) return 0;
    return s.coeffs[static_cast<std::size_t>(k - s.val)];
}

}  // namespace

std::uint64_t ipow64(std::uint64_t b, std::uint32_t e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

std::string_view field_label(FieldId id) { return kLabels[static_cast<std::size_t>(id)]; }

FieldId parse_field_label(std::string_view s) {
    for (std::size_t i = 0; i < kLabels.size(); ++i)
        if (kLabels[i] == s) return static_cast<FieldId>(i);
    throw DomainError("unknown field label '" + std::string(s) + "'");
}

// ---------------------------------------------------------------- elements

TruncatedElement::TruncatedElement(TowerPtr tower, FieldId field, Series s)
    : tower_(std::move(tower)), field_(field), s_(std::move(s)) {
    strip(s_);
}

std::int64_t TruncatedElement::valuation() const {
    if (is_zero()) throw PrecisionError("valuation of an element known only to be O(pi^" + std::to_string(s_.val) + ")");
    return s_.val;
}

Elem TruncatedElement::coeff(std::int64_t k) const {
    if (k >= s_.abs_precision())
        throw PrecisionError("coefficient " + std::to_string(k) + " beyond precision " +
                             std::to_string(s_.abs_precision()));
    return coeff_at(s_, k);
}

Elem TruncatedElement::leading() const {
    if (is_zero()) throw PrecisionError("leading coefficient of an unresolved zero");
    return s_.coeffs[0];
}

void TruncatedElement::check_same(const TruncatedElement& o) const {
    if (tower_ != o.tower_ || field_ != o.field_)
        throw DomainError("arithmetic between elements of different fields");
}

TruncatedElement TruncatedElement::operator+(const TruncatedElement& o) const {
    check_same(o);
    return {tower_, field_, tower_->series_add(s_, o.s_)};
}

TruncatedElement TruncatedElement::operator-() const { return {tower_, field_, tower_->series_neg(s_)}; }

TruncatedElement TruncatedElement::operator-(const TruncatedElement& o) const { return *this + (-o); }

TruncatedElement TruncatedElement::operator*(const TruncatedElement& o) const {
    check_same(o);
    return {tower_, field_, tower_->series_mul(s_, o.s_)};
}

TruncatedElement TruncatedElement::inverse() const { return {tower_, field_, tower_->series_inv(s_)}; }

TruncatedElement TruncatedElement::pow(std::int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    TruncatedElement r = tower_->one(field_, relative_precision() > 0 ? relative_precision() : 1);
    TruncatedElement b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

std::string TruncatedElement::to_string() const {
    std::ostringstream os;
    os << field_label(field_) << "[";
    for (std::size_t i = 0; i < s_.coeffs.size(); ++i) {
        if (i) os << " ";
        os << s_.coeffs[i];
    }
    os << "]*pi^" << s_.val << "+O(pi^" << s_.abs_precision() << ")";
    return os.str();
}

// ------------------------------------------------------------------- tower

TowerPtr Tower::build(std::uint32_t p, std::uint64_t q, std::uint32_t m, std::uint32_t e_E) {
    if (p == 2 || !is_prime(p)) throw DomainError("residue characteristic must be an odd prime, got " + std::to_string(p));
    if (q % 2 == 0) throw DomainError("q must be odd");
    std::uint32_t r = 0;
    for (std::uint64_t x = q; x > 1; x /= p) {
        if (x % p != 0) throw DomainError("q = " + std::to_string(q) + " is not a power of p = " + std::to_string(p));
        ++r;
    }
    if (r == 0) throw DomainError("q must be at least p");
    if (m < 2) throw DomainError("m must be at least 2 (n = 2m >= 4)");
    if (e_E != 1 && e_E != 2) throw DomainError("e(E/F) must be 1 or 2");

    auto t = std::shared_ptr<Tower>(new Tower());
    t->p_ = p;
    t->q_ = q;
    t->r_ = r;
    t->m_ = m;
    t->e_E_ = e_E;
    t->ambient_e_ = e_E;
    t->amb_ = FiniteField::get(p, r * 2 * m);
    const std::uint32_t n = 2 * m;
    auto set = [&](FieldId id, std::uint32_t f, std::uint32_t e) {
        t->desc_[static_cast<std::size_t>(id)] = {id, f, e};
        t->fields_.push_back(id);
    };
    set(FieldId::F, 1, 1);
    if (e_E == 1) {
        set(FieldId::E, 2, 1);
        set(FieldId::L0, m, 1);
        set(FieldId::L, n, 1);
    } else {
        set(FieldId::E, 1, 2);
        set(FieldId::L0, m, 1);
        set(FieldId::L, n, 1);
        set(FieldId::L1, m, 2);
        set(FieldId::L2, m, 2);
        set(FieldId::M, n, 2);
    }
    return t;
}

bool Tower::has(FieldId k) const {
    for (FieldId f : fields_)
        if (f == k) return true;
    return false;
}

const LocalFieldDesc& Tower::desc(FieldId k) const {
    if (!has(k)) throw DomainError("field " + std::string(field_label(k)) + " is not in this tower");
    return desc_[static_cast<std::size_t>(k)];
}

bool Tower::contains(FieldId sub, FieldId sup) const {
    desc(sub);
    desc(sup);
    for (const GaloisElt& g : galois_group())
        if (fixes(g, sup) && !fixes(g, sub)) return false;
    return true;
}

std::uint32_t Tower::degree(FieldId sub, FieldId sup) const {
    if (!contains(sub, sup)) throw DomainError(std::string(field_label(sub)) + " is not a subfield of " +
                                               std::string(field_label(sup)));
    const auto& a = desc(sub);
    const auto& b = desc(sup);
    return (b.f / a.f) * (b.e / a.e);
}

std::uint64_t Tower::residue_size(FieldId k) const { return ipow64(q_, desc(k).f); }

Elem Tower::residue_generator(FieldId k) const {
    return amb_->exp(static_cast<std::int64_t>(amb_->unit_order() / residue_units(k)));
}

bool Tower::in_residue(FieldId k, Elem c) const { return amb_->in_subfield(c, residue_prime_degree(k)); }

std::uint64_t Tower::residue_log(FieldId k, Elem c) const {
    if (c == 0) throw DomainError("residue_log of zero");
    const std::uint64_t step = amb_->unit_order() / residue_units(k);
    const std::uint64_t l = amb_->log(c);
    if (l % step != 0) throw DomainError("residue element outside k_" + std::string(field_label(k)));
    return l / step;
}

std::uint32_t Tower::residue_trace(FieldId k, Elem c) const {
    return amb_->trace_to_prime(c, residue_prime_degree(k));
}

std::vector<GaloisElt> Tower::galois_group() const {
    std::vector<GaloisElt> g;
    for (std::uint32_t eps = 0; eps < ambient_e_; ++eps)
        for (std::uint32_t j = 0; j < n(); ++j) g.push_back({j, eps});
    return g;
}

std::uint32_t Tower::e_rel(FieldId k) const { return ambient_e_ / desc(k).e; }

Elem Tower::uniformizer_unit(FieldId k) const { return k == FieldId::L2 ? v_residue() : 1; }

Elem Tower::v_residue() const { return amb_->exp(static_cast<std::int64_t>((ipow64(q_, m_) + 1) / 2)); }

bool Tower::fixes(const GaloisElt& g, FieldId k) const {
    const auto& d = desc(k);
    if (g.j % d.f != 0) return false;
    const Elem u = uniformizer_unit(k);
    Elem gu = amb_->frobenius(u, static_cast<std::int64_t>(g.j) * r_);
    if (g.eps && e_rel(k) % 2 == 1) gu = amb_->neg(gu);
    return gu == u;
}

GaloisElt Tower::compose(const GaloisElt& a, const GaloisElt& b) const {
    return {(a.j + b.j) % n(), (a.eps + b.eps) % ambient_e_};
}

GaloisElt Tower::invert(const GaloisElt& g) const { return {(n() - g.j) % n(), (ambient_e_ - g.eps) % ambient_e_}; }

std::vector<GaloisElt> Tower::relative_group(FieldId k, FieldId k_sup) const {
    if (!contains(k, k_sup))
        throw DomainError(std::string(field_label(k)) + " is not a subfield of " + std::string(field_label(k_sup)));
    std::vector<GaloisElt> reps;
    for (const GaloisElt& g : galois_group()) {
        if (!fixes(g, k)) continue;
        bool seen = false;
        for (const GaloisElt& h : reps)
            if (fixes(compose(g, invert(h)), k_sup)) {
                seen = true;
                break;
            }
        if (!seen) reps.push_back(g);
    }
    return reps;
}

TruncatedElement Tower::make(FieldId k, Series s) const {
    for (Elem c : s.coeffs)
        if (!in_residue(k, c)) throw DomainError("coefficient outside the residue field of " + std::string(field_label(k)));
    return {shared_from_this(), k, std::move(s)};
}

TruncatedElement Tower::zero(FieldId k, std::int64_t abs_precision) const {
    return {shared_from_this(), k, Series{abs_precision, {}}};
}

TruncatedElement Tower::constant(FieldId k, Elem c, std::int64_t precision) const {
    if (c == 0) return zero(k, precision);
    Series s{0, std::vector<Elem>(static_cast<std::size_t>(precision), 0)};
    s.coeffs[0] = c;
    return make(k, std::move(s));
}

TruncatedElement Tower::uniformizer(FieldId k, std::int64_t precision) const {
    Series s{1, std::vector<Elem>(static_cast<std::size_t>(precision), 0)};
    s.coeffs[0] = 1;
    return {shared_from_this(), k, std::move(s)};
}

TruncatedElement Tower::teichmuller(const TameUnitClass& c, std::int64_t precision) const {
    Series s{c.valuation, std::vector<Elem>(static_cast<std::size_t>(precision), 0)};
    s.coeffs[0] = amb_->pow(residue_generator(c.field), static_cast<std::int64_t>(c.residue_log));
    return {shared_from_this(), c.field, std::move(s)};
}

TruncatedElement Tower::delta(std::int64_t precision) const {
    if (ramified()) return uniformizer(FieldId::E, precision);
    const Elem xi = residue_generator(FieldId::E);
    return constant(FieldId::E, amb_->pow(xi, static_cast<std::int64_t>((q_ + 1) / 2)), precision);
}

// ------------------------------------------------------------------ series

Series Tower::series_mul(const Series& a, const Series& b) const {
    const std::int64_t abs = std::min(a.val + b.abs_precision(), b.val + a.abs_precision());
    if (a.is_zero() || b.is_zero()) return {abs, {}};
    const std::int64_t val = a.val + b.val;
    const auto len = static_cast<std::size_t>(abs - val);
    Series r{val, std::vector<Elem>(len, 0)};
    for (std::size_t i = 0; i < len && i < a.coeffs.size(); ++i) {
        if (a.coeffs[i] == 0) continue;
        for (std::size_t j = 0; i + j < len && j < b.coeffs.size(); ++j)
            r.coeffs[i + j] = amb_->add(r.coeffs[i + j], amb_->mul(a.coeffs[i], b.coeffs[j]));
    }
    strip(r);
    return r;
}

Series Tower::series_add(const Series& a, const Series& b) const {
    const std::int64_t abs = std::min(a.abs_precision(), b.abs_precision());
    const std::int64_t start = std::min(a.val, b.val);
    if (start >= abs) return {abs, {}};
    Series r{start, std::vector<Elem>(static_cast<std::size_t>(abs - start), 0)};
    for (std::int64_t k = start; k < abs; ++k) r.coeffs[static_cast<std::size_t>(k - start)] = amb_->add(coeff_at(a, k), coeff_at(b, k));
    strip(r);
    return r;
}

Series Tower::series_neg(const Series& a) const {
    Series r = a;
    for (auto& c : r.coeffs) c = amb_->neg(c);
    return r;
}

Series Tower::series_inv(const Series& a) const {
    if (a.is_zero()) throw PrecisionError("inverse of an element not known to be nonzero");
    const std::size_t len = a.coeffs.size();
    Series r{-a.val, std::vector<Elem>(len, 0)};
    const Elem b0 = amb_->inv(a.coeffs[0]);
    r.coeffs[0] = b0;
    for (std::size_t k = 1; k < len; ++k) {
        Elem acc = 0;
        for (std::size_t i = 1; i <= k; ++i) acc = amb_->add(acc, amb_->mul(a.coeffs[i], r.coeffs[k - i]));
        r.coeffs[k] = amb_->neg(amb_->mul(b0, acc));
    }
    return r;
}

// -------------------------------------------------------------------- maps

Series Tower::embed(const TruncatedElement& x) const {
    const std::int64_t e = e_rel(x.field());
    const Elem u = uniformizer_unit(x.field());
    const Series& s = x.series();
    if (s.is_zero()) return {s.val * e, {}};
    Series r{s.val * e, std::vector<Elem>(s.coeffs.size() * static_cast<std::size_t>(e), 0)};
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
        const std::int64_t k = s.val + static_cast<std::int64_t>(i);
        r.coeffs[i * static_cast<std::size_t>(e)] = u == 1 ? s.coeffs[i] : amb_->mul(s.coeffs[i], amb_->pow(u, k));
    }
    return r;
}

TruncatedElement Tower::project(const Series& s, FieldId k) const {
    const std::int64_t e = e_rel(k);
    const Elem u = uniformizer_unit(k);
    const std::int64_t abs = ceil_div(s.abs_precision(), e);
    if (s.is_zero()) return zero(k, abs);
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
        const std::int64_t idx = s.val + static_cast<std::int64_t>(i);
        if (s.coeffs[i] != 0 && (idx % e) != 0)
            throw ConsistencyError("element does not lie in " + std::string(field_label(k)));
    }
    const std::int64_t start = ceil_div(s.val, e);
    Series r{start, std::vector<Elem>(static_cast<std::size_t>(std::max<std::int64_t>(abs - start, 0)), 0)};
    for (std::int64_t kk = start; kk < abs; ++kk) {
        Elem c = coeff_at(s, kk * e);
        if (c != 0 && u != 1) c = amb_->mul(c, amb_->pow(u, -kk));
        if (!in_residue(k, c)) throw ConsistencyError("element does not lie in " + std::string(field_label(k)));
        r.coeffs[static_cast<std::size_t>(kk - start)] = c;
    }
    return {shared_from_this(), k, std::move(r)};
}

TruncatedElement Tower::coerce(const TruncatedElement& x, FieldId k) const {
    if (x.field() == k) return x;
    if (!contains(x.field(), k))
        throw DomainError(std::string(field_label(x.field())) + " is not a subfield of " + std::string(field_label(k)));
    return project(embed(x), k);
}

Series Tower::apply_ambient(const GaloisElt& g, const Series& s) const {
    Series r = s;
    for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
        Elem c = amb_->frobenius(r.coeffs[i], static_cast<std::int64_t>(g.j) * r_);
        const std::int64_t k = s.val + static_cast<std::int64_t>(i);
        if (g.eps && (k % 2 != 0)) c = amb_->neg(c);
        r.coeffs[i] = c;
    }
    return r;
}

TruncatedElement Tower::apply(const GaloisElt& g, const TruncatedElement& x) const {
    return project(apply_ambient(g, embed(x)), x.field());
}

TruncatedElement Tower::norm(const TruncatedElement& x, FieldId k) const {
    const Series ex = embed(x);
    Series acc;
    bool first = true;
    for (const GaloisElt& g : relative_group(k, x.field())) {
        Series c = apply_ambient(g, ex);
        acc = first ? c : series_mul(acc, c);
        first = false;
    }
    return project(acc, k);
}

TruncatedElement Tower::trace(const TruncatedElement& x, FieldId k) const {
    const Series ex = embed(x);
    Series acc;
    bool first = true;
    for (const GaloisElt& g : relative_group(k, x.field())) {
        Series c = apply_ambient(g, ex);
        acc = first ? c : series_add(acc, c);
        first = false;
    }
    return project(acc, k);
}

TameUnitClass Tower::tame_class(const TruncatedElement& x) const {
    if (x.is_zero()) throw DomainError("tame class of zero");
    return {x.field(), x.valuation(), residue_log(x.field(), x.leading())};
}

TameUnitClass jordan_of_unit_class(const TruncatedElement& x) { return x.tower().tame_class(x); }

}  // namespace tlw
