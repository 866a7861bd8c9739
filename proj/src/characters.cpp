#include "tlw/characters.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "tlw/errors.hpp"

namespace tlw {

using Elem = FiniteField::Elem;

namespace {

constexpr std::int64_t kProbePrecision = 4;
constexpr std::int64_t kTwistPrecision = 10;

std::int64_t units(const Tower& t, FieldId k) { return static_cast<std::int64_t>(t.residue_units(k)); }

// 1 + pi_K^j * b as an element of K.
TruncatedElement one_plus(const Tower& t, FieldId k, std::int64_t j, Elem b) {
    Series s{0, std::vector<Elem>(static_cast<std::size_t>(kProbePrecision + j), 0)};
    s.coeffs[0] = 1;
    s.coeffs[static_cast<std::size_t>(j)] = b;
    return t.make(k, std::move(s));
}

void check_field(const MultChar& x, const MultChar& y) {
    if (x.field != y.field) throw DomainError("characters of different fields");
}

}  // namespace

MultChar make_char(const Tower& t, FieldId k, QZ pi_value, std::int64_t a, std::optional<Elem> beta) {
    const std::int64_t u = units(t, k);
    a %= u;
    if (a < 0) a += u;
    if (beta && *beta == 0) beta.reset();
    if (beta && !t.in_residue(k, *beta)) throw DomainError("beta outside the residue field");
    return {k, pi_value, static_cast<std::uint64_t>(a), beta};
}

MultChar trivial_char(FieldId k) { return {k, QZ(), 0, std::nullopt}; }

MultChar unramified_char(FieldId k, QZ pi_value) { return {k, pi_value, 0, std::nullopt}; }

QZ unit_value(const Tower& t, const MultChar& chi, Elem u0, Elem w) {
    const std::int64_t u = units(t, chi.field);
    const auto l = static_cast<std::int64_t>(t.residue_log(chi.field, u0));
    QZ r(static_cast<std::int64_t>(static_cast<__int128>(chi.a) * l % u), u);
    if (chi.beta && w != 0)
        r += QZ(t.residue_trace(chi.field, t.amb().mul(*chi.beta, w)), t.p());
    return r;
}

QZ evaluate(const Tower& t, const MultChar& chi, const TruncatedElement& x) {
    if (x.field() != chi.field) throw DomainError("character evaluated outside its field");
    const std::int64_t v = x.valuation();
    const Elem c0 = x.leading();
    Elem w = 0;
    if (chi.beta) {
        if (x.relative_precision() < 2) throw PrecisionError("conductor-2 character needs two significant coefficients");
        w = t.amb().div(x.coeff(v + 1), c0);
    }
    return chi.pi_value.times(v) + unit_value(t, chi, c0, w);
}

QZ evaluate(const Tower& t, const MultChar& chi, const TameUnitClass& x) {
    if (x.field != chi.field) throw DomainError("character evaluated outside its field");
    if (chi.beta) throw PrecisionError("conductor-2 character is not determined by a tame class");
    const std::int64_t u = units(t, chi.field);
    return chi.pi_value.times(x.valuation) +
           QZ(static_cast<std::int64_t>(static_cast<__int128>(chi.a) * x.residue_log % u), u);
}

MultChar multiply(const Tower& t, const MultChar& x, const MultChar& y) {
    check_field(x, y);
    std::optional<Elem> beta;
    if (x.beta || y.beta) beta = t.amb().add(x.beta.value_or(0), y.beta.value_or(0));
    return make_char(t, x.field, x.pi_value + y.pi_value, static_cast<std::int64_t>((x.a + y.a) % t.residue_units(x.field)),
                     beta);
}

MultChar inverse(const Tower& t, const MultChar& x) {
    std::optional<Elem> beta;
    if (x.beta) beta = t.amb().neg(*x.beta);
    return make_char(t, x.field, -x.pi_value, -static_cast<std::int64_t>(x.a), beta);
}

MultChar power(const Tower& t, const MultChar& x, std::int64_t k) {
    std::optional<Elem> beta;
    if (x.beta) {
        const std::int64_t kp = ((k % t.p()) + t.p()) % t.p();
        beta = t.amb().mul(*x.beta, t.amb().from_int(kp));
    }
    const std::int64_t u = units(t, x.field);
    const auto a = static_cast<std::int64_t>(static_cast<__int128>(x.a) * (((k % u) + u) % u) % u);
    return make_char(t, x.field, x.pi_value.times(k), a, beta);
}

MultChar character_from_values(const Tower& t, FieldId k, const std::function<QZ(const TruncatedElement&)>& f) {
    const FiniteField& A = t.amb();
    const QZ pi = f(t.uniformizer(k, kProbePrecision));
    const Elem g = t.residue_generator(k);
    const QZ on_g = f(t.constant(k, g, kProbePrecision));
    if (t.residue_units(k) % static_cast<std::uint64_t>(on_g.den()) != 0)
        throw ConsistencyError("value on the residue generator has order not dividing |k^*|");
    const std::int64_t a = on_g.exponent_mod(units(t, k));

    const std::uint32_t deg = t.residue_prime_degree(k);
    std::vector<Elem> basis(deg);
    std::vector<std::uint32_t> vals(deg);
    bool depth_one = false;
    Elem b = 1;
    for (std::uint32_t i = 0; i < deg; ++i) {
        basis[i] = b;
        const QZ v = f(one_plus(t, k, 1, b));
        if (t.p() % static_cast<std::uint64_t>(v.den()) != 0) throw ConsistencyError("value on 1+P is not a p-th root of unity");
        vals[i] = static_cast<std::uint32_t>(v.exponent_mod(t.p()));
        depth_one = depth_one || vals[i] != 0;
        b = A.mul(b, g);
    }
    for (std::int64_t j : {2, 3})
        for (Elem bi : basis)
            if (!f(one_plus(t, k, j, bi)).is_zero())
                throw ConductorCapError("character of " + std::string(field_label(k)) + " has conductor above 2");

    std::optional<Elem> beta;
    if (depth_one) {
        Elem c = 1;
        for (std::uint64_t e = 0; e < t.residue_units(k) && !beta; ++e, c = A.mul(c, g)) {
            bool ok = true;
            for (std::uint32_t i = 0; i < deg && ok; ++i) ok = t.residue_trace(k, A.mul(c, basis[i])) == vals[i];
            if (ok) beta = c;
        }
        if (!beta) throw ConsistencyError("no residue element represents the depth-one part");
    }
    return make_char(t, k, pi, a, beta);
}

MultChar compose_with_norm(const Tower& t, const MultChar& chi, FieldId k_sup) {
    if (chi.field == k_sup) return chi;
    const FieldId k = chi.field;
    if (!t.contains(k, k_sup)) throw DomainError("compose_with_norm: fields not comparable");
    return character_from_values(t, k_sup, [&](const TruncatedElement& x) { return evaluate(t, chi, t.norm(x, k)); });
}

MultChar restrict_char(const Tower& t, const MultChar& chi, FieldId k_sub) {
    if (chi.field == k_sub) return chi;
    const FieldId k = chi.field;
    if (!t.contains(k_sub, k)) throw DomainError("restrict: fields not comparable");
    return character_from_values(t, k_sub, [&](const TruncatedElement& x) { return evaluate(t, chi, t.coerce(x, k)); });
}

MultChar galois_conjugate(const Tower& t, const MultChar& chi, const GaloisElt& g) {
    return character_from_values(t, chi.field, [&](const TruncatedElement& x) { return evaluate(t, chi, t.apply(g, x)); });
}

bool is_regular(const Tower& t, const MultChar& chi) {
    if (!chi.tame()) throw DomainError("is_regular: character is not tame");
    const std::uint64_t u = t.residue_units(chi.field);
    std::uint64_t x = chi.a;
    std::uint32_t orbit = 0;
    do {
        x = static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * t.q() % u);
        ++orbit;
    } while (x != chi.a);
    return orbit == t.degree(FieldId::F, chi.field);
}

std::vector<MultChar> enumerate_tame(const Tower& t, FieldId k, std::uint64_t pi_order) {
    std::vector<MultChar> out;
    const std::int64_t u = units(t, k);
    for (std::uint64_t i = 0; i < pi_order; ++i)
        for (std::int64_t a = 0; a < u; ++a)
            out.push_back(make_char(t, k, QZ(static_cast<std::int64_t>(i), static_cast<std::int64_t>(pi_order)), a));
    return out;
}

std::vector<MultChar> enumerate_admissible_pairs(const Tower& t, std::uint64_t pi_order) {
    const std::uint64_t u = t.residue_units(FieldId::L);
    std::vector<std::uint64_t> reps;
    for (std::uint64_t a = 0; a < u; ++a) {
        std::uint64_t x = a, lo = a;
        std::uint32_t orbit = 0;
        do {
            x = static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * t.q() % u);
            lo = std::min(lo, x);
            ++orbit;
        } while (x != a);
        if (orbit == t.n() && lo == a) reps.push_back(a);
    }
    std::vector<MultChar> out;
    for (std::uint64_t i = 0; i < pi_order; ++i)
        for (std::uint64_t a : reps)
            out.push_back(make_char(t, FieldId::L, QZ(static_cast<std::int64_t>(i), static_cast<std::int64_t>(pi_order)),
                                    static_cast<std::int64_t>(a)));
    return out;
}

std::vector<MultChar> galois_characters(const Tower& t, FieldId k, FieldId k_sup) {
    const std::int64_t d = t.degree(k, k_sup);
    const std::int64_t u = units(t, k);
    const TruncatedElement n_pi = t.norm(t.uniformizer(k_sup, kProbePrecision), k);
    const TruncatedElement n_g = t.norm(t.constant(k_sup, t.residue_generator(k_sup), kProbePrecision), k);
    const std::int64_t step = u / std::gcd(u, d);
    std::vector<MultChar> out;
    for (std::int64_t i = 0; i < d; ++i)
        for (std::int64_t a = 0; a < u; a += step) {
            const MultChar c = make_char(t, k, QZ(i, d), a);
            if (evaluate(t, c, n_pi).is_zero() && evaluate(t, c, n_g).is_zero()) out.push_back(c);
        }
    if (static_cast<std::int64_t>(out.size()) != d)
        throw ConsistencyError("norm index of " + std::string(field_label(k_sup)) + "/" + std::string(field_label(k)) +
                               " is " + std::to_string(out.size()) + ", expected " + std::to_string(d));
    return out;
}

MultChar omega(const Tower& t, FieldId k, FieldId k_sup) {
    MultChar acc = trivial_char(k);
    for (const MultChar& c : galois_characters(t, k, k_sup)) acc = multiply(t, acc, c);
    return acc;
}

MultChar omega_quadratic(const Tower& t, FieldId k, FieldId k_sup) {
    if (t.degree(k, k_sup) != 2) throw DomainError("omega_quadratic: extension is not quadratic");
    const MultChar w = omega(t, k, k_sup);
    if (w == trivial_char(k) || power(t, w, 2) != trivial_char(k)) throw ConsistencyError("omega is not of order 2");
    return w;
}

nlohmann::json to_json(const Tower& t, const MultChar& chi) {
    nlohmann::json j;
    j["field"] = std::string(field_label(chi.field));
    j["pi_value"] = chi.pi_value.to_string();
    j["a"] = chi.a;
    if (chi.beta)
        j["beta_log"] = t.residue_log(chi.field, *chi.beta);
    else
        j["beta_log"] = nullptr;
    return j;
}

MultChar char_from_json(const Tower& t, const nlohmann::json& j) {
    try {
        const FieldId k = parse_field_label(j.at("field").get<std::string>());
        std::optional<Elem> beta;
        if (j.contains("beta_log") && !j.at("beta_log").is_null())
            beta = t.amb().pow(t.residue_generator(k), j.at("beta_log").get<std::int64_t>());
        return make_char(t, k, QZ::parse(j.at("pi_value").get<std::string>()), j.at("a").get<std::int64_t>(), beta);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed character: ") + e.what());
    }
}

std::string to_string(const Tower& t, const MultChar& chi) { return to_json(t, chi).dump(); }

// -------------------------------------------------------------- additive

AddChar::AddChar(TruncatedElement twist) : twist_(std::move(twist)), tables_(std::make_shared<Tables>()) {
    const auto e = static_cast<std::int64_t>(twist_.tower().desc(twist_.field()).e);
    level_ = 1 - e - twist_.valuation();
}

AddChar AddChar::standard(TowerPtr t, FieldId k) { return AddChar(t->one(k, kTwistPrecision)); }

AddChar AddChar::twisted(const TruncatedElement& a) const { return AddChar(twist_ * a); }

AddChar AddChar::lift(FieldId k_sup) const { return AddChar(tower().coerce(twist_, k_sup)); }

AddChar AddChar::inverse() const { return AddChar(-twist_); }

AddChar AddChar::conjugate(const GaloisElt& g) const {
    const Tower& t = tower();
    return AddChar(t.apply(t.invert(g), twist_));
}

std::uint32_t AddChar::term(std::int64_t j, Elem c) const {
    if (c == 0 || j >= level_) return 0;
    const Tower& t = tower();
    std::lock_guard lock(tables_->mu);
    auto it = tables_->by_level.find(j);
    if (it == tables_->by_level.end()) {
        std::vector<std::uint32_t> tab(t.amb().size(), 0);
        const FieldId k = field();
        const Elem g = t.residue_generator(k);
        const std::int64_t prec = std::max<std::int64_t>(kTwistPrecision, level_ - j + 2);
        Elem x = 1;
        for (std::uint64_t e = 0; e < t.residue_units(k); ++e, x = t.amb().mul(x, g)) {
            Series s{j, std::vector<Elem>(static_cast<std::size_t>(prec), 0)};
            s.coeffs[0] = x;
            const TruncatedElement tr = t.trace(twist_ * t.make(k, std::move(s)), FieldId::F);
            tab[x] = t.residue_trace(FieldId::F, tr.coeff(-1));
        }
        it = tables_->by_level.emplace(j, std::move(tab)).first;
    }
    return it->second[c];
}

QZ AddChar::value(const TruncatedElement& x) const {
    if (x.field() != field()) throw DomainError("additive character evaluated outside its field");
    const Series& s = x.series();
    if (s.abs_precision() < level_ && s.val < level_)
        throw PrecisionError("element known only to O(pi^" + std::to_string(s.abs_precision()) + "), psi has level " +
                             std::to_string(level_));
    std::uint64_t acc = 0;
    for (std::int64_t k = s.val; k < level_; ++k) acc += term(k, x.coeff(k));
    return QZ(static_cast<std::int64_t>(acc % tower().p()), tower().p());
}

}  // namespace tlw
