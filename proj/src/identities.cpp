#include "tlw/identities.hpp"

#include <functional>
#include <random>

#include "tlw/errors.hpp"
#include "tlw/parallel.hpp"

namespace tlw {

using Elem = FiniteField::Elem;
using nlohmann::json;

namespace {

constexpr std::int64_t kElementPrecision = 8;
// Conductor-2 characters are enumerated exhaustively on residue fields this small.
constexpr std::uint64_t kExhaustiveResidue = 9;

struct Case {
    int identity;
    json instance;
    std::function<std::pair<EpsilonValue, EpsilonValue>()> eval;
};

class Sampler {
public:
    Sampler(const Tower& t, std::uint64_t seed, std::uint64_t pi_order) : t_(t), rng_(seed), pi_order_(pi_order) {}

    std::uint64_t below(std::uint64_t n) { return rng_() % n; }

    Elem residue(FieldId k, bool nonzero) {
        const std::uint64_t u = t_.residue_units(k);
        const std::uint64_t i = below(nonzero ? u : u + 1);
        if (!nonzero && i == u) return 0;
        return t_.amb().pow(t_.residue_generator(k), static_cast<std::int64_t>(i));
    }

    QZ pi_value() { return QZ(static_cast<std::int64_t>(below(pi_order_)), static_cast<std::int64_t>(pi_order_)); }

    MultChar conductor_two(FieldId k) {
        const auto a = static_cast<std::int64_t>(below(t_.residue_units(k)));
        return make_char(t_, k, pi_value(), a, residue(k, true));
    }

    TruncatedElement element(FieldId k) {
        Series s{static_cast<std::int64_t>(below(3)) - 1, {}};
        s.coeffs.push_back(residue(k, true));
        while (static_cast<std::int64_t>(s.coeffs.size()) < kElementPrecision) s.coeffs.push_back(residue(k, false));
        return t_.make(k, std::move(s));
    }

private:
    const Tower& t_;
    std::mt19937_64 rng_;
    std::uint64_t pi_order_;
};

json tower_json(const Tower& t) { return {{"p", t.p()}, {"q", t.q()}, {"m", t.m()}, {"e_E", t.e_E()}}; }

std::string label(FieldId k) { return std::string(field_label(k)); }

bool stabilizes(const Tower& t, const GaloisElt& g, FieldId k) {
    for (const GaloisElt& h : t.galois_group())
        if (t.fixes(h, k) && !t.fixes(t.compose(t.compose(g, h), t.invert(g)), k)) return false;
    return true;
}

// Characters of K' trivial on K^*. Small residue fields are enumerated up to
// conductor 2; otherwise tame ones plus xi / xi^sigma for random conductor-2 xi.
std::vector<MultChar> trivial_on_subfield(const Tower& t, FieldId k, FieldId k_sup, std::uint64_t pi_order,
                                          std::size_t random, Sampler& rs) {
    std::vector<MultChar> out;
    const MultChar one = trivial_char(k);
    for (const MultChar& c : enumerate_tame(t, k_sup, pi_order))
        if (restrict_char(t, c, k) == one) out.push_back(c);
    if (t.residue_size(k_sup) <= kExhaustiveResidue) {
        const Elem g = t.residue_generator(k_sup);
        for (const MultChar& c : enumerate_tame(t, k_sup, pi_order)) {
            Elem b = 1;
            for (std::uint64_t i = 0; i < t.residue_units(k_sup); ++i, b = t.amb().mul(b, g)) {
                const MultChar c2 = make_char(t, k_sup, c.pi_value, static_cast<std::int64_t>(c.a), b);
                if (restrict_char(t, c2, k) == one) out.push_back(c2);
            }
        }
        return out;
    }
    GaloisElt sigma{};
    for (const GaloisElt& g : t.relative_group(k, k_sup))
        if (!t.fixes(g, k_sup)) sigma = g;
    for (std::size_t i = 0; i < random; ++i) {
        const MultChar xi = rs.conductor_two(k_sup);
        const MultChar c = multiply(t, xi, inverse(t, galois_conjugate(t, xi, sigma)));
        if (restrict_char(t, c, k) != one) throw ConsistencyError("chi / chi^sigma is not trivial on the subfield");
        out.push_back(c);
    }
    return out;
}

EpsilonValue root_value(const QZ& x, std::uint32_t p) { return EpsilonValue::root(x, p); }

class SuiteBuilder {
public:
    SuiteBuilder(const IdentitySuiteConfig& cfg, TowerPtr t, std::int64_t level, std::uint64_t seed)
        : cfg_(cfg), t_(std::move(t)), tw_(*t_), level_(level), rs_(tw_, seed, cfg.pi_order),
          ctx_(std::make_shared<EpsilonContext>(t_, psi_with_level(t_, level))), steps_(abelian_steps(tw_)) {}

    void build(int id, std::vector<Case>& out) {
        switch (id) {
            case 1: additivity(out); break;
            case 2: translation(out); break;
            case 3: galois_invariance(out); break;
            case 4: duality(out); break;
            case 5: unramified_twist(out); break;
            case 6: frohlich_queyrut(out); break;
            case 7: inductivity(out); break;
            case 8: unramified_lambda(out); break;
            case 9: tower_law(out); break;
            case 10: lambda_square(out); break;
            default: throw DomainError("unknown identity " + std::to_string(id));
        }
    }

private:
    json base(const std::string& what) const {
        return {{"tower", tower_json(tw_)}, {"psi_level", level_}, {"case", what}};
    }
    json char_json(const MultChar& c) const { return to_json(tw_, c); }
    std::uint32_t p() const { return tw_.p(); }

    // Exhaustive tame characters of every field, then random conductor-2 ones.
    std::vector<MultChar> characters() {
        std::vector<MultChar> out;
        for (FieldId k : tw_.fields())
            for (const MultChar& c : enumerate_tame(tw_, k, cfg_.pi_order)) out.push_back(c);
        const auto fs = tw_.fields();
        for (std::size_t i = 0; i < cfg_.random_cases; ++i) out.push_back(rs_.conductor_two(fs[i % fs.size()]));
        return out;
    }

    void additivity(std::vector<Case>& out) {
        std::vector<FieldId> over_f;
        for (const auto& [k, k_sup] : steps_)
            if (k == FieldId::F) over_f.push_back(k_sup);
        const auto fs = tw_.fields();
        for (std::size_t i = 0; i < cfg_.random_cases; ++i) {
            const FieldId k_sup = over_f[rs_.below(over_f.size())];
            const MultChar chi = (i % 2 == 0) ? rs_.conductor_two(FieldId::F)
                                              : make_char(tw_, FieldId::F, rs_.pi_value(),
                                                          static_cast<std::int64_t>(rs_.below(tw_.q() - 1)));
            const FieldId k2 = fs[rs_.below(fs.size())];
            const MonomialParam other{k2, (i % 3 == 0) ? rs_.conductor_two(k2)
                                                       : make_char(tw_, k2, rs_.pi_value(),
                                                                   static_cast<std::int64_t>(rs_.below(tw_.residue_units(k2))))};
            MultChar lifted;
            try {
                lifted = compose_with_norm(tw_, chi, k_sup);
            } catch (const ConductorCapError&) {
                continue;
            }
            ParamSum induced{{{k_sup, lifted}, other}};
            ParamSum split{{other}};
            for (const MultChar& xi : galois_characters(tw_, FieldId::F, k_sup))
                split.parts.push_back({FieldId::F, multiply(tw_, chi, xi)});
            json inst = base("Ind(chi o N) + phi' vs sum of chi xi + phi'");
            inst["inducing_field"] = label(k_sup);
            inst["chi"] = char_json(chi);
            inst["other_field"] = label(k2);
            inst["other_chi"] = char_json(other.chi);
            auto ctx = ctx_;
            out.push_back({1, inst, [ctx, induced, split] {
                               return std::pair{epsilon_param(*ctx, induced), epsilon_param(*ctx, split)};
                           }});
        }
    }

    void translation(std::vector<Case>& out) {
        for (const MultChar& c : characters()) {
            const TruncatedElement a = rs_.element(c.field);
            json inst = base("eps(chi, psi_a) = chi(a) eps(chi, psi)");
            inst["chi"] = char_json(c);
            inst["a"] = a.to_string();
            const AddChar psi = ctx_->psi(c.field);
            const std::uint32_t pp = p();
            const Tower& t = tw_;
            out.push_back({2, inst, [c, a, psi, pp, &t] {
                               return std::pair{epsilon_char(c, psi.twisted(a)),
                                                root_value(evaluate(t, c, a), pp) * epsilon_char(c, psi)};
                           }});
        }
    }

    void galois_invariance(std::vector<Case>& out) {
        std::map<FieldId, std::vector<GaloisElt>> autos;
        for (FieldId k : tw_.fields())
            for (const GaloisElt& g : tw_.galois_group())
                if (!tw_.fixes(g, k) && stabilizes(tw_, g, k)) autos[k].push_back(g);
        for (const MultChar& c : characters())
            for (const GaloisElt& g : autos[c.field]) {
                json inst = base("eps(chi o g, psi o g) = eps(chi, psi)");
                inst["chi"] = char_json(c);
                inst["g"] = {{"frobenius", g.j}, {"sign", g.eps}};
                const AddChar psi = ctx_->psi(c.field);
                const MultChar cg = galois_conjugate(tw_, c, g);
                out.push_back({3, inst, [c, cg, g, psi] {
                                   return std::pair{epsilon_char(cg, psi.conjugate(g)), epsilon_char(c, psi)};
                               }});
            }
    }

    void duality(std::vector<Case>& out) {
        for (const MultChar& c : characters()) {
            json inst = base("eps(chi, psi) eps(chi^-1, psi^-1) = 1");
            inst["chi"] = char_json(c);
            const AddChar psi = ctx_->psi(c.field);
            const MultChar ci = inverse(tw_, c);
            const std::uint32_t pp = p();
            out.push_back({4, inst, [c, ci, psi, pp] {
                               return std::pair{epsilon_char(c, psi) * epsilon_char(ci, psi.inverse()), EpsilonValue::one(pp)};
                           }});
        }
    }

    void unramified_twist(std::vector<Case>& out) {
        for (const MultChar& c : characters()) {
            const MultChar mu = unramified_char(c.field, QZ(static_cast<std::int64_t>(rs_.below(24)), 24));
            json inst = base("eps(mu chi, psi) = mu(pi^{n(psi)+c(chi)}) eps(chi, psi)");
            inst["chi"] = char_json(c);
            inst["mu"] = char_json(mu);
            const AddChar psi = ctx_->psi(c.field);
            const MultChar twisted = multiply(tw_, mu, c);
            const QZ factor = mu.pi_value.times(psi.exponent() + c.conductor());
            const std::uint32_t pp = p();
            out.push_back({5, inst, [c, twisted, factor, psi, pp] {
                               return std::pair{epsilon_char(twisted, psi), root_value(factor, pp) * epsilon_char(c, psi)};
                           }});
        }
    }

    void frohlich_queyrut(std::vector<Case>& out) {
        for (const auto& [k, k_sup] : steps_) {
            if (tw_.degree(k, k_sup) != 2) continue;
            const TruncatedElement delta = trace_zero_element(tw_, k, k_sup);
            const AddChar psi = ctx_->psi(k).lift(k_sup);
            for (const MultChar& c : trivial_on_subfield(tw_, k, k_sup, cfg_.pi_order, cfg_.random_cases / 4, rs_)) {
                json inst = base("eps(chi, psi_K') = chi(delta)");
                inst["step"] = {label(k), label(k_sup)};
                inst["chi"] = char_json(c);
                inst["delta"] = delta.to_string();
                const std::uint32_t pp = p();
                const Tower& t = tw_;
                out.push_back({6, inst, [c, psi, delta, pp, &t] {
                                   return std::pair{epsilon_char(c, psi), root_value(evaluate(t, c, delta), pp)};
                               }});
            }
        }
    }

    void inductivity(std::vector<Case>& out) {
        for (const auto& [k, k_sup] : steps_) {
            std::vector<MultChar> chars = enumerate_tame(tw_, k, cfg_.pi_order);
            for (std::size_t i = 0; i < cfg_.random_cases / 8; ++i) chars.push_back(rs_.conductor_two(k));
            const AddChar psi = ctx_->psi(k);
            const AddChar psi_sup = psi.lift(k_sup);
            const EpsilonValue lambda = lambda_constant(k_sup, psi);
            const std::vector<MultChar> xis = galois_characters(tw_, k, k_sup);
            for (const MultChar& c : chars) {
                MultChar lifted;
                try {
                    lifted = compose_with_norm(tw_, c, k_sup);
                } catch (const ConductorCapError&) {
                    continue;
                }
                std::vector<MultChar> twists;
                for (const MultChar& xi : xis) twists.push_back(multiply(tw_, c, xi));
                json inst = base("prod_xi eps(chi xi, psi) = lambda eps(chi o N, psi_K')");
                inst["step"] = {label(k), label(k_sup)};
                inst["chi"] = char_json(c);
                const std::uint32_t pp = p();
                out.push_back({7, inst, [twists, psi, lifted, psi_sup, lambda, pp] {
                                   EpsilonValue lhs = EpsilonValue::one(pp);
                                   for (const MultChar& x : twists) lhs *= epsilon_char(x, psi);
                                   return std::pair{lhs, lambda * epsilon_char(lifted, psi_sup)};
                               }});
            }
        }
    }

    void unramified_lambda(std::vector<Case>& out) {
        for (const auto& [k, k_sup] : steps_) {
            if (tw_.desc(k).e != tw_.desc(k_sup).e) continue;
            const AddChar psi = ctx_->psi(k);
            const std::int64_t d = tw_.degree(k, k_sup);
            json inst = base("lambda = (-1)^{d(psi)(n-1)}");
            inst["step"] = {label(k), label(k_sup)};
            inst["d_psi"] = psi.level();
            const std::uint32_t pp = p();
            const QZ sign(psi.level() * (d - 1), 2);
            out.push_back({8, inst, [k_sup, psi, sign, pp] {
                               return std::pair{lambda_constant(k_sup, psi), root_value(sign, pp)};
                           }});
        }
    }

    void tower_law(std::vector<Case>& out) {
        for (const auto& [k, k_mid] : steps_)
            for (const auto& [k2, k_sup] : steps_) {
                if (k2 != k_mid) continue;
                bool direct = false;
                for (const auto& s : steps_) direct = direct || (s.first == k && s.second == k_sup);
                if (!direct) continue;
                json inst = base("lambda(K'/K) = lambda(K'/K'') lambda(K''/K)^{[K':K'']}");
                inst["tower"] = {label(k), label(k_mid), label(k_sup)};
                const AddChar psi = ctx_->psi(k);
                const std::int64_t deg = tw_.degree(k_mid, k_sup);
                out.push_back({9, inst, [k_mid, k_sup, psi, deg] {
                                   return std::pair{lambda_constant(k_sup, psi),
                                                    lambda_constant(k_sup, psi.lift(k_mid)) *
                                                        lambda_constant(k_mid, psi).pow(deg)};
                               }});
            }
    }

    void lambda_square(std::vector<Case>& out) {
        for (const auto& [k, k_sup] : steps_) {
            if (tw_.degree(k, k_sup) != 2) continue;
            json inst = base("lambda^2 = omega(-1)");
            inst["step"] = {label(k), label(k_sup)};
            const AddChar psi = ctx_->psi(k);
            const QZ w = evaluate(tw_, omega(tw_, k, k_sup), tw_.constant(k, tw_.amb().neg(1), 2));
            const std::uint32_t pp = p();
            out.push_back({10, inst, [k_sup, psi, w, pp] {
                               return std::pair{lambda_constant(k_sup, psi).pow(2), root_value(w, pp)};
                           }});
        }
    }

    const IdentitySuiteConfig& cfg_;
    TowerPtr t_;
    const Tower& tw_;
    std::int64_t level_;
    Sampler rs_;
    std::shared_ptr<EpsilonContext> ctx_;
    std::vector<std::pair<FieldId, FieldId>> steps_;
};

}  // namespace

json to_json(const IdentityRecord& r) {
    return {{"identity", r.identity}, {"instance", r.instance}, {"pass", r.pass}, {"lhs", r.lhs}, {"rhs", r.rhs}};
}

AddChar psi_with_level(const TowerPtr& t, std::int64_t level) {
    const AddChar std_psi = AddChar::standard(t, FieldId::F);
    return std_psi.twisted(t->uniformizer(FieldId::F, kElementPrecision).pow(-level - std_psi.level()));
}

std::vector<std::pair<FieldId, FieldId>> abelian_steps(const Tower& t) {
    std::vector<std::pair<FieldId, FieldId>> out;
    for (FieldId k : t.fields())
        for (FieldId k_sup : t.fields()) {
            if (k == k_sup || !t.contains(k, k_sup)) continue;
            try {
                galois_characters(t, k, k_sup);
                out.emplace_back(k, k_sup);
            } catch (const ConsistencyError&) {
            }
        }
    return out;
}

std::vector<IdentityRecord> run_identity_suite(const IdentitySuiteConfig& cfg) {
    std::vector<int> ids = cfg.identities;
    if (ids.empty())
        for (int i = 1; i <= 10; ++i) ids.push_back(i);
    std::vector<Case> cases;
    std::uint64_t stream = 0;
    for (std::uint32_t e : cfg.ramification) {
        const TowerPtr t = Tower::build(cfg.p, cfg.q, cfg.m, e);
        for (std::int64_t level : cfg.psi_levels)
            for (int id : ids) {
                // One independent random stream per (tower, level, identity).
                SuiteBuilder b(cfg, t, level, cfg.seed * 1000003u + stream++);
                b.build(id, cases);
            }
    }
    return parallel_map(cases.size(), cfg.threads, [&](std::size_t i) {
        const Case& c = cases[i];
        IdentityRecord r;
        r.identity = c.identity;
        r.instance = c.instance;
        const auto [lhs, rhs] = c.eval();
        r.pass = lhs == rhs;
        r.lhs = lhs.to_string();
        r.rhs = rhs.to_string();
        return r;
    });
}

}  // namespace tlw
