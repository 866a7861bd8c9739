#include "tlw/ptb_engine.hpp"

#include <map>
#include <memory>

#include "tlw/errors.hpp"
#include "tlw/green_ff.hpp"
#include "tlw/identities.hpp"
#include "tlw/parallel.hpp"

namespace tlw {

namespace {

MultChar mu_on_f(const PtbCase& c) { return restrict_char(*c.tower, c.mu, FieldId::F); }

QZ value_at_minus_one(const Tower& t, const MultChar& chi) {
    return evaluate(t, chi, t.constant(chi.field, t.amb().neg(1), t.default_precision()));
}

}  // namespace

bool central_compatible(const PtbCase& c) {
    const Tower& t = *c.tower;
    return restrict_char(t, power(t, c.mu, t.m()), FieldId::F) == restrict_char(t, c.chi, FieldId::F);
}

bool restriction_matches(const PtbCase& c) {
    const Tower& t = *c.tower;
    return restrict_char(t, c.chi, FieldId::L0) == compose_with_norm(t, mu_on_f(c), FieldId::L0);
}

Distinction distinction_predicate(const PtbCase& c) {
    if (c.tower->m() < 2) throw DomainError("distinction_predicate: m must be at least 2");
    Distinction d;
    d.distinguished = restriction_matches(c) && !(c.tower->ramified() && c.mu.tame());
    if (!d.distinguished)
        d.multiplicity = 0;
    else if (c.mu.tame() || !c.tower->ramified())
        d.multiplicity = 1;
    return d;
}

bool symplectic_predicate(const PtbCase& c) {
    const Tower& t = *c.tower;
    if (t.m() < 2) throw DomainError("symplectic_predicate: m must be at least 2");
    const bool criterion = restriction_matches(c);
    const MultChar eta_chi = multiply(t, unramified_char(FieldId::L, QZ(1, 2)), c.chi);
    const SelfDuality s = classify_selfduality(t, {FieldId::L, eta_chi}, mu_on_f(c));
    if (criterion != (s == SelfDuality::symplectic))
        throw ConsistencyError("symplectic criterion disagrees with the classifier for chi = " + to_string(t, c.chi) +
                               ", mu = " + to_string(t, c.mu));
    return criterion;
}

EpsilonValue epsilon_ptb(const PtbCase& c, const EpsilonContext& ctx) {
    if (!central_compatible(c)) throw DomainError("epsilon_ptb: central characters do not match");
    return epsilon_param(ctx, tensor_with_quadratic(*c.tower, c.chi, c.mu));
}

QZ epsilon_expected(const PtbCase& c) {
    const Tower& t = *c.tower;
    const QZ w = value_at_minus_one(t, omega_quadratic(t, FieldId::F, FieldId::E));
    return (w + value_at_minus_one(t, c.mu)).times(t.m());
}

QZ epsilon_closed_form(const PtbCase& c) {
    const QZ e = epsilon_expected(c);
    return c.tower->ramified() && c.mu.tame() ? e + QZ(1, 2) : e;
}

bool PtbVerdict::ok() const {
    return conjecture_holds && closed_form_holds.value_or(true) && corollaries_hold.value_or(true) &&
           residual_agrees.value_or(true);
}

nlohmann::json to_json(const PtbVerdict& v) {
    const Tower& t = *v.input.tower;
    nlohmann::json j;
    j["q"] = t.q();
    j["m"] = t.m();
    j["e_E"] = t.e_E();
    j["psi_level"] = v.input.psi_level;
    j["chi"] = to_json(t, v.input.chi);
    j["mu"] = to_json(t, v.input.mu);
    j["distinguished"] = v.distinction.distinguished;
    if (v.distinction.multiplicity)
        j["multiplicity"] = *v.distinction.multiplicity;
    else
        j["multiplicity"] = "unknown";
    j["symplectic"] = v.symplectic;
    const auto root = v.epsilon.as_root_of_unity();
    j["epsilon"] = root ? root->to_string() : v.epsilon.to_string();
    j["epsilon_expected"] = v.expected.to_string();
    j["epsilon_condition"] = v.epsilon_condition;
    j["conjecture_holds"] = v.conjecture_holds;
    j["closed_form_holds"] = v.closed_form_holds ? nlohmann::json(*v.closed_form_holds) : nlohmann::json();
    j["corollaries_hold"] = v.corollaries_hold ? nlohmann::json(*v.corollaries_hold) : nlohmann::json();
    j["residual_dim"] = v.residual_dim ? nlohmann::json(*v.residual_dim) : nlohmann::json();
    j["ok"] = v.ok();
    return j;
}

namespace {

struct Residual {
    ff::GLContextPtr ctx;
    ff::HbarSummary hbar;
    ff::ShalikaSummary shalika;
    std::map<std::uint64_t, std::unique_ptr<ff::CuspidalFF>> reps;

    const ff::CuspidalFF& rep(std::uint64_t theta) const { return *reps.at(theta); }
};

// Residual dimension for E/F unramified: H-distinction of the cuspidal
// representation for tame mu, the twisted Shalika model otherwise.
std::uint64_t residual_dim(const PtbCase& c, const Residual& res) {
    const Tower& t = *c.tower;
    const FiniteField& f = t.amb();
    const ff::CuspidalFF& pi = res.rep(c.chi.a);
    if (c.mu.tame()) return ff::ff_distinction_dim(pi, c.mu.a, res.hbar);
    const MultChar mu_f = mu_on_f(c);
    if (!mu_f.tame()) return 0;
    // psi(x) = mu(1 + pi_F delta x) = exp(2 pi i Tr(b x)/p), b = Tr_{k_E/k_F}(beta delta).
    const ff::Elem bd = f.mul(*c.mu.beta, t.delta(1).coeff(0));
    const ff::Elem b = f.add(bd, f.frobenius(bd, t.r()));
    if (b == 0) throw ConsistencyError("residual Shalika character is trivial");
    return ff::shalika_hom_dim(pi, mu_f.a, b, res.shalika);
}

PtbVerdict evaluate_case(const PtbCase& c, const EpsilonContext& ctx, const Residual* res) {
    const Tower& t = *c.tower;
    PtbVerdict v;
    v.input = c;
    v.distinction = distinction_predicate(c);
    v.symplectic = symplectic_predicate(c);
    v.epsilon = epsilon_ptb(c, ctx);
    v.expected = epsilon_expected(c);
    v.epsilon_condition = v.epsilon == EpsilonValue::root(v.expected, t.p());
    v.conjecture_holds = v.distinction.distinguished == (v.symplectic && v.epsilon_condition);
    if (restriction_matches(c)) v.closed_form_holds = v.epsilon == EpsilonValue::root(epsilon_closed_form(c), t.p());
    if (v.distinction.distinguished) {
        const auto sigma = t.relative_group(FieldId::L0, FieldId::L);
        const GaloisElt g = sigma[0] == GaloisElt{} ? sigma[1] : sigma[0];
        const MultChar lhs = galois_conjugate(t, c.chi, g);
        const MultChar rhs =
            multiply(t, compose_with_norm(t, mu_on_f(c), FieldId::L), inverse(t, c.chi));
        v.corollaries_hold = lhs == rhs && mu_on_f(c).tame();
    }
    if (res) {
        v.residual_dim = residual_dim(c, *res);
        v.residual_agrees = (*v.residual_dim == 1) == v.distinction.distinguished && *v.residual_dim <= 1;
    }
    return v;
}

}  // namespace

std::vector<MultChar> ptb_mu_characters(const Tower& t, int max_conductor, std::uint64_t pi_order) {
    std::vector<MultChar> out;
    for (const MultChar& mu : enumerate_tame(t, FieldId::E, pi_order))
        if (mu.conductor() <= max_conductor) out.push_back(mu);
    if (max_conductor < 2) return out;
    const std::uint64_t units = t.residue_units(FieldId::E);
    const FiniteField::Elem gen = t.residue_generator(FieldId::E);
    for (std::uint64_t i = 0; i < pi_order; ++i)
        for (std::uint64_t a = 0; a < units; ++a)
            for (std::uint64_t b = 0; b < units; ++b)
                out.push_back(make_char(t, FieldId::E, QZ(static_cast<std::int64_t>(i), static_cast<std::int64_t>(pi_order)),
                                        static_cast<std::int64_t>(a), t.amb().pow(gen, static_cast<std::int64_t>(b))));
    return out;
}

std::vector<PtbVerdict> sweep(const SweepConfig& cfg) {
    if (cfg.m < 2) throw DomainError("sweep: m must be at least 2");
    if (cfg.mu_conductor < 0 || cfg.mu_conductor > 2) throw DomainError("sweep: mu conductor must be 0, 1 or 2");
    const std::uint64_t q = ipow64(cfg.p, cfg.r);

    struct Job {
        PtbCase c;
        const EpsilonContext* ctx;
        const Residual* res;
    };
    std::vector<Job> jobs;
    std::vector<std::unique_ptr<EpsilonContext>> contexts;
    std::unique_ptr<Residual> residual;

    for (std::uint32_t e : cfg.ramification) {
        const TowerPtr tower = Tower::build(cfg.p, q, cfg.m, e);
        const Tower& t = *tower;
        const auto chis = enumerate_admissible_pairs(t, cfg.pi_order);
        const auto mus = ptb_mu_characters(t, cfg.mu_conductor, cfg.pi_order);

        const Residual* res = nullptr;
        if (cfg.residual && !t.ramified()) {
            if (!residual) {
                residual = std::make_unique<Residual>();
                residual->ctx = ff::GLContext::make(cfg.p, cfg.r, t.n());
                residual->hbar = ff::hbar_summary(*residual->ctx, cfg.threads);
                residual->shalika = ff::shalika_summary(*residual->ctx, cfg.threads);
            }
            for (const MultChar& chi : chis)
                if (!residual->reps.count(chi.a))
                    residual->reps.emplace(chi.a, std::make_unique<ff::CuspidalFF>(residual->ctx, chi.a));
            res = residual.get();
        }

        for (std::int64_t level : cfg.psi_levels) {
            contexts.push_back(std::make_unique<EpsilonContext>(tower, psi_with_level(tower, level)));
            for (const MultChar& chi : chis)
                for (const MultChar& mu : mus) {
                    PtbCase c{tower, chi, mu, level};
                    if (central_compatible(c)) jobs.push_back({c, contexts.back().get(), res});
                }
        }
    }
    return parallel_map(jobs.size(), cfg.threads,
                        [&](std::size_t i) { return evaluate_case(jobs[i].c, *jobs[i].ctx, jobs[i].res); });
}

}  // namespace tlw
