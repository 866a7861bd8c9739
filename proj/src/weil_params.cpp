#include "tlw/weil_params.hpp"

#include <numeric>

#include "tlw/errors.hpp"

namespace tlw {

using Elem = FiniteField::Elem;

namespace {

std::int64_t lcm_den(std::int64_t n, const QZ& x) { return std::lcm(n, x.den()); }

// Row echelon form built incrementally with fraction-free elimination.
class SparseEchelon {
public:
    using Row = std::map<std::size_t, Cyclotomic>;

    bool add(Row row) {
        prune(row);
        while (!row.empty()) {
            const std::size_t c = row.begin()->first;
            auto it = pivots_.find(c);
            if (it == pivots_.end()) {
                pivots_.emplace(c, std::move(row));
                return true;
            }
            const Row& piv = it->second;
            const Cyclotomic lead_p = piv.begin()->second;
            const Cyclotomic lead_r = row.begin()->second;
            Row next;
            for (const auto& [col, v] : row)
                if (col != c) next.emplace(col, lead_p * v);
            for (const auto& [col, v] : piv) {
                if (col == c) continue;
                auto [pos, fresh] = next.try_emplace(col, -(lead_r * v));
                if (!fresh) pos->second = pos->second - lead_r * v;
            }
            prune(next);
            row = std::move(next);
        }
        return false;
    }
    std::size_t rank() const { return pivots_.size(); }

private:
    static void prune(Row& r) {
        for (auto it = r.begin(); it != r.end();) it = it->second.is_zero() ? r.erase(it) : std::next(it);
    }
    std::map<std::size_t, Row> pivots_;
};

// Rows of X^t B X - s B = 0 in the unknowns B_{kl} (index k*n + l).
std::vector<SparseEchelon::Row> equivariance_rows(const CycMatrix& x, const Cyclotomic& s) {
    const std::size_t n = x.size();
    std::vector<SparseEchelon::Row> rows;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            SparseEchelon::Row row;
            for (std::size_t k = 0; k < n; ++k) {
                if (x[k][i].is_zero()) continue;
                for (std::size_t l = 0; l < n; ++l) {
                    if (x[l][j].is_zero()) continue;
                    const Cyclotomic v = x[k][i] * x[l][j];
                    auto [pos, fresh] = row.try_emplace(k * n + l, v);
                    if (!fresh) pos->second = pos->second + v;
                }
            }
            auto [pos, fresh] = row.try_emplace(i * n + j, -s);
            if (!fresh) pos->second = pos->second - s;
            rows.push_back(std::move(row));
        }
    return rows;
}

Cyclotomic root_of(const QZ& x, std::int64_t order) { return Cyclotomic::root(x.exponent_mod(order), order); }

}  // namespace

std::uint32_t dimension(const Tower& t, const MonomialParam& phi) { return t.degree(FieldId::F, phi.field); }

std::uint32_t dimension(const Tower& t, const ParamSum& phi) {
    std::uint32_t d = 0;
    for (const auto& p : phi.parts) d += dimension(t, p);
    return d;
}

bool is_irreducible(const Tower& t, const MonomialParam& phi) {
    if (phi.chi.field != phi.field) throw DomainError("parameter character lives on the wrong field");
    for (const GaloisElt& g : t.relative_group(FieldId::F, phi.field)) {
        if (g == GaloisElt{}) continue;
        if (galois_conjugate(t, phi.chi, g) == phi.chi) return false;
    }
    return true;
}

MultChar det_param(const Tower& t, const MonomialParam& phi) {
    return multiply(t, omega(t, FieldId::F, phi.field), restrict_char(t, phi.chi, FieldId::F));
}

MultChar det_param(const Tower& t, const ParamSum& phi) {
    MultChar acc = trivial_char(FieldId::F);
    for (const auto& p : phi.parts) acc = multiply(t, acc, det_param(t, p));
    return acc;
}

ParamSum tensor_with_quadratic(const Tower& t, const MultChar& chi, const MultChar& mu) {
    if (chi.field != FieldId::L || !chi.tame() || !is_regular(t, chi))
        throw DomainError("tensor_with_quadratic: chi must be a regular tame character of L^*");
    if (mu.field != FieldId::E) throw DomainError("tensor_with_quadratic: mu must be a character of E^*");
    const MultChar eta_chi = multiply(t, unramified_char(FieldId::L, QZ(1, 2)), chi);
    const MultChar mu_inv = inverse(t, mu);
    if (!t.ramified()) {
        const MultChar first = multiply(t, eta_chi, compose_with_norm(t, mu_inv, FieldId::L));
        const MultChar mu_inv_sigma = galois_conjugate(t, mu_inv, GaloisElt{1, 0});
        const MultChar second = multiply(t, eta_chi, compose_with_norm(t, mu_inv_sigma, FieldId::L));
        return {{{FieldId::L, first}, {FieldId::L, second}}};
    }
    const MultChar c = multiply(t, compose_with_norm(t, eta_chi, FieldId::M), compose_with_norm(t, mu_inv, FieldId::M));
    return {{{FieldId::M, c}}};
}

std::string_view to_string(SelfDuality s) {
    switch (s) {
        case SelfDuality::not_selfdual: return "not_selfdual";
        case SelfDuality::orthogonal: return "orthogonal";
        case SelfDuality::symplectic: return "symplectic";
    }
    return "?";
}

SelfDuality classify_selfduality(const Tower& t, const MonomialParam& phi, const MultChar& alpha) {
    if (phi.field != FieldId::L || phi.chi.field != FieldId::L || !phi.chi.tame())
        throw DomainError("classify_selfduality: expects a tame character of L^*");
    if (t.n() < 4) throw DomainError("classify_selfduality: requires n >= 4");
    const MultChar& chi = phi.chi;
    const MultChar chi_nl = character_from_values(t, FieldId::L, [&](const TruncatedElement& x) {
        return evaluate(t, chi, t.coerce(t.norm(x, FieldId::L0), FieldId::L));
    });
    if (chi_nl != compose_with_norm(t, alpha, FieldId::L)) return SelfDuality::not_selfdual;
    const MultChar r = restrict_char(t, chi, FieldId::L0);
    const MultChar a0 = compose_with_norm(t, alpha, FieldId::L0);
    if (r == a0) return SelfDuality::orthogonal;
    if (r == multiply(t, a0, unramified_char(FieldId::L0, QZ(1, 2)))) return SelfDuality::symplectic;
    throw ConsistencyError("selfdual parameter whose restriction to L0 matches neither branch");
}

CycMatrix FiniteMatrixModel::t_matrix() const {
    std::int64_t order = 1;
    for (const QZ& v : t_diag) order = lcm_den(order, v);
    CycMatrix m(dim, std::vector<Cyclotomic>(dim, Cyclotomic::from_int(0, order)));
    for (std::uint32_t i = 0; i < dim; ++i) m[i][i] = root_of(t_diag[i], order);
    return m;
}

CycMatrix FiniteMatrixModel::phi_matrix() const {
    const std::int64_t order = corner.den();
    CycMatrix m(dim, std::vector<Cyclotomic>(dim, Cyclotomic::from_int(0, order)));
    for (std::uint32_t i = 0; i + 1 < dim; ++i) m[i + 1][i] = Cyclotomic::from_int(1, order);
    m[0][dim - 1] = root_of(corner, order);
    return m;
}

FiniteMatrixModel build_model(const Tower& t, const MonomialParam& phi) {
    const LocalFieldDesc& d = t.desc(phi.field);
    if (d.e != 1) throw DomainError("matrix model requires an unramified inducing field");
    if (!phi.chi.tame()) throw DomainError("matrix model requires a tame character");
    FiniteMatrixModel m;
    m.dim = d.f;
    const Elem g = t.residue_generator(phi.field);
    Elem x = g;
    for (std::uint32_t i = 0; i < d.f; ++i) {
        m.t_diag.push_back(evaluate(t, phi.chi, t.constant(phi.field, x, 1)));
        x = t.amb().frobenius(x, t.r());
    }
    m.corner = evaluate(t, phi.chi, t.uniformizer(phi.field, 1));
    return m;
}

CycMatrix mat_mul(const CycMatrix& a, const CycMatrix& b) {
    const std::size_t n = a.size(), k = b.size(), m = b[0].size();
    CycMatrix r(n, std::vector<Cyclotomic>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t l = 0; l < k; ++l)
                if (!a[i][l].is_zero() && !b[l][j].is_zero()) r[i][j] += a[i][l] * b[l][j];
    return r;
}

namespace {

CycMatrix kron(const CycMatrix& a, const CycMatrix& b) {
    const std::size_t n = a.size(), m = b.size();
    CycMatrix r(n * m, std::vector<Cyclotomic>(n * m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t l = 0; l < m; ++l)
                    if (!a[i][j].is_zero() && !b[k][l].is_zero()) r[i * m + k][j * m + l] = a[i][j] * b[k][l];
    return r;
}

Cyclotomic det_rec(const CycMatrix& m, std::vector<bool>& used, std::size_t row) {
    const std::size_t n = m.size();
    if (row == n) return Cyclotomic::from_int(1);
    Cyclotomic acc;
    std::size_t skipped = 0;
    for (std::size_t c = 0; c < n; ++c) {
        if (used[c]) {
            ++skipped;
            continue;
        }
        if (m[row][c].is_zero()) continue;
        used[c] = true;
        Cyclotomic term = m[row][c] * det_rec(m, used, row + 1);
        used[c] = false;
        // Sign of the cofactor: position of c among the unused columns.
        if ((c - skipped) % 2 == 1) term = -term;
        acc += term;
    }
    return acc;
}

}  // namespace

std::pair<CycMatrix, CycMatrix> tensor_models(const FiniteMatrixModel& a, const FiniteMatrixModel& b) {
    return {kron(a.t_matrix(), b.t_matrix()), kron(a.phi_matrix(), b.phi_matrix())};
}

Cyclotomic determinant(const CycMatrix& m) {
    std::vector<bool> used(m.size(), false);
    return det_rec(m, used, 0);
}

std::size_t sparse_rank(std::vector<std::map<std::size_t, Cyclotomic>> rows) {
    SparseEchelon e;
    for (auto& r : rows) e.add(std::move(r));
    return e.rank();
}

BruteForceSelfDuality classify_selfduality_bruteforce(const Tower& t, const MonomialParam& phi, const MultChar& alpha) {
    if (alpha.field != FieldId::F || !alpha.tame()) throw DomainError("alpha must be a tame character of F^*");
    const FiniteMatrixModel model = build_model(t, phi);
    const std::size_t n = model.dim;

    // alpha on the tame generator and on Frobenius, through the Artin map of F.
    const TruncatedElement tau = t.norm(t.constant(phi.field, t.residue_generator(phi.field), 2), FieldId::F);
    const QZ alpha_tau = evaluate(t, alpha, tau);
    const QZ alpha_phi = evaluate(t, alpha, t.uniformizer(FieldId::F, 1));

    std::int64_t order = lcm_den(lcm_den(lcm_den(1, alpha_tau), alpha_phi), model.corner);
    for (const QZ& v : model.t_diag) order = lcm_den(order, v);
    auto lift_all = [&](CycMatrix m) {
        for (auto& row : m)
            for (auto& v : row) v = v.lift(order);
        return m;
    };
    const CycMatrix tm = lift_all(model.t_matrix());
    const CycMatrix pm = lift_all(model.phi_matrix());

    SparseEchelon base;
    for (auto& r : equivariance_rows(tm, root_of(alpha_tau, order))) base.add(std::move(r));
    for (auto& r : equivariance_rows(pm, root_of(alpha_phi, order))) base.add(std::move(r));

    BruteForceSelfDuality out;
    out.dim_total = n * n - base.rank();
    if (out.dim_total == 0) return out;
    if (out.dim_total >= 2)
        throw ConsistencyError("equivariant bilinear forms form a space of dimension " + std::to_string(out.dim_total));

    const Cyclotomic one = Cyclotomic::from_int(1, order);
    SparseEchelon sym = base, alt = base;
    for (std::size_t i = 0; i < n; ++i) {
        alt.add({{i * n + i, one}});
        for (std::size_t j = i + 1; j < n; ++j) {
            sym.add({{i * n + j, one}, {j * n + i, -one}});
            alt.add({{i * n + j, one}, {j * n + i, one}});
        }
    }
    out.dim_symmetric = n * n - sym.rank();
    out.dim_alternating = n * n - alt.rank();
    if (out.dim_symmetric == 1 && out.dim_alternating == 1)
        throw ConsistencyError("invariant form is both symmetric and alternating");
    if (out.dim_symmetric == 1)
        out.type = SelfDuality::orthogonal;
    else if (out.dim_alternating == 1)
        out.type = SelfDuality::symplectic;
    else
        throw ConsistencyError("invariant form is neither symmetric nor alternating");
    return out;
}

bool mackey_consistent(const Tower& t, const MultChar& chi, const MultChar& mu) {
    if (t.ramified() || !mu.tame()) throw DomainError("mackey_consistent: E unramified and mu tame required");
    const MultChar eta_chi = multiply(t, unramified_char(FieldId::L, QZ(1, 2)), chi);
    const FiniteMatrixModel a = build_model(t, {FieldId::L, eta_chi});
    const FiniteMatrixModel b = build_model(t, {FieldId::E, inverse(t, mu)});
    const auto [tm, pm] = tensor_models(a, b);

    const ParamSum sum = tensor_with_quadratic(t, chi, mu);
    if (dimension(t, sum) != tm.size()) return false;
    const MultChar d = det_param(t, sum);
    const TruncatedElement tau = t.norm(t.constant(FieldId::L, t.residue_generator(FieldId::L), 2), FieldId::F);
    const bool det_t = determinant(tm) == Cyclotomic::from_qz(evaluate(t, d, tau));
    const bool det_phi = determinant(pm) == Cyclotomic::from_qz(evaluate(t, d, t.uniformizer(FieldId::F, 1)));
    return det_t && det_phi;
}

EpsilonContext::EpsilonContext(TowerPtr t, AddChar psi_f) : tower_(std::move(t)) {
    if (psi_f.field() != FieldId::F) throw DomainError("EpsilonContext: psi must be a character of F");
    for (FieldId k : tower_->fields()) {
        if (k == FieldId::F) {
            psi_.emplace(k, psi_f);
            lambda_.emplace(k, EpsilonValue::one(tower_->p()));
        } else {
            psi_.emplace(k, psi_f.lift(k));
            lambda_.emplace(k, lambda_constant(k, psi_f));
        }
    }
}

EpsilonValue epsilon_param(const EpsilonContext& ctx, const MonomialParam& phi) {
    return ctx.lambda(phi.field) * epsilon_char(phi.chi, ctx.psi(phi.field));
}

EpsilonValue epsilon_param(const EpsilonContext& ctx, const ParamSum& phi) {
    EpsilonValue acc = EpsilonValue::one(ctx.tower().p());
    for (const auto& p : phi.parts) acc *= epsilon_param(ctx, p);
    return acc;
}

}  // namespace tlw
