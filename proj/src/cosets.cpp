#include "tlw/cosets.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "tlw/errors.hpp"
#include "tlw/parallel.hpp"
#include "tlw/ptb_engine.hpp"

namespace tlw {

using Elem = FiniteField::Elem;
using ff::Mat;

std::vector<CosetLambda> dominant_weights(std::uint32_t m, std::uint32_t lambda_max) {
    std::vector<CosetLambda> out;
    CosetLambda cur;
    std::function<void(std::uint32_t)> rec = [&](std::uint32_t bound) {
        if (cur.size() == m) {
            out.push_back(cur);
            return;
        }
        for (std::uint32_t v = 0; v <= bound; ++v) {
            cur.push_back(v);
            rec(v);
            cur.pop_back();
        }
    };
    rec(lambda_max);
    std::sort(out.begin(), out.end());
    return out;
}

std::string to_string(const CosetLambda& l) {
    std::string s = "(";
    for (std::size_t i = 0; i < l.size(); ++i) s += (i ? "," : "") + std::to_string(l[i]);
    return s + ")";
}

namespace {

void check_lambda(const Tower& t, const CosetLambda& l) {
    if (t.ramified())
        throw DomainError("coset parametrization is only available for unramified E/F; the ramified double cosets are not described");
    if (l.size() != t.m()) throw DomainError("lambda must have m entries");
    if (!std::is_sorted(l.rbegin(), l.rend())) throw DomainError("lambda must be weakly decreasing");
}

Mat zero_mat(std::uint32_t k) { return Mat{k, std::vector<Elem>(static_cast<std::size_t>(k) * k, 0)}; }

// det over k_E[pi]/pi^2 by the Leibniz formula.
std::pair<Elem, Elem> det_mod_p2(const FiniteField& f, const Mat& a0, const Mat& a1) {
    const std::uint32_t m = a0.n;
    std::vector<std::uint32_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    Elem c0 = 0, c1 = 0;
    do {
        std::uint32_t inversions = 0;
        for (std::uint32_t i = 0; i < m; ++i)
            for (std::uint32_t j = i + 1; j < m; ++j) inversions += perm[i] > perm[j];
        Elem p0 = 1, p1 = 0;
        for (std::uint32_t i = 0; i < m; ++i) {
            const Elem u = a0.at(i, perm[i]), w = a1.at(i, perm[i]);
            p1 = f.add(f.mul(p1, u), f.mul(p0, w));
            p0 = f.mul(p0, u);
        }
        if (inversions % 2) {
            p0 = f.neg(p0);
            p1 = f.neg(p1);
        }
        c0 = f.add(c0, p0);
        c1 = f.add(c1, p1);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {c0, c1};
}

Elem row_replaced_det(const ff::GLContext& ctx, const Mat& a, std::uint32_t row, const std::vector<Elem>& r) {
    Mat b = a;
    for (std::uint32_t j = 0; j < a.n; ++j) b.at(row, j) = r[j];
    return ctx.det(b);
}

}  // namespace

Mat coset_reduction(const ff::GLContext& ctx, const CosetLambda& l, const Mat& x0, const Mat& b0) {
    const std::uint32_t m = x0.n;
    const Elem big_delta = ctx.nonsquare();
    const FiniteField& f = ctx.field();
    Mat j = zero_mat(2 * m);
    for (std::uint32_t i = 0; i < m; ++i)
        for (std::uint32_t k = 0; k < m; ++k) {
            j.at(i, k) = l[i] >= l[k] ? x0.at(i, k) : 0;
            j.at(i, m + k) = b0.at(i, k);
            j.at(m + i, k) = l[i] + l[k] == 0 ? f.mul(big_delta, b0.at(i, k)) : 0;
            j.at(m + i, m + k) = l[i] <= l[k] ? x0.at(i, k) : 0;
        }
    return j;
}

QZ coset_character(const Tower& t, const CosetLambda& l, const MultChar& mu, const CosetElement& e) {
    check_lambda(t, l);
    const FiniteField& f = t.amb();
    const std::uint32_t m = t.m();
    const Elem delta = t.delta(1).coeff(0);
    // Coefficients of pi^0 and pi^1 in a_ij = pi^s (x0 + pi x1) and (D b')_ij = pi^{l_i} (b0 + pi b1).
    auto shifted = [&](std::int64_t s, Elem c0, Elem c1, int k) -> Elem {
        if (s < 0) s = 0;
        if (k == s) return c0;
        if (k == s + 1) return c1;
        return 0;
    };
    Mat a0 = zero_mat(m), a1 = zero_mat(m);
    for (std::uint32_t i = 0; i < m; ++i)
        for (std::uint32_t j = 0; j < m; ++j) {
            const std::int64_t s = static_cast<std::int64_t>(l[i]) - static_cast<std::int64_t>(l[j]);
            for (int k = 0; k < 2; ++k) {
                const Elem a = shifted(s, e.x0.at(i, j), e.x1.at(i, j), k);
                const Elem b = shifted(l[i], e.b0.at(i, j), e.b1.at(i, j), k);
                (k == 0 ? a0 : a1).at(i, j) = f.add(a, f.mul(delta, b));
            }
        }
    const auto [c0, c1] = det_mod_p2(f, a0, a1);
    if (c0 == 0) throw ConsistencyError("coset_character: det_E is not a unit");
    return unit_value(t, mu, c0, f.div(c1, c0));
}

CosetSummary coset_summary(const Tower& t, const ff::GLContext& ctx, const CosetLambda& l, int precision,
                           unsigned threads) {
    check_lambda(t, l);
    if (precision < 1 || precision > 2) throw DomainError("coset_summary: precision must be 1 or 2");
    if (ctx.n() != t.n() || ctx.q() != t.q()) throw DomainError("coset_summary: context does not match the tower");
    const FiniteField& f = t.amb();
    const std::uint32_t m = t.m();
    const std::uint64_t q = t.q();
    const std::uint32_t vars = 2 * m * m;
    std::uint64_t residues = 1;
    for (std::uint32_t i = 0; i < vars; ++i) {
        residues *= q;
        if (residues > (1ull << 26)) throw DomainError("coset_summary: J_lambda is too large to enumerate");
    }
    const std::uint64_t fiber = residues;  // number of choices of (x1, b1)
    const Elem delta = t.delta(1).coeff(0);
    const auto& scalars = ctx.scalars();
    std::vector<Elem> kf_basis;  // F_p-basis of k_F as powers of its generator
    for (std::uint32_t s = 0; s < t.r(); ++s) kf_basis.push_back(f.pow(ctx.scalar_generator(), s));

    using Counts = std::map<std::tuple<ff::ConjInvariant, Elem, Elem>, std::uint64_t>;
    const std::uint64_t chunks = std::min<std::uint64_t>(residues, 256);
    auto work = [&](std::size_t chunk) {
        Counts out;
        const std::uint64_t lo = residues * chunk / chunks, hi = residues * (chunk + 1) / chunks;
        Mat x0 = zero_mat(m), b0 = zero_mat(m);
        std::vector<char> in_span(f.size());
        std::vector<Elem> span;
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            std::uint64_t v = idx;
            for (std::uint32_t k = 0; k < m * m; ++k, v /= q) x0.a[k] = scalars[v % q];
            for (std::uint32_t k = 0; k < m * m; ++k, v /= q) b0.a[k] = scalars[v % q];
            const Mat jbar = coset_reduction(ctx, l, x0, b0);
            if (ctx.det(jbar) == 0) continue;
            const ff::ConjInvariant inv = ctx.invariant(jbar);

            Mat a0 = zero_mat(m), a1 = zero_mat(m);
            for (std::uint32_t i = 0; i < m; ++i)
                for (std::uint32_t j = 0; j < m; ++j) {
                    const Elem x = x0.at(i, j), b = f.mul(delta, b0.at(i, j));
                    a0.at(i, j) = f.add(l[i] <= l[j] ? x : 0, l[i] == 0 ? b : 0);
                    a1.at(i, j) = f.add(l[i] == l[j] + 1 ? x : 0, l[i] == 1 ? b : 0);
                }
            const Elem c0 = ctx.det(a0);
            if (c0 == 0) throw ConsistencyError("coset_summary: det_E is not a unit");
            if (precision == 1) {
                ++out[{inv, c0, 0}];
                continue;
            }
            Elem c1 = 0;
            for (std::uint32_t i = 0; i < m; ++i)
                c1 = f.add(c1, row_replaced_det(ctx, a0, i, {a1.a.begin() + i * m, a1.a.begin() + (i + 1) * m}));

            // k_F-span of the linear part of c1 in (x1, b1).
            span.assign(1, 0);
            std::fill(in_span.begin(), in_span.end(), 0);
            in_span[0] = 1;
            auto add_generator = [&](Elem g) {
                if (in_span[g]) return;
                const std::size_t old = span.size();
                for (std::uint32_t k = 1; k < t.p(); ++k) {
                    Elem kg = 0;
                    for (std::uint32_t s = 0; s < k; ++s) kg = f.add(kg, g);
                    for (std::size_t u = 0; u < old; ++u) {
                        const Elem w = f.add(span[u], kg);
                        if (!in_span[w]) {
                            in_span[w] = 1;
                            span.push_back(w);
                        }
                    }
                }
            };
            for (std::uint32_t i = 0; i < m; ++i)
                for (std::uint32_t j = 0; j < m; ++j) {
                    std::vector<Elem> e(m, 0);
                    e[j] = 1;
                    const Elem cof = row_replaced_det(ctx, a0, i, e);
                    for (Elem s : kf_basis) {
                        if (l[i] <= l[j]) add_generator(f.mul(cof, s));
                        if (l[i] == 0) add_generator(f.mul(f.mul(cof, delta), s));
                    }
                }
            const std::uint64_t weight = fiber / span.size();
            const Elem c0_inv = f.inv(c0);
            for (Elem w : span) out[{inv, c0, f.mul(f.add(c1, w), c0_inv)}] += weight;
        }
        return out;
    };
    const auto parts = parallel_map(chunks, threads, work);
    CosetSummary s;
    s.lambda = l;
    s.precision = precision;
    for (const Counts& part : parts)
        for (const auto& [k, c] : part) {
            s.counts[k] += c;
            s.group_order += c;
        }
    return s;
}

std::uint64_t coset_hom_dim(const Tower& t, const CosetSummary& s, const ff::CuspidalFF& pi, const MultChar& chi,
                            const MultChar& mu) {
    if (s.precision < mu.conductor()) throw PrecisionError("coset_hom_dim: precision below the conductor of mu");
    const TruncatedElement pf = t.uniformizer(FieldId::F, t.default_precision());
    const QZ central_chi = evaluate(t, chi, t.coerce(pf, FieldId::L));
    const QZ central_mu = evaluate(t, mu, t.coerce(pf, FieldId::E)).times(t.m());
    if (central_chi != central_mu) return 0;
    if (pi.theta() != chi.a) throw DomainError("coset_hom_dim: cuspidal representation does not match chi");

    const std::int64_t n = pi.order();
    const std::int64_t order = n * t.p();
    std::vector<std::int64_t> acc(static_cast<std::size_t>(order), 0);
    for (const auto& [key, c] : s.counts) {
        const auto& [inv, c0, ratio] = key;
        const auto& terms = pi.value(inv).terms;
        if (terms.empty()) continue;
        const std::int64_t shift = order - unit_value(t, mu, c0, ratio).exponent_mod(order);
        for (const auto& [e, coef] : terms)
            acc[static_cast<std::size_t>((e * t.p() + shift) % order)] += coef * static_cast<std::int64_t>(c);
    }
    const Cyclotomic v =
        Cyclotomic::from_group_ring(acc).scaled(mpq_class(1, static_cast<unsigned long>(s.group_order)));
    if (!v.is_integer() || v.rational_value() < 0)
        throw ConsistencyError("coset Hom dimension is not a non-negative integer: " + v.to_string());
    return v.rational_value().get_num().get_ui();
}

std::uint64_t coset_hom_dim(const Tower& t, const CosetLambda& l, const MultChar& chi, const MultChar& mu,
                            int precision, unsigned threads) {
    const auto ctx = ff::GLContext::make(t.p(), t.r(), t.n());
    const ff::CuspidalFF pi(ctx, chi.a);
    return coset_hom_dim(t, coset_summary(t, *ctx, l, precision, threads), pi, chi, mu);
}

bool shalika_factorization_holds(const Tower& t, const MultChar& mu) {
    if (mu.conductor() != 2) throw DomainError("shalika_factorization_holds: mu must have conductor 2");
    const std::uint32_t m = t.m();
    const CosetLambda l(m, 1);
    const auto ctx = ff::GLContext::make(t.p(), t.r(), t.n());
    const FiniteField& f = t.amb();
    const Elem delta = t.delta(1).coeff(0);
    const MultChar alpha = restrict_char(t, mu, FieldId::F);
    auto psi = [&](Elem y) { return unit_value(t, mu, 1, f.mul(delta, y)); };

    bool nontrivial = false;
    for (Elem y : ctx->scalars()) nontrivial = nontrivial || !psi(y).is_zero();
    if (!nontrivial) return false;

    const Mat zero = zero_mat(m);
    const auto gl = ctx->enumerate_gl(m);
    bool ok = true;
    ctx->for_each_matrix(m, [&](const Mat& b0) {
        for (const Mat& x0 : gl) {
            const QZ lhs = coset_character(t, l, mu, {x0, zero, b0, zero});
            const Mat y = ctx->mul(ctx->inverse(x0), b0);
            Elem tr = 0;
            for (std::uint32_t i = 0; i < m; ++i) tr = f.add(tr, y.at(i, i));
            const QZ rhs = unit_value(t, alpha, ctx->det(x0), 0) + psi(tr);
            ok = ok && lhs == rhs;
        }
    });
    return ok;
}

nlohmann::json to_json(const CosetAudit& a) {
    nlohmann::json j;
    j["expected"] = to_string(a.expected);
    j["distinguished"] = a.distinguished;
    j["total"] = a.total;
    j["pass"] = a.pass;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : a.entries) j["entries"].push_back({{"lambda", to_string(e.lambda)}, {"dim", e.dim}});
    return j;
}

CosetAuditor::CosetAuditor(TowerPtr t, std::uint32_t lambda_max, unsigned threads)
    : tower_(std::move(t)), lambda_max_(lambda_max) {
    if (tower_->ramified())
        throw DomainError("coset audit is only available for unramified E/F; the ramified double cosets are not described");
    ctx_ = ff::GLContext::make(tower_->p(), tower_->r(), tower_->n());
    box_ = dominant_weights(tower_->m(), lambda_max);
    for (int c = 1; c <= 2; ++c)
        for (const CosetLambda& l : box_) summaries_[c - 1].push_back(coset_summary(*tower_, *ctx_, l, c, threads));
}

CosetAudit CosetAuditor::audit(const MultChar& chi, const MultChar& mu, int precision) const {
    const Tower& t = *tower_;
    if (precision == 0) precision = std::max(1, mu.conductor());
    if (precision < 1 || precision > 2) throw DomainError("coset audit: precision must be 1 or 2");
    const ff::CuspidalFF pi(ctx_, chi.a);

    CosetAudit a;
    a.expected = CosetLambda(t.m(), static_cast<std::uint32_t>(std::max(mu.conductor() - 1, 0)));
    const PtbCase c{tower_, chi, mu, 0};
    a.distinguished = central_compatible(c) && distinction_predicate(c).distinguished;
    std::size_t contributors = 0;
    bool expected_is_one = false;
    for (std::size_t i = 0; i < box_.size(); ++i) {
        const std::uint64_t d = coset_hom_dim(t, summaries_[precision - 1][i], pi, chi, mu);
        a.entries.push_back({box_[i], d});
        a.total += d;
        if (d) ++contributors;
        if (box_[i] == a.expected) expected_is_one = d == 1;
    }
    a.pass = a.distinguished ? contributors == 1 && expected_is_one : contributors == 0;
    return a;
}

CosetAudit audit_box(const TowerPtr& t, const MultChar& chi, const MultChar& mu, std::uint32_t lambda_max,
                     int precision, unsigned threads) {
    return CosetAuditor(t, lambda_max, threads).audit(chi, mu, precision);
}

}  // namespace tlw
