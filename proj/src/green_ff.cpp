#include "tlw/green_ff.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "tlw/errors.hpp"
#include "tlw/parallel.hpp"

namespace tlw::ff {

namespace {

std::uint64_t upow(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

std::int64_t pmod(std::int64_t a, std::int64_t n) {
    a %= n;
    return a < 0 ? a + n : a;
}

std::vector<std::vector<std::uint32_t>> partitions(std::uint32_t n, std::uint32_t max_part) {
    if (n == 0) return {{}};
    std::vector<std::vector<std::uint32_t>> out;
    for (std::uint32_t k = std::min(n, max_part); k >= 1; --k)
        for (auto rest : partitions(n - k, k)) {
            rest.insert(rest.begin(), k);
            out.push_back(std::move(rest));
        }
    return out;
}

// |C_{GL_e(F_Q)}(u)| for u unipotent of Jordan type lambda.
std::uint64_t unipotent_centralizer(std::uint64_t big_q, const std::vector<std::uint32_t>& lambda) {
    std::map<std::uint32_t, std::uint32_t> mult;
    for (auto x : lambda) ++mult[x];
    std::uint64_t exp = 0;
    for (std::uint32_t i = 1; i <= (lambda.empty() ? 0 : lambda.front()); ++i) {
        std::uint64_t conj = 0;
        for (auto x : lambda) conj += (x >= i);
        exp += conj * conj;
    }
    std::uint64_t c = 1;
    for (const auto& [part, m] : mult) {
        exp -= static_cast<std::uint64_t>(m) * (m + 1) / 2;
        for (std::uint32_t j = 1; j <= m; ++j) c *= upow(big_q, j) - 1;
    }
    return c * upow(big_q, exp);
}

}  // namespace

// ------------------------------------------------------------------ context

GLContextPtr GLContext::make(std::uint32_t p, std::uint32_t r, std::uint32_t n) {
    if (!is_prime(p) || p == 2) throw DomainError("GL context needs an odd prime p");
    if (r == 0 || n == 0) throw DomainError("GL context needs r, n >= 1");
    std::shared_ptr<GLContext> c(new GLContext());
    c->p_ = p;
    c->r_ = r;
    c->n_ = n;
    c->q_ = upow(p, r);
    c->field_ = FiniteField::get(p, r * n);
    const FiniteField& f = *c->field_;
    c->scalars_.push_back(0);
    const Elem g = f.subfield_generator(r);
    Elem x = 1;
    for (std::uint64_t i = 0; i + 1 < c->q_; ++i, x = f.mul(x, g)) c->scalars_.push_back(x);
    c->scalar_index_.assign(f.size(), UINT32_MAX);
    for (std::uint32_t i = 0; i < c->scalars_.size(); ++i) c->scalar_index_[c->scalars_[i]] = i;
    c->delta_sq_ = g;
    if (n % 2 == 0) c->delta_ = f.pow(f.subfield_generator(2 * r), static_cast<std::int64_t>((c->q_ + 1) / 2));

    for (std::uint32_t d = 1; d <= n; ++d) {
        if (n % d) continue;
        const std::uint64_t big_q = upow(c->q_, d);
        const Elem gd = f.subfield_generator(r * d);
        Elem lam = 1;
        for (std::uint64_t k = 0; k + 1 < big_q; ++k, lam = f.mul(lam, gd)) {
            std::set<Elem> orbit;
            std::uint64_t min_log = f.log(lam);
            for (std::uint32_t i = 0; i < d; ++i) {
                const Elem y = f.frobenius(lam, static_cast<std::int64_t>(r) * i);
                orbit.insert(y);
                min_log = std::min(min_log, f.log(y));
            }
            if (orbit.size() != d || min_log != f.log(lam)) continue;
            for (const auto& lambda : partitions(n / d, n / d))
                c->classes_.push_back({{d, min_log, lambda}, unipotent_centralizer(big_q, lambda)});
        }
    }
    return c;
}

std::uint64_t GLContext::log_in(Elem x, std::uint32_t d) const {
    const std::uint64_t step = field_->unit_order() / (upow(q_, d) - 1);
    const std::uint64_t l = field_->log(x);
    if (l % step) throw DomainError("element does not lie in F_{q^" + std::to_string(d) + "}");
    return l / step;
}

Mat GLContext::identity(std::uint32_t k) const {
    Mat m{k, std::vector<Elem>(static_cast<std::size_t>(k) * k, 0)};
    for (std::uint32_t i = 0; i < k; ++i) m.at(i, i) = 1;
    return m;
}

Mat GLContext::mul(const Mat& x, const Mat& y) const {
    const FiniteField& f = *field_;
    const std::uint32_t k = x.n;
    Mat m{k, std::vector<Elem>(static_cast<std::size_t>(k) * k, 0)};
    for (std::uint32_t i = 0; i < k; ++i)
        for (std::uint32_t l = 0; l < k; ++l) {
            const Elem a = x.at(i, l);
            if (a == 0) continue;
            for (std::uint32_t j = 0; j < k; ++j) m.at(i, j) = f.add(m.at(i, j), f.mul(a, y.at(l, j)));
        }
    return m;
}

Mat GLContext::pow(const Mat& x, std::uint64_t e) const {
    Mat r = identity(x.n), b = x;
    for (; e; e >>= 1, b = mul(b, b))
        if (e & 1) r = mul(r, b);
    return r;
}

Mat GLContext::inverse(const Mat& x) const {
    const FiniteField& f = *field_;
    const std::uint32_t k = x.n;
    Mat a = x, inv = identity(k);
    for (std::uint32_t c = 0; c < k; ++c) {
        std::uint32_t piv = c;
        while (piv < k && a.at(piv, c) == 0) ++piv;
        if (piv == k) throw DomainError("singular matrix");
        for (std::uint32_t j = 0; j < k; ++j) {
            std::swap(a.at(c, j), a.at(piv, j));
            std::swap(inv.at(c, j), inv.at(piv, j));
        }
        const Elem s = f.inv(a.at(c, c));
        for (std::uint32_t j = 0; j < k; ++j) {
            a.at(c, j) = f.mul(a.at(c, j), s);
            inv.at(c, j) = f.mul(inv.at(c, j), s);
        }
        for (std::uint32_t i = 0; i < k; ++i) {
            if (i == c || a.at(i, c) == 0) continue;
            const Elem t = a.at(i, c);
            for (std::uint32_t j = 0; j < k; ++j) {
                a.at(i, j) = f.sub(a.at(i, j), f.mul(t, a.at(c, j)));
                inv.at(i, j) = f.sub(inv.at(i, j), f.mul(t, inv.at(c, j)));
            }
        }
    }
    return inv;
}

Elem GLContext::det(const Mat& x) const {
    const FiniteField& f = *field_;
    const std::uint32_t k = x.n;
    Mat a = x;
    Elem d = 1;
    for (std::uint32_t c = 0; c < k; ++c) {
        std::uint32_t piv = c;
        while (piv < k && a.at(piv, c) == 0) ++piv;
        if (piv == k) return 0;
        if (piv != c) {
            for (std::uint32_t j = 0; j < k; ++j) std::swap(a.at(c, j), a.at(piv, j));
            d = f.neg(d);
        }
        d = f.mul(d, a.at(c, c));
        const Elem s = f.inv(a.at(c, c));
        for (std::uint32_t i = c + 1; i < k; ++i) {
            if (a.at(i, c) == 0) continue;
            const Elem t = f.mul(a.at(i, c), s);
            for (std::uint32_t j = c; j < k; ++j) a.at(i, j) = f.sub(a.at(i, j), f.mul(t, a.at(c, j)));
        }
    }
    return d;
}

std::uint32_t GLContext::rank(const Mat& x) const {
    const FiniteField& f = *field_;
    const std::uint32_t k = x.n;
    Mat a = x;
    std::uint32_t row = 0;
    for (std::uint32_t c = 0; c < k && row < k; ++c) {
        std::uint32_t piv = row;
        while (piv < k && a.at(piv, c) == 0) ++piv;
        if (piv == k) continue;
        for (std::uint32_t j = 0; j < k; ++j) std::swap(a.at(row, j), a.at(piv, j));
        const Elem s = f.inv(a.at(row, c));
        for (std::uint32_t i = row + 1; i < k; ++i) {
            if (a.at(i, c) == 0) continue;
            const Elem t = f.mul(a.at(i, c), s);
            for (std::uint32_t j = c; j < k; ++j) a.at(i, j) = f.sub(a.at(i, j), f.mul(t, a.at(row, j)));
        }
        ++row;
    }
    return row;
}

std::vector<Elem> GLContext::charpoly(const Mat& x) const {
    const FiniteField& f = *field_;
    const std::uint32_t k = x.n;
    Mat h = x;
    for (std::uint32_t j = 0; j + 2 < k; ++j) {
        std::uint32_t piv = j + 1;
        while (piv < k && h.at(piv, j) == 0) ++piv;
        if (piv == k) continue;
        if (piv != j + 1) {
            for (std::uint32_t c = 0; c < k; ++c) std::swap(h.at(piv, c), h.at(j + 1, c));
            for (std::uint32_t r = 0; r < k; ++r) std::swap(h.at(r, piv), h.at(r, j + 1));
        }
        const Elem s = f.inv(h.at(j + 1, j));
        for (std::uint32_t i = j + 2; i < k; ++i) {
            if (h.at(i, j) == 0) continue;
            const Elem u = f.mul(h.at(i, j), s);
            for (std::uint32_t c = 0; c < k; ++c) h.at(i, c) = f.sub(h.at(i, c), f.mul(u, h.at(j + 1, c)));
            for (std::uint32_t r = 0; r < k; ++r) h.at(r, j + 1) = f.add(h.at(r, j + 1), f.mul(u, h.at(r, i)));
        }
    }
    // p_k = (x - h_kk) p_{k-1} - sum_i h_{i-1,k-1} (prod h_{l,l-1}) p_{i-1}
    std::vector<std::vector<Elem>> p{{1}};
    for (std::uint32_t c = 1; c <= k; ++c) {
        std::vector<Elem> next(c + 1, 0);
        const std::vector<Elem>& prev = p[c - 1];
        for (std::size_t i = 0; i < prev.size(); ++i) {
            next[i + 1] = f.add(next[i + 1], prev[i]);
            next[i] = f.sub(next[i], f.mul(h.at(c - 1, c - 1), prev[i]));
        }
        Elem t = 1;
        for (std::uint32_t i = c - 1; i >= 1; --i) {
            t = f.mul(t, h.at(i, i - 1));
            if (t == 0) break;
            const Elem coef = f.mul(t, h.at(i - 1, c - 1));
            for (std::size_t l = 0; l < p[i - 1].size(); ++l) next[l] = f.sub(next[l], f.mul(coef, p[i - 1][l]));
        }
        p.push_back(std::move(next));
    }
    return p[k];
}

const GLContext::PrimaryInfo& GLContext::primary_info(const std::vector<Elem>& cp) const {
    {
        std::lock_guard lock(mu_);
        auto it = info_.find(cp);
        if (it != info_.end()) return it->second;
    }
    const FiniteField& f = *field_;
    auto eval = [&](Elem x) {
        Elem acc = 0;
        for (std::size_t i = cp.size(); i-- > 0;) acc = f.add(f.mul(acc, x), cp[i]);
        return acc;
    };
    PrimaryInfo info;
    std::vector<Elem> roots;
    Elem x = 1;
    for (std::uint64_t i = 0; i < f.unit_order(); ++i, x = f.mul(x, f.gamma()))
        if (eval(x) == 0) roots.push_back(x);
    const std::uint32_t k = static_cast<std::uint32_t>(cp.size() - 1);
    if (!roots.empty()) {
        std::set<Elem> orbit;
        for (std::uint32_t i = 0; i < k * r_; i += r_) orbit.insert(f.frobenius(roots[0], i));
        const auto d = static_cast<std::uint32_t>(roots.size());
        if (orbit.size() == d && k % d == 0) {
            std::vector<Elem> fac{1};
            for (Elem rt : roots) {
                std::vector<Elem> nf(fac.size() + 1, 0);
                for (std::size_t i = 0; i < fac.size(); ++i) {
                    nf[i + 1] = f.add(nf[i + 1], fac[i]);
                    nf[i] = f.sub(nf[i], f.mul(rt, fac[i]));
                }
                fac = std::move(nf);
            }
            std::vector<Elem> pw{1};
            for (std::uint32_t e = 0; e < k / d; ++e) {
                std::vector<Elem> nf(pw.size() + fac.size() - 1, 0);
                for (std::size_t i = 0; i < pw.size(); ++i)
                    for (std::size_t j = 0; j < fac.size(); ++j) nf[i + j] = f.add(nf[i + j], f.mul(pw[i], fac[j]));
                pw = std::move(nf);
            }
            if (pw == cp) {
                info.primary = true;
                info.d = d;
                info.orbit_log = f.unit_order();
                for (Elem rt : roots) info.orbit_log = std::min(info.orbit_log, f.log(rt));
                info.factor = std::move(fac);
            }
        }
    }
    std::lock_guard lock(mu_);
    return info_.emplace(cp, std::move(info)).first->second;
}

Mat GLContext::poly_at(const std::vector<Elem>& poly, const Mat& x) const {
    const FiniteField& f = *field_;
    Mat acc{x.n, std::vector<Elem>(x.a.size(), 0)};
    for (std::size_t i = poly.size(); i-- > 0;) {
        acc = mul(acc, x);
        for (std::uint32_t d = 0; d < x.n; ++d) acc.at(d, d) = f.add(acc.at(d, d), poly[i]);
    }
    return acc;
}

std::vector<std::uint32_t> GLContext::partition_from_kernels(const std::vector<std::uint32_t>& ker, std::uint32_t d) const {
    // ker[j] = dim ker f(x)^j; the number of parts >= j is (ker[j] - ker[j-1]) / d.
    std::vector<std::uint32_t> at_least;
    for (std::size_t j = 1; j < ker.size(); ++j) {
        const std::uint32_t diff = ker[j] - ker[j - 1];
        if (diff % d) throw ConsistencyError("kernel dimensions are not multiples of the eigenvalue degree");
        at_least.push_back(diff / d);
    }
    at_least.push_back(0);
    std::vector<std::uint32_t> parts;
    for (std::size_t j = at_least.size() - 1; j-- > 0;)
        for (std::uint32_t c = at_least[j] - at_least[j + 1]; c > 0; --c) parts.push_back(static_cast<std::uint32_t>(j + 1));
    return parts;
}

ConjInvariant GLContext::invariant(const Mat& x) const {
    const PrimaryInfo& info = primary_info(charpoly(x));
    if (!info.primary) return {};
    const std::uint32_t e = x.n / info.d;
    const Mat fx = poly_at(info.factor, x);
    std::vector<std::uint32_t> ker{0};
    Mat pw = fx;
    for (std::uint32_t j = 1; j <= e; ++j) {
        ker.push_back(x.n - rank(pw));
        if (ker.back() == x.n) break;
        pw = mul(pw, fx);
    }
    return {info.d, info.orbit_log, partition_from_kernels(ker, info.d)};
}

JordanDecomposition GLContext::jordan_decompose(const Mat& x) const {
    if (det(x) == 0) throw DomainError("jordan_decompose: singular matrix");
    // Every element order divides p^a * E with p^a >= n and E = lcm(q^d - 1).
    std::uint64_t e = 1;
    for (std::uint32_t d = 1; d <= x.n; ++d) e = std::lcm(e, upow(q_, d) - 1);
    std::uint64_t pa = 1;
    while (pa < x.n) pa *= p_;
    std::uint64_t inv = 0;
    for (std::uint64_t c = 1; c < e || e == 1; ++c)
        if ((pa % e) * c % e == 1 % e) {
            inv = c;
            break;
        }
    JordanDecomposition out;
    out.s = pow(x, pa * inv);
    out.u = mul(x, inverse(out.s));
    const PrimaryInfo& info = primary_info(charpoly(out.s));
    if (!info.primary) return out;
    Mat um = out.u;
    for (std::uint32_t i = 0; i < x.n; ++i) um.at(i, i) = field_->sub(um.at(i, i), 1);
    std::vector<std::uint32_t> ker{0};
    Mat pw = um;
    for (std::uint32_t j = 1; j <= x.n / info.d; ++j) {
        ker.push_back(x.n - rank(pw));
        if (ker.back() == x.n) break;
        pw = mul(pw, um);
    }
    out.invariant = {info.d, info.orbit_log, partition_from_kernels(ker, info.d)};
    return out;
}

std::uint64_t GLContext::gl_order(std::uint64_t q, std::uint32_t k) {
    std::uint64_t o = 1;
    for (std::uint32_t i = 0; i < k; ++i) o *= upow(q, k) - upow(q, i);
    return o;
}

void GLContext::for_each_matrix(std::uint32_t k, const std::function<void(const Mat&)>& f) const {
    const std::size_t cells = static_cast<std::size_t>(k) * k;
    std::vector<std::uint32_t> digit(cells, 0);
    Mat m{k, std::vector<Elem>(cells, 0)};
    while (true) {
        f(m);
        std::size_t i = 0;
        while (i < cells && ++digit[i] == q_) {
            digit[i] = 0;
            m.a[i] = 0;
            ++i;
        }
        if (i == cells) return;
        m.a[i] = scalars_[digit[i]];
    }
}

std::vector<Mat> GLContext::enumerate_gl(std::uint32_t k) const {
    std::vector<Mat> out;
    for_each_matrix(k, [&](const Mat& m) {
        if (det(m) != 0) out.push_back(m);
    });
    return out;
}

std::uint64_t GLContext::encode(const Mat& x) const {
    std::uint64_t v = 0;
    for (std::size_t i = x.a.size(); i-- > 0;) {
        const std::uint32_t d = scalar_index_[x.a[i]];
        if (d == UINT32_MAX) throw DomainError("matrix entry outside F_q");
        v = v * q_ + d;
    }
    return v;
}

// ---------------------------------------------------------------- cuspidal

bool is_regular_theta(const GLContext& ctx, std::uint64_t theta) {
    const std::uint64_t u = ctx.field().unit_order();
    std::set<std::uint64_t> orbit;
    std::uint64_t t = theta % u;
    for (std::uint32_t i = 0; i < ctx.n(); ++i, t = static_cast<std::uint64_t>(static_cast<__int128>(t) * ctx.q() % u))
        orbit.insert(t);
    return orbit.size() == ctx.n();
}

std::vector<std::uint64_t> regular_theta_representatives(const GLContext& ctx) {
    const std::uint64_t u = ctx.field().unit_order();
    std::vector<std::uint64_t> out;
    for (std::uint64_t a = 0; a < u; ++a) {
        if (!is_regular_theta(ctx, a)) continue;
        std::uint64_t t = a, lo = a;
        for (std::uint32_t i = 0; i < ctx.n(); ++i, t = t * ctx.q() % u) lo = std::min(lo, t);
        if (lo == a) out.push_back(a);
    }
    return out;
}

std::vector<std::vector<std::uint32_t>> proper_compositions(std::uint32_t n) {
    std::vector<std::vector<std::uint32_t>> out;
    for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
        if (mask == 0) continue;
        std::vector<std::uint32_t> blocks{1};
        for (std::uint32_t i = 0; i + 1 < n; ++i) {
            if (mask & (1u << i))
                blocks.push_back(1);
            else
                ++blocks.back();
        }
        out.push_back(std::move(blocks));
    }
    return out;
}

CuspidalFF::CuspidalFF(GLContextPtr ctx, std::uint64_t theta) : ctx_(std::move(ctx)), theta_(theta) {
    if (!is_regular_theta(*ctx_, theta_)) throw DomainError("theta is not regular");
    const auto ord = static_cast<std::int64_t>(ctx_->field().unit_order());
    const std::int64_t n = ctx_->n();
    const auto q = static_cast<std::int64_t>(ctx_->q());
    for (const PrimaryClass& c : ctx_->primary_classes()) {
        const ConjInvariant& inv = c.invariant;
        std::int64_t coef = (n % 2 == 1) ? 1 : -1;
        for (std::size_t j = 1; j < inv.partition.size(); ++j)
            coef *= 1 - static_cast<std::int64_t>(upow(q, inv.d * j));
        std::map<std::int64_t, std::int64_t> acc;
        std::int64_t lg = static_cast<std::int64_t>(inv.orbit_log);
        for (std::uint32_t i = 0; i < inv.d; ++i, lg = lg * q % ord)
            acc[static_cast<std::int64_t>(static_cast<__int128>(theta_) * lg % ord)] += coef;
        CharValue v;
        for (const auto& [e, c2] : acc)
            if (c2 != 0) v.terms.emplace_back(e, c2);
        values_.emplace(inv, std::move(v));
    }
}

const CharValue& CuspidalFF::value(const ConjInvariant& inv) const {
    if (!inv.primary()) return zero_;
    auto it = values_.find(inv);
    if (it == values_.end()) throw ConsistencyError("primary invariant missing from the class list");
    return it->second;
}

Cyclotomic CuspidalFF::value_exact(const ConjInvariant& inv) const {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(order()), 0);
    for (const auto& [e, c] : value(inv).terms) counts[static_cast<std::size_t>(e)] += c;
    return Cyclotomic::from_group_ring(counts);
}

Cyclotomic CuspidalFF::degree() const {
    return value_exact({1, 0, std::vector<std::uint32_t>(ctx_->n(), 1)});
}

Cyclotomic CuspidalFF::norm() const {
    Cyclotomic acc;
    for (const PrimaryClass& c : ctx_->primary_classes()) {
        const Cyclotomic v = value_exact(c.invariant);
        acc += (v * v.conj()).scaled(mpq_class(1, static_cast<unsigned long>(c.centralizer)));
    }
    return acc;
}

namespace {

// Calls f on every block upper triangular matrix with the given diagonal
// blocks; `diag` lists the admissible matrices for each block.
void for_each_parabolic(const GLContext& ctx, const std::vector<std::uint32_t>& blocks,
                        const std::vector<std::vector<Mat>>& diag, const std::function<void(const Mat&)>& f) {
    const std::uint32_t n = std::accumulate(blocks.begin(), blocks.end(), 0u);
    std::vector<std::uint32_t> block_of, offset;
    for (std::uint32_t b = 0, o = 0; b < blocks.size(); o += blocks[b], ++b) {
        offset.push_back(o);
        for (std::uint32_t i = 0; i < blocks[b]; ++i) block_of.push_back(b);
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> free_cells;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j)
            if (block_of[i] < block_of[j]) free_cells.emplace_back(i, j);
    const std::uint64_t q = ctx.q();
    std::vector<std::size_t> choice(blocks.size(), 0);
    Mat m{n, std::vector<Elem>(static_cast<std::size_t>(n) * n, 0)};
    while (true) {
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const Mat& d = diag[b][choice[b]];
            for (std::uint32_t i = 0; i < blocks[b]; ++i)
                for (std::uint32_t j = 0; j < blocks[b]; ++j) m.at(offset[b] + i, offset[b] + j) = d.at(i, j);
        }
        std::vector<std::uint32_t> digit(free_cells.size(), 0);
        for (const auto& [i, j] : free_cells) m.at(i, j) = 0;
        while (true) {
            f(m);
            std::size_t k = 0;
            while (k < free_cells.size() && ++digit[k] == q) {
                digit[k] = 0;
                m.at(free_cells[k].first, free_cells[k].second) = 0;
                ++k;
            }
            if (k == free_cells.size()) break;
            m.at(free_cells[k].first, free_cells[k].second) = ctx.scalars()[digit[k]];
        }
        std::size_t b = 0;
        while (b < blocks.size() && ++choice[b] == diag[b].size()) choice[b++] = 0;
        if (b == blocks.size()) return;
    }
}

Cyclotomic average(const CuspidalFF& pi, const std::vector<std::uint32_t>& blocks, bool levi) {
    const GLContext& ctx = pi.context();
    std::vector<std::vector<Mat>> diag;
    for (std::uint32_t b : blocks) diag.push_back(levi ? ctx.enumerate_gl(b) : std::vector<Mat>{ctx.identity(b)});
    std::vector<std::int64_t> counts(static_cast<std::size_t>(pi.order()), 0);
    std::uint64_t total = 0;
    for_each_parabolic(ctx, blocks, diag, [&](const Mat& m) {
        ++total;
        for (const auto& [e, c] : pi.value(m).terms) counts[static_cast<std::size_t>(e)] += c;
    });
    return Cyclotomic::from_group_ring(counts).scaled(mpq_class(1, static_cast<unsigned long>(total)));
}

}  // namespace

Cyclotomic CuspidalFF::radical_average(const std::vector<std::uint32_t>& blocks) const { return average(*this, blocks, false); }

Cyclotomic CuspidalFF::parabolic_pairing(const std::vector<std::uint32_t>& blocks) const {
    return average(*this, blocks, true);
}

// -------------------------------------------------------------- Hom spaces

namespace {

Mat block2(const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
    const std::uint32_t m = a.n;
    Mat x{2 * m, std::vector<Elem>(static_cast<std::size_t>(4) * m * m, 0)};
    for (std::uint32_t i = 0; i < m; ++i)
        for (std::uint32_t j = 0; j < m; ++j) {
            x.at(i, j) = a.at(i, j);
            x.at(i, j + m) = b.at(i, j);
            x.at(i + m, j) = c.at(i, j);
            x.at(i + m, j + m) = d.at(i, j);
        }
    return x;
}

std::uint32_t half_rank(const GLContext& ctx) {
    if (ctx.n() % 2) throw DomainError("requires even n");
    return ctx.n() / 2;
}

std::vector<Mat> all_matrices(const GLContext& ctx, std::uint32_t k) {
    std::vector<Mat> out;
    ctx.for_each_matrix(k, [&](const Mat& m) { out.push_back(m); });
    return out;
}

Elem trace(const GLContext& ctx, const Mat& x) {
    Elem t = 0;
    for (std::uint32_t i = 0; i < x.n; ++i) t = ctx.field().add(t, x.at(i, i));
    return t;
}

// h = a + delta b as a matrix over F_{q^2}, and its image in GL_2m(F_q).
std::pair<Elem, Mat> hbar_element(const GLContext& ctx, const Mat& a, const Mat& b) {
    const FiniteField& f = ctx.field();
    Mat h = a, db = b;
    for (std::size_t i = 0; i < a.a.size(); ++i) {
        h.a[i] = f.add(a.a[i], f.mul(ctx.sqrt_nonsquare(), b.a[i]));
        db.a[i] = f.mul(ctx.nonsquare(), b.a[i]);
    }
    return {ctx.det(h), block2(a, b, db, a)};
}

std::uint64_t to_dim(const Cyclotomic& v) {
    if (!v.is_integer() || v.rational_value() < 0)
        throw ConsistencyError("Hom dimension is not a non-negative integer: " + v.to_string());
    return v.rational_value().get_num().get_ui();
}

template <class Key>
void merge_counts(std::map<Key, std::uint64_t>& into, const std::map<Key, std::uint64_t>& part) {
    for (const auto& [k, c] : part) into[k] += c;
}

}  // namespace

ShalikaSummary shalika_summary(const GLContext& ctx, unsigned threads) {
    const std::uint32_t m = half_rank(ctx);
    const std::vector<Mat> gs = ctx.enumerate_gl(m);
    const std::vector<Mat> xs = all_matrices(ctx, m);
    using Map = std::map<std::tuple<ConjInvariant, std::uint64_t, Elem>, std::uint64_t>;
    const auto parts = parallel_map(gs.size(), threads, [&](std::size_t i) {
        Map local;
        const Mat& g = gs[i];
        const std::uint64_t ld = ctx.log_in(ctx.det(g), 1);
        const Mat zero{m, std::vector<Elem>(static_cast<std::size_t>(m) * m, 0)};
        for (const Mat& x : xs) ++local[{ctx.invariant(block2(g, ctx.mul(g, x), zero, g)), ld, trace(ctx, x)}];
        return local;
    });
    ShalikaSummary s;
    s.group_order = gs.size() * xs.size();
    for (const auto& p : parts) merge_counts(s.counts, p);
    return s;
}

HbarSummary hbar_summary(const GLContext& ctx, unsigned threads) {
    const std::uint32_t m = half_rank(ctx);
    const std::vector<Mat> as = all_matrices(ctx, m);
    using Map = std::map<std::pair<ConjInvariant, std::uint64_t>, std::uint64_t>;
    const auto parts = parallel_map(as.size(), threads, [&](std::size_t i) {
        Map local;
        for (const Mat& b : as) {
            const auto [d, x] = hbar_element(ctx, as[i], b);
            if (d == 0) continue;
            ++local[{ctx.invariant(x), ctx.log_in(d, 2)}];
        }
        return local;
    });
    HbarSummary h;
    for (const auto& p : parts) merge_counts(h.counts, p);
    for (const auto& [k, c] : h.counts) h.group_order += c;
    return h;
}

std::uint64_t shalika_hom_dim(const CuspidalFF& pi, std::uint64_t alpha, Elem b, const ShalikaSummary& s) {
    const GLContext& ctx = pi.context();
    if (b == 0) throw DomainError("shalika_hom_dim: trivial additive character");
    const std::int64_t ord = pi.order();
    const std::int64_t n = std::lcm(ord, static_cast<std::int64_t>(ctx.p()));
    const std::int64_t q1 = static_cast<std::int64_t>(ctx.q()) - 1;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
    for (const auto& [key, c] : s.counts) {
        const auto& [inv, ld, tr] = key;
        const std::int64_t shift = -static_cast<std::int64_t>((alpha % q1) * ld % q1) * (n / q1) -
                                   static_cast<std::int64_t>(ctx.trace_to_prime(ctx.field().mul(b, tr))) * (n / ctx.p());
        for (const auto& [e, coef] : pi.value(inv).terms)
            counts[static_cast<std::size_t>(pmod(e * (n / ord) + shift, n))] += coef * static_cast<std::int64_t>(c);
    }
    return to_dim(Cyclotomic::from_group_ring(counts).scaled(mpq_class(1, static_cast<unsigned long>(s.group_order))));
}

std::uint64_t ff_distinction_dim(const CuspidalFF& pi, std::uint64_t mu, const HbarSummary& h) {
    const GLContext& ctx = pi.context();
    const std::int64_t n = pi.order();
    const std::int64_t q2 = static_cast<std::int64_t>(ctx.q() * ctx.q()) - 1;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
    for (const auto& [key, c] : h.counts) {
        const auto& [inv, ld] = key;
        const std::int64_t shift = -static_cast<std::int64_t>((mu % q2) * ld % q2) * (n / q2);
        for (const auto& [e, coef] : pi.value(inv).terms)
            counts[static_cast<std::size_t>(pmod(e + shift, n))] += coef * static_cast<std::int64_t>(c);
    }
    return to_dim(Cyclotomic::from_group_ring(counts).scaled(mpq_class(1, static_cast<unsigned long>(h.group_order))));
}

Cyclotomic shalika_pairing(const GLContext& ctx, const ClassFunction& chi, std::uint64_t alpha, Elem b) {
    const std::uint32_t m = half_rank(ctx);
    const auto q1 = static_cast<std::int64_t>(ctx.q()) - 1;
    const std::int64_t n = q1 * ctx.p();
    const Mat zero{m, std::vector<Elem>(static_cast<std::size_t>(m) * m, 0)};
    const std::vector<Mat> xs = all_matrices(ctx, m);
    Cyclotomic acc;
    std::uint64_t size = 0;
    for (const Mat& g : ctx.enumerate_gl(m)) {
        const std::int64_t ld = static_cast<std::int64_t>(ctx.log_in(ctx.det(g), 1));
        for (const Mat& x : xs) {
            ++size;
            const std::int64_t e = -static_cast<std::int64_t>(alpha % q1) * ld * ctx.p() -
                                   static_cast<std::int64_t>(ctx.trace_to_prime(ctx.field().mul(b, trace(ctx, x)))) * q1;
            acc += chi(block2(g, ctx.mul(g, x), zero, g)) * Cyclotomic::root(pmod(e, n), n);
        }
    }
    return acc.scaled(mpq_class(1, static_cast<unsigned long>(size)));
}

Cyclotomic hbar_pairing(const GLContext& ctx, const ClassFunction& chi, std::uint64_t mu) {
    const std::uint32_t m = half_rank(ctx);
    const auto q2 = static_cast<std::int64_t>(ctx.q() * ctx.q()) - 1;
    const std::vector<Mat> as = all_matrices(ctx, m);
    Cyclotomic acc;
    std::uint64_t size = 0;
    for (const Mat& a : as)
        for (const Mat& b : as) {
            const auto [d, x] = hbar_element(ctx, a, b);
            if (d == 0) continue;
            ++size;
            const std::int64_t e = -static_cast<std::int64_t>(mu % q2) * static_cast<std::int64_t>(ctx.log_in(d, 2));
            acc += chi(x) * Cyclotomic::root(pmod(e, q2), q2);
        }
    return acc.scaled(mpq_class(1, static_cast<unsigned long>(size)));
}

// ------------------------------------------------------------------- Dixon

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    for (b %= m; e; e >>= 1, b = mulmod(b, b, m))
        if (e & 1) r = mulmod(r, b, m);
    return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t m) { return powmod(a, m - 2, m); }

using Vec = std::vector<std::uint64_t>;

// Null space of a k x k matrix modulo P, as column vectors.
std::vector<Vec> null_space(std::vector<Vec> a, std::uint64_t p) {
    const std::size_t k = a.size();
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t c = 0; c < k && row < k; ++c) {
        std::size_t piv = row;
        while (piv < k && a[piv][c] == 0) ++piv;
        if (piv == k) continue;
        std::swap(a[piv], a[row]);
        const std::uint64_t s = invmod(a[row][c], p);
        for (auto& v : a[row]) v = mulmod(v, s, p);
        for (std::size_t i = 0; i < k; ++i) {
            if (i == row || a[i][c] == 0) continue;
            const std::uint64_t t = a[i][c];
            for (std::size_t j = 0; j < k; ++j) a[i][j] = (a[i][j] + p - mulmod(t, a[row][j], p)) % p;
        }
        pivot_col.push_back(c);
        ++row;
    }
    std::vector<Vec> out;
    for (std::size_t f = 0; f < k; ++f) {
        if (std::find(pivot_col.begin(), pivot_col.end(), f) != pivot_col.end()) continue;
        Vec v(k, 0);
        v[f] = 1;
        for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = (p - a[r][f]) % p;
        out.push_back(std::move(v));
    }
    return out;
}

// Coordinates of the columns of `target` in the basis `basis` (both r x k,
// stored as lists of columns); the columns of target must lie in the span.
std::vector<Vec> coordinates(const std::vector<Vec>& basis, const std::vector<Vec>& target, std::uint64_t p) {
    const std::size_t k = basis.size(), r = basis[0].size();
    // Augmented system rows: r equations, k unknowns, k right-hand sides.
    std::vector<Vec> a(r, Vec(2 * k, 0));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            a[i][j] = basis[j][i];
            a[i][k + j] = target[j][i];
        }
    std::size_t row = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = row;
        while (piv < r && a[piv][c] == 0) ++piv;
        if (piv == r) throw ConsistencyError("dependent basis in Dixon splitting");
        std::swap(a[piv], a[row]);
        const std::uint64_t s = invmod(a[row][c], p);
        for (auto& v : a[row]) v = mulmod(v, s, p);
        for (std::size_t i = 0; i < r; ++i) {
            if (i == row || a[i][c] == 0) continue;
            const std::uint64_t t = a[i][c];
            for (std::size_t j = 0; j < 2 * k; ++j) a[i][j] = (a[i][j] + p - mulmod(t, a[row][j], p)) % p;
        }
        ++row;
    }
    std::vector<Vec> c(k, Vec(k, 0));  // c[j] = coordinates of target column j
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < k; ++i) c[j][i] = a[i][k + j];
    return c;
}

}  // namespace

std::uint64_t dixon_prime(std::uint64_t q) {
    std::uint64_t p = 2;
    while (q % p) ++p;
    const std::uint64_t e = std::lcm(q * q - 1, p * (q - 1));
    std::uint64_t c = e + 1;
    while (!is_prime(c)) c += e;
    return c;
}

CharacterTable dixon_table(const GLContextPtr& ctx) {
    if (ctx->n() != 2) throw DomainError("dixon_table: GL_2 only");
    const std::uint64_t order = ctx->order();
    if (order > 100000) throw DomainError("dixon_table: group too large");
    CharacterTable t;
    t.ctx = ctx;
    const std::vector<Mat> elems = ctx->enumerate_gl(2);
    const std::uint64_t q = ctx->q();
    t.class_of.assign(static_cast<std::size_t>(q * q * q * q), UINT32_MAX);

    std::vector<Mat> gens;
    {
        Mat a = ctx->identity(2), b = ctx->identity(2), c = ctx->identity(2);
        a.at(0, 1) = 1;
        b.at(1, 0) = 1;
        c.at(0, 0) = ctx->scalar_generator();
        gens = {a, b, c};
    }
    std::vector<Mat> gens_inv;
    for (const Mat& g : gens) gens_inv.push_back(ctx->inverse(g));

    std::vector<std::vector<Mat>> members;
    auto add_class = [&](const Mat& start) {
        const auto id = static_cast<std::uint32_t>(members.size());
        members.emplace_back();
        std::vector<Mat> stack{start};
        t.class_of[ctx->encode(start)] = id;
        while (!stack.empty()) {
            Mat x = std::move(stack.back());
            stack.pop_back();
            for (std::size_t i = 0; i < gens.size(); ++i) {
                Mat y = ctx->mul(ctx->mul(gens[i], x), gens_inv[i]);
                auto& slot = t.class_of[ctx->encode(y)];
                if (slot == UINT32_MAX) {
                    slot = id;
                    stack.push_back(std::move(y));
                }
            }
            members.back().push_back(std::move(x));
        }
        t.reps.push_back(start);
    };
    add_class(ctx->identity(2));
    for (const Mat& g : elems)
        if (t.class_of[ctx->encode(g)] == UINT32_MAX) add_class(g);
    const std::size_t r = members.size();
    for (const auto& m : members) t.class_sizes.push_back(m.size());

    std::uint64_t exponent = 1;
    for (const Mat& g : t.reps) {
        std::uint64_t o = 1;
        for (Mat x = g; x != ctx->identity(2); x = ctx->mul(x, g)) ++o;
        t.element_orders.push_back(o);
        exponent = std::lcm(exponent, o);
    }
    std::uint64_t prime = exponent + 1;
    while (!is_prime(prime)) prime += exponent;

    // a[i][j][k] = #{x in C_i : x^{-1} z_k in C_j}
    std::vector<std::vector<Vec>> a(r, std::vector<Vec>(r, Vec(r, 0)));
    for (std::size_t i = 0; i < r; ++i)
        for (const Mat& x : members[i]) {
            const Mat xi = ctx->inverse(x);
            for (std::size_t k = 0; k < r; ++k) ++a[i][t.class_of[ctx->encode(ctx->mul(xi, t.reps[k]))]][k];
        }

    std::vector<std::vector<Vec>> spaces;
    {
        std::vector<Vec> basis;
        for (std::size_t j = 0; j < r; ++j) {
            Vec v(r, 0);
            v[j] = 1;
            basis.push_back(v);
        }
        spaces.push_back(std::move(basis));
    }
    for (std::size_t i = 0; i < r; ++i) {
        std::vector<std::vector<Vec>> next;
        for (auto& basis : spaces) {
            if (basis.size() == 1) {
                next.push_back(std::move(basis));
                continue;
            }
            std::vector<Vec> images;
            for (const Vec& b : basis) {
                Vec img(r, 0);
                for (std::size_t j = 0; j < r; ++j)
                    for (std::size_t k = 0; k < r; ++k) img[j] = (img[j] + a[i][j][k] * b[k]) % prime;
                images.push_back(std::move(img));
            }
            const std::vector<Vec> c = coordinates(basis, images, prime);
            const std::size_t k = basis.size();
            std::size_t found = 0;
            for (std::uint64_t lam = 0; lam < prime && found < k; ++lam) {
                std::vector<Vec> m(k, Vec(k, 0));
                for (std::size_t row = 0; row < k; ++row)
                    for (std::size_t col = 0; col < k; ++col)
                        m[row][col] = (c[col][row] + (row == col ? prime - lam : 0)) % prime;
                const auto ns = null_space(m, prime);
                if (ns.empty()) continue;
                std::vector<Vec> sub;
                for (const Vec& v : ns) {
                    Vec w(r, 0);
                    for (std::size_t l = 0; l < k; ++l)
                        for (std::size_t j = 0; j < r; ++j) w[j] = (w[j] + v[l] * basis[l][j]) % prime;
                    sub.push_back(std::move(w));
                }
                found += sub.size();
                next.push_back(std::move(sub));
            }
            if (found != k) throw ConsistencyError("class matrix is not diagonalizable modulo P");
        }
        spaces = std::move(next);
    }
    if (spaces.size() != r) throw ConsistencyError("class sums do not separate the characters");

    std::vector<std::uint32_t> inverse_class(r);
    for (std::size_t i = 0; i < r; ++i) inverse_class[i] = t.class_of[ctx->encode(ctx->inverse(t.reps[i]))];
    std::vector<std::vector<std::uint32_t>> power_class(r);
    for (std::size_t i = 0; i < r; ++i) {
        Mat x = ctx->identity(2);
        for (std::uint64_t l = 0; l < t.element_orders[i]; ++l, x = ctx->mul(x, t.reps[i]))
            power_class[i].push_back(t.class_of[ctx->encode(x)]);
    }
    std::uint64_t gen = 2;
    for (;; ++gen) {
        bool ok = true;
        for (std::uint64_t f = 2; f <= prime - 1 && ok; ++f)
            if ((prime - 1) % f == 0 && is_prime(f) && powmod(gen, (prime - 1) / f, prime) == 1) ok = false;
        if (ok) break;
    }
    const std::uint64_t w = powmod(gen, (prime - 1) / exponent, prime);

    for (const auto& sp : spaces) {
        Vec v = sp[0];
        const std::uint64_t s0 = invmod(v[0], prime);
        for (auto& x : v) x = mulmod(x, s0, prime);
        std::uint64_t s = 0;
        for (std::size_t i = 0; i < r; ++i)
            s = (s + mulmod(mulmod(v[i], v[inverse_class[i]], prime), invmod(t.class_sizes[i] % prime, prime), prime)) %
                prime;
        const std::uint64_t dsq = mulmod(order % prime, invmod(s, prime), prime);
        std::uint64_t deg = 0;
        for (std::uint64_t d = 1; d * d <= order; ++d)
            if (order % d == 0 && d * d % prime == dsq) {
                deg = d;
                break;
            }
        if (deg == 0) throw ConsistencyError("no character degree matches modulo P");
        Vec chi(r);
        for (std::size_t i = 0; i < r; ++i)
            chi[i] = mulmod(mulmod(v[i], deg, prime), invmod(t.class_sizes[i] % prime, prime), prime);
        std::vector<Cyclotomic> row;
        for (std::size_t i = 0; i < r; ++i) {
            const std::uint64_t o = t.element_orders[i];
            const std::uint64_t z = powmod(w, exponent / o, prime);
            std::vector<std::int64_t> mult(o, 0);
            for (std::uint64_t k = 0; k < o; ++k) {
                std::uint64_t acc = 0;
                for (std::uint64_t l = 0; l < o; ++l)
                    acc = (acc + mulmod(chi[power_class[i][l]], powmod(z, (o - (k * l) % o) % o, prime), prime)) % prime;
                const std::uint64_t mk = mulmod(acc, invmod(o % prime, prime), prime);
                if (mk > deg) throw ConsistencyError("eigenvalue multiplicity out of range");
                mult[k] = static_cast<std::int64_t>(mk);
            }
            row.push_back(Cyclotomic::from_group_ring(mult));
        }
        t.rows.push_back(std::move(row));
    }
    std::sort(t.rows.begin(), t.rows.end(), [](const auto& x, const auto& y) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const std::string a = x[i].to_string(), b = y[i].to_string();
            if (a != b) return a < b;
        }
        return false;
    });
    return t;
}

}  // namespace tlw::ff
