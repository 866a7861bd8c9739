#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "tlw/cyclotomic.hpp"
#include "tlw/finite_field.hpp"

namespace tlw::ff {

using Elem = FiniteField::Elem;

/// Square matrix over F_q, entries stored as elements of the ambient F_{q^n}.
struct Mat {
    std::uint32_t n = 0;
    std::vector<Elem> a;

    Elem& at(std::uint32_t i, std::uint32_t j) { return a[i * n + j]; }
    Elem at(std::uint32_t i, std::uint32_t j) const { return a[i * n + j]; }
    bool operator==(const Mat&) const = default;
};

/// Conjugacy data of a primary element: the semisimple part has a single
/// eigenvalue orbit of degree d (orbit_log is the smallest discrete log in
/// the orbit, in the ambient field), and the unipotent part has Jordan type
/// `partition` of n/d over F_{q^d}. d = 0 marks a non-primary element.
struct ConjInvariant {
    std::uint32_t d = 0;
    std::uint64_t orbit_log = 0;
    std::vector<std::uint32_t> partition;

    bool primary() const { return d != 0; }
    auto operator<=>(const ConjInvariant&) const = default;
};

struct JordanDecomposition {
    Mat s;
    Mat u;
    ConjInvariant invariant;
};

struct PrimaryClass {
    ConjInvariant invariant;
    std::uint64_t centralizer = 0;
};

/// sum_k c_k zeta_N^{e_k} for a modulus N fixed by the producer.
struct CharValue {
    std::vector<std::pair<std::int64_t, std::int64_t>> terms;
};

class GLContext;
using GLContextPtr = std::shared_ptr<const GLContext>;

/// GL_n(F_q) together with the field F_{q^n} holding its eigenvalues.
class GLContext : public std::enable_shared_from_this<GLContext> {
public:
    /// q = p^r.
    static GLContextPtr make(std::uint32_t p, std::uint32_t r, std::uint32_t n);

    std::uint32_t p() const { return p_; }
    std::uint32_t r() const { return r_; }
    std::uint64_t q() const { return q_; }
    std::uint32_t n() const { return n_; }
    const FiniteField& field() const { return *field_; }
    /// The q elements of F_q.
    const std::vector<Elem>& scalars() const { return scalars_; }
    /// Generator of F_q^*.
    Elem scalar_generator() const { return field_->subfield_generator(r_); }
    /// Discrete log in F_{q^d}^* relative to its standard generator.
    std::uint64_t log_in(Elem x, std::uint32_t d) const;
    /// Tr_{F_q/F_p}(x) in 0..p-1.
    std::uint32_t trace_to_prime(Elem x) const { return field_->trace_to_prime(x, r_); }

    Mat identity(std::uint32_t k) const;
    Mat mul(const Mat& x, const Mat& y) const;
    Mat pow(const Mat& x, std::uint64_t e) const;
    Mat inverse(const Mat& x) const;
    Elem det(const Mat& x) const;
    std::uint32_t rank(const Mat& x) const;
    /// Monic characteristic polynomial, constant term first (Hessenberg reduction).
    std::vector<Elem> charpoly(const Mat& x) const;

    /// Invariant from the characteristic polynomial and the kernel dimensions
    /// of f(x)^j, f the irreducible factor.
    ConjInvariant invariant(const Mat& x) const;
    /// Multiplicative Jordan decomposition x = s u through powers of x, with
    /// the invariant read off s and the ranks of (u - 1)^j. Throws on singular x.
    JordanDecomposition jordan_decompose(const Mat& x) const;

    static std::uint64_t gl_order(std::uint64_t q, std::uint32_t k);
    std::uint64_t order() const { return gl_order(q_, n_); }
    /// Every primary class of GL_n(F_q) with its centralizer order.
    const std::vector<PrimaryClass>& primary_classes() const { return classes_; }

    std::vector<Mat> enumerate_gl(std::uint32_t k) const;
    /// Calls f on every k x k matrix over F_q.
    void for_each_matrix(std::uint32_t k, const std::function<void(const Mat&)>& f) const;
    /// Index of a matrix as a base-q number; k*k entries.
    std::uint64_t encode(const Mat& x) const;

    /// A nonsquare of F_q and a square root of it in F_{q^2}.
    Elem nonsquare() const { return delta_sq_; }
    Elem sqrt_nonsquare() const { return delta_; }

private:
    GLContext() = default;
    struct PrimaryInfo {
        bool primary = false;
        std::uint32_t d = 0;
        std::uint64_t orbit_log = 0;
        std::vector<Elem> factor;  // irreducible factor over F_q, constant term first
    };
    const PrimaryInfo& primary_info(const std::vector<Elem>& charpoly) const;
    Mat poly_at(const std::vector<Elem>& f, const Mat& x) const;
    std::vector<std::uint32_t> partition_from_kernels(const std::vector<std::uint32_t>& ker, std::uint32_t d) const;

    std::uint32_t p_ = 0, r_ = 0, n_ = 0;
    std::uint64_t q_ = 0;
    FieldPtr field_;
    std::vector<Elem> scalars_;
    std::vector<std::uint32_t> scalar_index_;
    Elem delta_sq_ = 0, delta_ = 0;
    std::vector<PrimaryClass> classes_;
    mutable std::mutex mu_;
    mutable std::map<std::vector<Elem>, PrimaryInfo> info_;
};

/// Cuspidal irreducible character of GL_n(F_q) attached to a regular
/// character theta of F_{q^n}^*, theta(gamma^k) = exp(2 pi i theta k/(q^n-1)):
///   (-1)^{n-1} (sum_{i<d} theta(lambda^{q^i})) prod_{j=1}^{l-1} (1 - q^{dj})
/// on primary classes, 0 elsewhere.
class CuspidalFF {
public:
    CuspidalFF(GLContextPtr ctx, std::uint64_t theta);

    const GLContext& context() const { return *ctx_; }
    std::uint64_t theta() const { return theta_; }
    /// Values are sums of (q^n-1)-th roots of unity.
    std::int64_t order() const { return static_cast<std::int64_t>(ctx_->field().unit_order()); }

    const CharValue& value(const ConjInvariant& inv) const;
    const CharValue& value(const Mat& g) const { return value(ctx_->invariant(g)); }
    Cyclotomic value_exact(const ConjInvariant& inv) const;

    Cyclotomic degree() const;
    /// <chi, chi> over the primary classes.
    Cyclotomic norm() const;
    /// (1/|N|) sum_{u in N} chi(u) for the unipotent radical of the standard
    /// parabolic with the given block sizes.
    Cyclotomic radical_average(const std::vector<std::uint32_t>& blocks) const;
    /// <chi, Ind_P^G 1> for the same parabolic.
    Cyclotomic parabolic_pairing(const std::vector<std::uint32_t>& blocks) const;

private:
    GLContextPtr ctx_;
    std::uint64_t theta_;
    std::map<ConjInvariant, CharValue> values_;
    CharValue zero_;
};

bool is_regular_theta(const GLContext& ctx, std::uint64_t theta);
/// Smallest exponent of each Frobenius orbit of regular characters.
std::vector<std::uint64_t> regular_theta_representatives(const GLContext& ctx);
/// Proper compositions of n (ordered block sizes with at least two blocks).
std::vector<std::vector<std::uint32_t>> proper_compositions(std::uint32_t n);

/// Element counts over the Shalika subgroup {[[g, g x], [0, g]]}, keyed by
/// (invariant, log det g, Tr x).
struct ShalikaSummary {
    std::uint64_t group_order = 0;
    std::map<std::tuple<ConjInvariant, std::uint64_t, Elem>, std::uint64_t> counts;
};
ShalikaSummary shalika_summary(const GLContext& ctx, unsigned threads = 1);

/// Element counts over GL_m(F_{q^2}) embedded as [[a, b], [D b, a]] (D the
/// nonsquare), keyed by (invariant, log det_{F_{q^2}}).
struct HbarSummary {
    std::uint64_t group_order = 0;
    std::map<std::pair<ConjInvariant, std::uint64_t>, std::uint64_t> counts;
};
HbarSummary hbar_summary(const GLContext& ctx, unsigned threads = 1);

/// dim Hom_S(pi, alpha(det g) psi(Tr(b x))), alpha an exponent mod q-1 and
/// psi(y) = exp(2 pi i Tr_{F_q/F_p}(y)/p).
std::uint64_t shalika_hom_dim(const CuspidalFF& pi, std::uint64_t alpha, Elem b, const ShalikaSummary& s);
/// dim Hom_{GL_m(F_{q^2})}(pi, mu o det), mu an exponent mod q^2-1.
std::uint64_t ff_distinction_dim(const CuspidalFF& pi, std::uint64_t mu, const HbarSummary& h);

/// The same pairings for an arbitrary class function given elementwise.
using ClassFunction = std::function<Cyclotomic(const Mat&)>;
Cyclotomic shalika_pairing(const GLContext& ctx, const ClassFunction& chi, std::uint64_t alpha, Elem b);
Cyclotomic hbar_pairing(const GLContext& ctx, const ClassFunction& chi, std::uint64_t mu);

/// Full character table of GL_2(F_q) by the Dixon-Schneider method: class
/// sums are diagonalized modulo a prime P = 1 mod exponent and the values
/// are lifted through eigenvalue multiplicities.
struct CharacterTable {
    GLContextPtr ctx;
    std::vector<Mat> reps;
    std::vector<std::uint64_t> class_sizes;
    std::vector<std::uint64_t> element_orders;
    std::vector<std::vector<Cyclotomic>> rows;
    std::vector<std::uint32_t> class_of;  // indexed by GLContext::encode

    std::uint32_t class_index(const Mat& g) const { return class_of.at(ctx->encode(g)); }
};
CharacterTable dixon_table(const GLContextPtr& ctx);

/// Primes used by dixon_table for q = 3, 5, 7.
std::uint64_t dixon_prime(std::uint64_t q);

}  // namespace tlw::ff
