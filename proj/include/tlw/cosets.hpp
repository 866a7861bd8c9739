#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "tlw/characters.hpp"
#include "tlw/green_ff.hpp"

namespace tlw {

/// lambda_1 >= ... >= lambda_m >= 0, indexing K d_lambda H with
/// d_lambda = diag(pi^lambda_1, ..., pi^lambda_m, 1, ..., 1).
using CosetLambda = std::vector<std::uint32_t>;

/// All dominant lambda with lambda_1 <= lambda_max, in lexicographic order.
std::vector<CosetLambda> dominant_weights(std::uint32_t m, std::uint32_t lambda_max);
std::string to_string(const CosetLambda& l);

/// An element of J_lambda = K cap d^{-1} H d modulo P^2 (E/F unramified).
/// H = GL_m(E) sits in GL_2m(F) as a + delta b -> [[a, b], [Delta b, a]];
/// J_lambda consists of [[D^{-1} a D, b'], [Delta D b' D, a]] with D = diag(pi^lambda),
/// b = D b', and a_ij = pi^{lambda_i - lambda_j} x_ij when lambda_i > lambda_j,
/// a_ij = x_ij otherwise. x = x0 + pi x1, b' = b0 + pi b1 with entries in k_F.
struct CosetElement {
    ff::Mat x0, x1, b0, b1;
};

/// Reduction of the element mod P; it only depends on x0 and b0.
ff::Mat coset_reduction(const ff::GLContext& ctx, const CosetLambda& lambda, const ff::Mat& x0, const ff::Mat& b0);

/// mu^{d_lambda}(j) = mu(det_E(a + delta b)), computed directly in k_E[pi]/pi^2.
QZ coset_character(const Tower& t, const CosetLambda& lambda, const MultChar& mu, const CosetElement& j);

/// Element counts of J_lambda mod P^c keyed by (class of the reduction,
/// c0, c1/c0) where det_E(a + delta b) = c0 + c1 pi mod P^2 (c1 = 0 for c = 1).
/// For c = 2 the pi-coefficients of x and b' are summed fiberwise: c1 is
/// affine in them, so its values are equidistributed on a coset of a
/// k_F-subspace of k_E.
struct CosetSummary {
    CosetLambda lambda;
    int precision = 1;
    std::uint64_t group_order = 0;
    std::map<std::tuple<ff::ConjInvariant, FiniteField::Elem, FiniteField::Elem>, std::uint64_t> counts;
};

CosetSummary coset_summary(const Tower& t, const ff::GLContext& ctx, const CosetLambda& lambda, int precision,
                           unsigned threads = 1);

/// dim Hom_{F^* J_lambda}(lambda_chi, mu^{d_lambda}): zero unless the central
/// characters agree, otherwise the average of pi(j mod P) conj(mu^{d}(j)) over J_lambda.
/// Throws PrecisionError if the summary precision is below c(mu).
std::uint64_t coset_hom_dim(const Tower& t, const CosetSummary& s, const ff::CuspidalFF& pi, const MultChar& chi,
                            const MultChar& mu);
std::uint64_t coset_hom_dim(const Tower& t, const CosetLambda& lambda, const MultChar& chi, const MultChar& mu,
                            int precision, unsigned threads = 1);

/// At lambda = (l, ..., l), l = c(mu) - 1, and for x1 = b1 = 0: mu^{d}(j) equals
/// alpha(det x0) psi(Tr(x0^{-1} b0)) with alpha = mu|_{F^*} and
/// psi(y) = mu(1 + pi^l delta y), psi nontrivial. Checked on every (x0, b0).
bool shalika_factorization_holds(const Tower& t, const MultChar& mu);

struct CosetAuditEntry {
    CosetLambda lambda;
    std::uint64_t dim = 0;
};

struct CosetAudit {
    std::vector<CosetAuditEntry> entries;
    /// lambda = (l, ..., l) with l = max(c(mu) - 1, 0).
    CosetLambda expected;
    bool distinguished = false;
    std::uint64_t total = 0;
    bool pass = false;
};

nlohmann::json to_json(const CosetAudit& a);

/// Every lambda in the box; passes when the only contributor is `expected`
/// with dimension one for distinguished cases and nothing contributes otherwise.
/// E/F must be unramified. Summaries are built once and shared between audits.
class CosetAuditor {
public:
    CosetAuditor(TowerPtr t, std::uint32_t lambda_max, unsigned threads = 1);

    const Tower& tower() const { return *tower_; }
    std::uint32_t lambda_max() const { return lambda_max_; }
    /// precision 0 picks max(c(mu), 1).
    CosetAudit audit(const MultChar& chi, const MultChar& mu, int precision = 0) const;

private:
    TowerPtr tower_;
    std::uint32_t lambda_max_;
    ff::GLContextPtr ctx_;
    std::vector<CosetLambda> box_;
    std::vector<CosetSummary> summaries_[2];  // by precision - 1
};

CosetAudit audit_box(const TowerPtr& t, const MultChar& chi, const MultChar& mu, std::uint32_t lambda_max,
                     int precision = 0, unsigned threads = 1);

}  // namespace tlw
