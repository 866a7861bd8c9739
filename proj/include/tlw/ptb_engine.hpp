#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tlw/weil_params.hpp"

namespace tlw {

/// A depth-zero cuspidal pi(chi) of GL_{2m}(F) and a character mu of E^*.
struct PtbCase {
    TowerPtr tower;
    MultChar chi;  // regular tame, on L
    MultChar mu;   // conductor <= 2, on E
    std::int64_t psi_level = 0;
};

/// mu^m|_{F^*} = chi|_{F^*}.
bool central_compatible(const PtbCase& c);

struct Distinction {
    bool distinguished = false;
    /// Known multiplicity; empty when it is at least one but not determined.
    std::optional<std::uint32_t> multiplicity;
};

/// chi|_{L0^*} = mu|_{F^*} o N_{L0/F}, except that nothing is distinguished
/// when E/F is ramified and mu is tame.
Distinction distinction_predicate(const PtbCase& c);

/// The restriction condition, checked against classify_selfduality of
/// Ind(eta chi) with alpha = mu|_{F^*}. Throws ConsistencyError on disagreement.
bool symplectic_predicate(const PtbCase& c);

/// eps(1/2, Ind(eta chi) x Ind_{W_E}^{W_F}(mu^{-1}), psi), via
/// tensor_with_quadratic and epsilon_param.
EpsilonValue epsilon_ptb(const PtbCase& c, const EpsilonContext& ctx);

/// omega_{E/F}(-1)^m mu(-1)^m, the value in the distinction criterion.
QZ epsilon_expected(const PtbCase& c);
/// The same value, negated when E/F is ramified and mu is tame: the root
/// number on cases with chi|L0 = mu|F o N.
QZ epsilon_closed_form(const PtbCase& c);
/// chi|_{L0^*} = mu|_{F^*} o N_{L0/F}.
bool restriction_matches(const PtbCase& c);

struct PtbVerdict {
    PtbCase input;
    Distinction distinction;
    bool symplectic = false;
    EpsilonValue epsilon;
    QZ expected;
    bool epsilon_condition = false;
    bool conjecture_holds = false;
    /// epsilon == epsilon_closed_form on cases with chi|L0 = mu|F o N.
    std::optional<bool> closed_form_holds;
    /// Consequences on the distinguished locus; empty off it.
    std::optional<bool> corollaries_hold;
    /// Residual finite-field dimension where it models the case.
    std::optional<std::uint64_t> residual_dim;
    std::optional<bool> residual_agrees;

    bool ok() const;
};

nlohmann::json to_json(const PtbVerdict& v);

/// Characters of E^* of conductor at most max_conductor with pi_value in (1/pi_order)Z.
std::vector<MultChar> ptb_mu_characters(const Tower& t, int max_conductor, std::uint64_t pi_order);

struct SweepConfig {
    std::uint32_t p = 3;
    std::uint32_t r = 1;
    std::uint32_t m = 2;
    std::vector<std::uint32_t> ramification{1};
    /// Largest conductor of mu (0, 1 or 2).
    int mu_conductor = 2;
    std::uint64_t pi_order = 4;
    std::vector<std::int64_t> psi_levels{0};
    bool residual = true;
    unsigned threads = 1;
};

/// Every admissible (chi, mu) up to Frobenius orbits of chi, filtered by
/// central compatibility; ordered by (tower, psi level, chi, mu).
std::vector<PtbVerdict> sweep(const SweepConfig& cfg);

}  // namespace tlw
