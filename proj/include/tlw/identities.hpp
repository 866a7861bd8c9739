#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "tlw/weil_params.hpp"

namespace tlw {

/// One checked instance of an epsilon/lambda identity.
struct IdentityRecord {
    int identity = 0;
    nlohmann::json instance;
    bool pass = false;
    std::string lhs;
    std::string rhs;
};

nlohmann::json to_json(const IdentityRecord& r);

/// Numbering of the identities:
///   1 additivity over sums          6 Frohlich-Queyrut on quadratic steps
///   2 eps(chi, psi_a)               7 inductivity for abelian steps
///   3 Galois invariance             8 lambda of unramified steps
///   4 duality                       9 tower law for lambda
///   5 unramified twist             10 lambda^2 = omega(-1) on quadratic steps
struct IdentitySuiteConfig {
    std::uint32_t p = 3;
    std::uint64_t q = 3;
    std::uint32_t m = 2;
    std::vector<std::uint32_t> ramification{1, 2};
    /// Tame characters are enumerated with pi_value in (1/pi_order)Z.
    std::uint64_t pi_order = 4;
    /// Random conductor-2 instances per identity and tower.
    std::size_t random_cases = 200;
    std::uint64_t seed = 1;
    /// Levels of psi_F; every identity is checked for each.
    std::vector<std::int64_t> psi_levels{-1, 0, 1};
    /// Empty means all ten.
    std::vector<int> identities;
    unsigned threads = 1;
};

/// Builds every instance first (deterministically from the seed), then
/// evaluates them in parallel; the record order is the instance order.
std::vector<IdentityRecord> run_identity_suite(const IdentitySuiteConfig& cfg);

/// psi_F with the given level: the standard character twisted by pi_F^{-level}.
AddChar psi_with_level(const TowerPtr& t, std::int64_t level);

/// Pairs K subset K' (K != K') for which Ind 1 splits into [K':K] characters.
std::vector<std::pair<FieldId, FieldId>> abelian_steps(const Tower& t);

}  // namespace tlw
