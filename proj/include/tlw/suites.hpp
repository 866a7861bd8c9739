#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "tlw/identities.hpp"
#include "tlw/ptb_engine.hpp"

namespace tlw {

/// Rows of one verification run plus an overall verdict. Rows are in a
/// deterministic order that does not depend on the thread count.
struct SuiteResult {
    std::string name;
    std::vector<nlohmann::json> rows;
    nlohmann::json summary;
    bool pass = true;
};

enum class OutputFormat { json, csv, table };
OutputFormat parse_format(const std::string& s);

/// JSON lines (rows, then the summary), CSV (one column per top-level key of
/// the first row, nested values as JSON) or an aligned table.
void write_report(std::ostream& os, const SuiteResult& r, OutputFormat f);

SuiteResult identity_suite(const IdentitySuiteConfig& cfg);

struct SelfDualConfig {
    std::uint32_t p = 3, r = 1, m = 2;
    std::uint64_t pi_order = 4;
    unsigned threads = 1;
};
/// Criterion against brute force for every regular tame chi' on L (one per
/// Frobenius orbit) and every tame alpha on F.
SuiteResult selfdual_suite(const SelfDualConfig& cfg);

struct FiniteFieldConfig {
    std::uint32_t p = 3, r = 1, n = 4;
    /// For n = 2, also recompute every dimension from the Dixon-Schneider table.
    bool dixon = true;
    unsigned threads = 1;
};
/// Twisted Shalika dimensions for every regular theta (mod Frobenius), every
/// alpha and every nonzero b.
SuiteResult shalika_suite(const FiniteFieldConfig& cfg);
/// GL_m(F_{q^2})-distinction dimensions for every regular theta and every mu.
/// Rows with n < 4 are reported but not asserted.
SuiteResult distinction_ff_suite(const FiniteFieldConfig& cfg);

/// Degree, norm, vanishing on parabolic radicals and Frobenius invariance
/// of every cuspidal character of GL_n(F_q).
SuiteResult green_suite(std::uint32_t p, std::uint32_t r, const std::vector<std::uint32_t>& ns);

SuiteResult ptb_suite(const SweepConfig& cfg);

struct CosetSuiteConfig {
    std::uint32_t p = 3, r = 1, m = 2;
    std::uint32_t lambda_max = 3;
    /// 0 picks max(c(mu), 1) per case.
    int precision = 0;
    int mu_conductor = 2;
    std::uint64_t pi_order = 4;
    unsigned threads = 1;
};
/// Audits every centrally compatible (chi, mu) of the unramified sweep.
SuiteResult coset_suite(const CosetSuiteConfig& cfg);

}  // namespace tlw
