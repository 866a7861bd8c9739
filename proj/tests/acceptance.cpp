// End-to-end acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tlw/suites.hpp"

using namespace tlw;
using json = nlohmann::json;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool report(int id, double limit, const std::function<Outcome()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = f();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double s = seconds_since(t0);
    const bool in_time = limit <= 0 || s <= limit;
    const bool pass = o.pass && in_time;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f s", s);
    std::cout << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << " (" << o.detail << "; " << buf;
    if (limit > 0) std::cout << " of " << limit << " s";
    std::cout << ")" << std::endl;
    return pass;
}

std::string bytes(const SuiteResult& r) {
    std::ostringstream os;
    write_report(os, r, OutputFormat::json);
    return os.str();
}

IdentitySuiteConfig identity_config(unsigned threads) {
    IdentitySuiteConfig c;
    c.threads = threads;
    return c;
}

SelfDualConfig selfdual_config(unsigned threads) {
    SelfDualConfig c;
    c.pi_order = 80;
    c.threads = threads;
    return c;
}

FiniteFieldConfig ff_config(std::uint32_t p, std::uint32_t n, unsigned threads) {
    FiniteFieldConfig c;
    c.p = p;
    c.n = n;
    c.threads = threads;
    return c;
}

SweepConfig sweep_config(unsigned threads) {
    SweepConfig c;
    c.ramification = {1, 2};
    c.mu_conductor = 2;
    c.pi_order = 4;
    c.psi_levels = {-1, 0, 1};
    c.threads = threads;
    return c;
}

// The suites behind criteria 1-6, in a fixed order.
std::vector<std::function<SuiteResult(unsigned)>> deterministic_suites() {
    return {
        [](unsigned t) { return identity_suite(identity_config(t)); },
        [](unsigned t) { return selfdual_suite(selfdual_config(t)); },
        [](unsigned t) { return shalika_suite(ff_config(3, 4, t)); },
        [](unsigned t) { return shalika_suite(ff_config(3, 2, t)); },
        [](unsigned t) { return shalika_suite(ff_config(5, 2, t)); },
        [](unsigned t) { return distinction_ff_suite(ff_config(3, 4, t)); },
        [](unsigned t) { return ptb_suite(sweep_config(t)); },
    };
}

}  // namespace

int main() {
    std::vector<std::string> reference;
    bool all = true;

    all &= report(1, 120, [&] {
        const SuiteResult r = identity_suite(identity_config(1));
        reference.push_back(bytes(r));
        std::size_t ids = 0, fq = 0;
        for (const auto& [id, c] : r.summary["identities"].items()) {
            ++ids;
            if (id == "6") fq = c["pass"].get<std::size_t>();
        }
        return Outcome{r.pass && ids == 10 && fq > 0,
                       std::to_string(r.rows.size()) + " records, " + std::to_string(ids) + " identities"};
    });

    all &= report(2, 300, [&] {
        const SuiteResult r = selfdual_suite(selfdual_config(1));
        reference.push_back(bytes(r));
        return Outcome{r.pass && !r.rows.empty(), std::to_string(r.rows.size()) + " pairs, " +
                                                      r.summary["disagreements"].dump() + " disagreements"};
    });

    all &= report(3, 60, [&] {
        bool pass = true;
        std::string detail;
        for (auto [p, n] : {std::pair{3u, 4u}, std::pair{3u, 2u}, std::pair{5u, 2u}}) {
            const SuiteResult r = shalika_suite(ff_config(p, n, 1));
            reference.push_back(bytes(r));
            pass = pass && r.pass && !r.rows.empty();
            detail += (detail.empty() ? "" : ", ") + ("q=" + std::to_string(p) + " n=" + std::to_string(n) + ": " +
                                                      r.summary["failures"].dump() + " failures");
        }
        return Outcome{pass, detail};
    });

    all &= report(4, 300, [&] {
        const SuiteResult r = distinction_ff_suite(ff_config(3, 4, 1));
        reference.push_back(bytes(r));
        return Outcome{r.pass && !r.rows.empty(), std::to_string(r.rows.size()) + " pairs, " +
                                                      r.summary["criterion_mismatches"].dump() + " mismatches"};
    });

    SuiteResult sweep_result;
    all &= report(5, 600, [&] {
        sweep_result = ptb_suite(sweep_config(1));
        reference.push_back(bytes(sweep_result));
        std::size_t checked = 0, bad = 0;
        for (const json& row : sweep_result.rows) {
            if (row["closed_form_holds"].is_null()) continue;
            ++checked;
            bad += !row["closed_form_holds"].get<bool>();
        }
        return Outcome{checked > 0 && bad == 0,
                       std::to_string(checked) + " hypothesis cases, " + std::to_string(bad) + " mismatches"};
    });

    all &= report(6, 600, [&] {
        std::size_t bad = 0;
        for (const json& row : sweep_result.rows) bad += !row["conjecture_holds"].get<bool>();
        return Outcome{sweep_result.pass && bad == 0 && !sweep_result.rows.empty(),
                       std::to_string(sweep_result.rows.size()) + " cases, " +
                           sweep_result.summary["counterexamples"].dump() + " counterexamples"};
    });

    all &= report(7, 3600, [&] {
        const SuiteResult r = coset_suite(CosetSuiteConfig{});
        bool shape = false;
        bool stray = false;
        for (const auto& [key, n] : r.summary["contributors"].items()) {
            const bool wild = key.rfind("c2 ", 0) == 0;
            const std::string want = wild ? "(1,1)" : "(0,0)";
            if (key.substr(3) != want) stray = true;
            if (wild && n.get<std::size_t>() > 0) shape = true;
        }
        return Outcome{r.pass && shape && !stray, std::to_string(r.rows.size()) + " cases, contributors " +
                                                      r.summary["contributors"].dump()};
    });

    all &= report(8, 120, [&] {
        const SuiteResult r = green_suite(3, 1, {2, 4});
        return Outcome{r.pass && !r.rows.empty(), std::to_string(r.rows.size()) + " cuspidal characters"};
    });

    all &= report(9, 0, [&] {
        const auto suites = deterministic_suites();
        if (reference.size() != suites.size()) return Outcome{false, "reference runs incomplete"};
        std::size_t differing = 0;
        for (unsigned threads : {4u, 16u})
            for (std::size_t i = 0; i < suites.size(); ++i) differing += bytes(suites[i](threads)) != reference[i];
        return Outcome{differing == 0, std::to_string(suites.size()) + " reports at 1/4/16 threads, " +
                                           std::to_string(differing) + " differ"};
    });

    return all ? 0 : 1;
}
