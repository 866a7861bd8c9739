#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tlw/cosets.hpp"
#include "tlw/errors.hpp"
#include "tlw/finite_field.hpp"
#include "tlw/suites.hpp"

namespace {

using namespace tlw;

constexpr int kUsage = 2;

struct UsageError : Error {
    using Error::Error;
};

struct RunConfig {
    std::string subcommand;
    std::uint64_t q = 3;
    std::uint32_t p = 0, r = 0;
    std::uint32_t m = 2;
    std::uint32_t n = 4;
    std::string ramified = "both";
    int mu_conductor = 2;
    std::uint64_t pi_order = 4;
    std::vector<std::int64_t> psi_levels{-1, 0, 1};
    std::vector<int> identities;
    bool all_identities = false;
    std::size_t random_cases = 200;
    std::uint64_t seed = 1;
    bool no_residual = false;
    bool no_dixon = false;
    std::uint32_t lambda_max = 3;
    int precision = 0;
    std::string chi_json, mu_json;
    bool coset_ramified = false;
    std::vector<std::uint32_t> cache_m{2};
    std::string format = "json";
    bool json_flag = false, csv_flag = false;
    std::string cache_dir;
    std::string output;
    unsigned threads = 1;

    std::vector<std::uint32_t> ramifications() const {
        if (ramified == "false") return {1};
        if (ramified == "true") return {2};
        return {1, 2};
    }

    void validate() {
        if (q < 3) throw UsageError("--q must be an odd prime power");
        for (std::uint32_t d = 2; d <= q; ++d)
            if (q % d == 0) {
                p = d;
                break;
            }
        std::uint64_t x = q;
        r = 0;
        while (x % p == 0) x /= p, ++r;
        if (x != 1 || p == 2) throw UsageError("--q must be an odd prime power, got " + std::to_string(q));
        if (m < 2 && (subcommand == "sweep-ptb" || subcommand == "coset-audit" || subcommand == "selfdual-classify" ||
                      subcommand == "check-epsilon-identities"))
            throw UsageError("--m must be at least 2");
        if (n == 0 || n % 2) throw UsageError("--n must be a positive even integer");
        if (ramified != "false" && ramified != "true" && ramified != "both")
            throw UsageError("--ramified expects false, true or both");
        if (mu_conductor < 0 || mu_conductor > 2) throw UsageError("--mu-conductor must be 0, 1 or 2");
        if (pi_order == 0) throw UsageError("--pi-order must be positive");
        if (precision < 0 || precision > 2) throw UsageError("--precision must be 0 (automatic), 1 or 2");
        if (threads == 0) throw UsageError("--threads must be positive");
        for (int id : identities)
            if (id < 1 || id > 10) throw UsageError("--identity must be between 1 and 10");
        if (json_flag && csv_flag) throw UsageError("--json and --csv are exclusive");
        if (json_flag) format = "json";
        if (csv_flag) format = "csv";
        parse_format(format);
        if (chi_json.empty() != mu_json.empty()) throw UsageError("--chi and --mu must be given together");
        if (cache_dir.empty())
            if (const char* env = std::getenv("TLW_CACHE_DIR")) cache_dir = env;
    }
};

SuiteResult build_cache(const RunConfig& c) {
    if (c.cache_dir.empty()) throw UsageError("build-cache needs --cache-dir or TLW_CACHE_DIR");
    SuiteResult r{"build-cache", {}, nlohmann::json::object(), true};
    for (std::uint32_t m : c.cache_m) {
        const std::uint32_t k = c.r * 2 * m;
        const FieldPtr f = FiniteField::get(c.p, k);
        const auto path = std::filesystem::path(c.cache_dir) / FiniteField::cache_file_name(c.p, k);
        r.rows.push_back({{"p", c.p}, {"degree", k}, {"size", f->size()}, {"file", path.string()},
                          {"exists", std::filesystem::exists(path)}});
        r.pass = r.pass && std::filesystem::exists(path);
    }
    return r;
}

SuiteResult coset_single(const RunConfig& c) {
    const TowerPtr t = Tower::build(c.p, c.q, c.m, 1);
    const MultChar chi = char_from_json(*t, nlohmann::json::parse(c.chi_json));
    const MultChar mu = char_from_json(*t, nlohmann::json::parse(c.mu_json));
    if (chi.field != FieldId::L || mu.field != FieldId::E) throw UsageError("--chi must live on L and --mu on E");
    const CosetAudit a = audit_box(t, chi, mu, c.lambda_max, c.precision, c.threads);
    SuiteResult r{"coset-audit", {}, nlohmann::json::object(), a.pass};
    for (const auto& e : a.entries) r.rows.push_back({{"lambda", to_string(e.lambda)}, {"dim", e.dim}});
    r.summary = {{"expected", to_string(a.expected)}, {"distinguished", a.distinguished}, {"total", a.total}};
    return r;
}

SuiteResult dispatch(const RunConfig& c) {
    const std::string& s = c.subcommand;
    if (s == "sweep-ptb") {
        SweepConfig cfg;
        cfg.p = c.p;
        cfg.r = c.r;
        cfg.m = c.m;
        cfg.ramification = c.ramifications();
        cfg.mu_conductor = c.mu_conductor;
        cfg.pi_order = c.pi_order;
        cfg.psi_levels = c.psi_levels;
        cfg.residual = !c.no_residual;
        cfg.threads = c.threads;
        return ptb_suite(cfg);
    }
    if (s == "check-epsilon-identities") {
        IdentitySuiteConfig cfg;
        cfg.p = c.p;
        cfg.q = c.q;
        cfg.m = c.m;
        cfg.ramification = c.ramifications();
        cfg.pi_order = c.pi_order;
        cfg.random_cases = c.random_cases;
        cfg.seed = c.seed;
        cfg.psi_levels = c.psi_levels;
        if (!c.all_identities) cfg.identities = c.identities;
        cfg.threads = c.threads;
        return identity_suite(cfg);
    }
    if (s == "shalika" || s == "distinction-ff") {
        FiniteFieldConfig cfg{c.p, c.r, c.n, !c.no_dixon, c.threads};
        return s == "shalika" ? shalika_suite(cfg) : distinction_ff_suite(cfg);
    }
    if (s == "selfdual-classify") return selfdual_suite({c.p, c.r, c.m, c.pi_order, c.threads});
    if (s == "coset-audit") {
        if (c.coset_ramified)
            throw UsageError(
                "coset-audit --ramified: the double cosets K\\G/H are only parametrized by dominant weights for "
                "unramified E/F; for ramified E/F their description is open and no audit is attempted");
        if (!c.chi_json.empty()) return coset_single(c);
        CosetSuiteConfig cfg;
        cfg.p = c.p;
        cfg.r = c.r;
        cfg.m = c.m;
        cfg.lambda_max = c.lambda_max;
        cfg.precision = c.precision;
        cfg.mu_conductor = c.mu_conductor;
        cfg.pi_order = c.pi_order;
        cfg.threads = c.threads;
        return coset_suite(cfg);
    }
    if (s == "build-cache") return build_cache(c);
    throw UsageError("no subcommand given");
}

void add_common(CLI::App* sub, RunConfig& c) {
    sub->add_option("--q", c.q, "residue field size (odd prime power)")->capture_default_str();
    sub->add_option("--threads", c.threads, "worker threads")->capture_default_str();
    sub->add_option("--format", c.format, "json, csv or table")->capture_default_str();
    sub->add_flag("--json", c.json_flag, "JSON lines output");
    sub->add_flag("--csv", c.csv_flag, "CSV output");
    sub->add_option("--output,-o", c.output, "write the report to a file instead of stdout");
    sub->add_option("--cache-dir", c.cache_dir, "log-table cache directory (default $TLW_CACHE_DIR)");
}

// Unsectioned keys of the config file apply to the selected subcommand unless
// the same option was given on the command line.
void apply_plain_config(CLI::App& app, CLI::App& sub) {
    const CLI::Option* cfg = app.get_config_ptr();
    if (!cfg || cfg->count() == 0) return;
    for (const CLI::ConfigItem& item : CLI::ConfigINI().from_file(cfg->as<std::string>())) {
        if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == "default")) continue;
        CLI::Option* opt = sub.get_option_no_throw("--" + item.name);
        if (!opt) {
            bool known = false;
            for (const CLI::App* other : app.get_subcommands({}))
                known = known || other->get_option_no_throw("--" + item.name) != nullptr;
            if (!known) throw UsageError("config file: unknown key '" + item.name + "'");
            continue;
        }
        if (opt->count() != 0) continue;
        opt->add_result(item.inputs);
        opt->run_callback();
    }
}

int run(int argc, char** argv) {
    RunConfig c;
    CLI::App app{"Depth-zero epsilon factor and distinction verifier"};
    app.set_config("--config", "", "key = value configuration file; flags on the command line win");
    app.require_subcommand(1);

    auto* sweep = app.add_subcommand("sweep-ptb", "distinction, symplecticity and root numbers over all cases");
    add_common(sweep, c);
    sweep->add_option("--m", c.m, "L has degree 2m over F")->capture_default_str();
    sweep->add_option("--ramified", c.ramified, "false, true or both")->capture_default_str();
    sweep->add_option("--mu-conductor", c.mu_conductor, "largest conductor of mu")->capture_default_str();
    sweep->add_option("--pi-order", c.pi_order, "pi values in (1/N)Z")->capture_default_str();
    sweep->add_option("--psi-levels", c.psi_levels, "levels of psi_F")->delimiter(',')->capture_default_str();
    sweep->add_flag("--no-residual", c.no_residual, "skip the finite-field residual check");

    auto* ids = app.add_subcommand("check-epsilon-identities", "epsilon and lambda identities");
    add_common(ids, c);
    ids->add_option("--m", c.m, "L has degree 2m over F")->capture_default_str();
    ids->add_option("--ramified", c.ramified, "false, true or both")->capture_default_str();
    ids->add_flag("--all", c.all_identities, "all ten identities (the default)");
    ids->add_option("--identity", c.identities, "identity number, repeatable")->delimiter(',');
    ids->add_option("--random-cases", c.random_cases)->capture_default_str();
    ids->add_option("--seed", c.seed)->capture_default_str();
    ids->add_option("--pi-order", c.pi_order)->capture_default_str();
    ids->add_option("--psi-levels", c.psi_levels)->delimiter(',')->capture_default_str();

    auto* sh = app.add_subcommand("shalika", "twisted Shalika model dimensions over F_q");
    add_common(sh, c);
    sh->add_option("--n", c.n, "rank of GL_n")->capture_default_str();
    sh->add_flag("--no-dixon", c.no_dixon, "skip the character table cross-check for n = 2");

    auto* dist = app.add_subcommand("distinction-ff", "GL_m(F_{q^2})-distinction dimensions");
    add_common(dist, c);
    dist->add_option("--n", c.n, "rank of GL_n")->capture_default_str();
    dist->add_flag("--no-dixon", c.no_dixon, "skip the character table cross-check for n = 2");

    auto* sd = app.add_subcommand("selfdual-classify", "self-duality criterion against bilinear forms");
    add_common(sd, c);
    sd->add_option("--m", c.m, "L has degree 2m over F")->capture_default_str();
    sd->add_option("--pi-order", c.pi_order)->capture_default_str();

    auto* cos = app.add_subcommand("coset-audit", "Hom dimensions over the double cosets in a box");
    add_common(cos, c);
    cos->add_option("--m", c.m, "L has degree 2m over F")->capture_default_str();
    cos->add_option("--lambda-max", c.lambda_max)->capture_default_str();
    cos->add_option("--precision", c.precision, "0 picks max(c(mu), 1)")->capture_default_str();
    cos->add_option("--mu-conductor", c.mu_conductor)->capture_default_str();
    cos->add_option("--pi-order", c.pi_order)->capture_default_str();
    cos->add_option("--chi", c.chi_json, "single case: chi on L as JSON");
    cos->add_option("--mu", c.mu_json, "single case: mu on E as JSON");
    cos->add_flag("--ramified", c.coset_ramified, "refused: no coset description for ramified E/F");

    auto* cache = app.add_subcommand("build-cache", "precompute log tables");
    add_common(cache, c);
    cache->add_option("--m", c.cache_m, "values of m")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    for (const auto* s : app.get_subcommands()) c.subcommand = s->get_name();

    try {
        apply_plain_config(app, *app.get_subcommand(c.subcommand));
        c.validate();
        if (!c.cache_dir.empty()) FiniteField::set_cache_dir(c.cache_dir);
        const SuiteResult r = dispatch(c);
        const OutputFormat f = parse_format(c.format);
        if (c.output.empty()) {
            write_report(std::cout, r, f);
        } else {
            std::ofstream out(c.output);
            if (!out) throw Error("cannot open " + c.output);
            write_report(out, r, f);
            if (!out) throw Error("write failed for " + c.output);
        }
        if (!r.pass) {
            std::size_t shown = 0;
            for (const auto& row : r.rows) {
                const bool ok = row.value("ok", row.value("pass", row.value("agree", true)));
                if (!ok && shown++ < 20) std::cerr << "counterexample: " << row.dump() << '\n';
            }
            std::cerr << c.subcommand << ": FAILED\n";
            return 1;
        }
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
