// Command-line entry point: model generation, Betti tables, pencil
// extraction, verification suites, and report rendering.
//
// Exit codes: 0 all checks pass; 1 at least one check failed; 2
// degenerate-input retries exhausted; 3 usage or validation error.

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "klab/jsonio.hpp"
#include "klab/koszul.hpp"
#include "klab/models.hpp"
#include "klab/verify.hpp"

namespace {

using namespace klab;

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::validation: return 3;
        case ErrorKind::exhausted: return 2;
        case ErrorKind::retryable: return 2;
        case ErrorKind::internal: return 1;
    }
    return 1;
}

unsigned thread_cap() {
    const char* env = std::getenv("KOSZUL_LAB_THREADS");
    if (!env) return 1;
    long v = std::strtol(env, nullptr, 10);
    return v < 1 ? 1 : static_cast<unsigned>(v);
}

void require_prime_p(std::uint64_t p) {
    if (!is_prime_u64(p) || p < 5)
        throw BoundViolation("p must be a prime >= 5, got " + std::to_string(p));
}

FieldPtr make_field(std::uint64_t p, std::uint32_t m, std::uint64_t seed) {
    return m == 1 ? Field::prime_field(p) : Field::extension(p, m, seed);
}

// Model generation with field escalation, shared by gen/betti paths.
CanonicalModel generate(int genus, const std::string& variant, std::uint64_t p, std::uint32_t m,
                        std::uint64_t seed, int retries, std::uint32_t max_m = 4) {
    std::string last;
    for (std::uint32_t mm = m; mm <= std::max(m, max_m); ++mm) {
        FieldPtr F = make_field(p, mm, seed);
        try {
            if (variant == "k3" || variant == "k3-g6") {
                if (genus != 6) throw BoundViolation("the K3 construction is supported at genus 6");
                return gen_k3_g6(F, seed, retries);
            }
            std::string v = variant;
            if (v == "canonical-g4") v = "ci";
            if (v == "canonical-g6-grass" || v == "canonical-g8-grass") v = "grass";
            if (v == "canonical-g6-sextic") v = "sextic";
            return gen_canonical(genus, v, F, seed, retries);
        } catch (const RetriesExhausted& e) {
            last = e.what();
        }
    }
    throw RetriesExhausted("model generation failed through all field extensions; last: " + last);
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& opts) {
    if (name == "green") return suite_green(opts);
    if (name == "geometric") return suite_geometric(opts);
    if (name == "restriction") return suite_restriction(opts);
    if (name == "cross-model") return suite_cross_model(opts);
    throw BoundViolation("unknown suite: " + name);
}

void print_report(const SuiteReport& r, const std::string& format) {
    if (format == "table")
        std::cout << report_to_table(r);
    else
        std::cout << report_to_json(r).dump() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"koszul-lab: exact Koszul cohomology experiments on canonical curves and K3 surfaces"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "generate a model and write it to a JSON file");
    int gen_genus = 6;
    std::string gen_variant = "grass";
    std::uint64_t gen_p = 101, gen_seed = 1;
    std::uint32_t gen_m = 1;
    std::string gen_out;
    int gen_retries = kDefaultRetryBudget;
    gen->add_option("--genus", gen_genus, "genus (4, 6, or 8)")->required();
    gen->add_option("--variant", gen_variant, "construction: ci | grass | sextic | k3");
    gen->add_option("--p", gen_p, "field characteristic (prime >= 5)");
    gen->add_option("--m", gen_m, "initial extension degree");
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_option("--out", gen_out, "output model file")->required();
    gen->add_option("--retries", gen_retries, "retry budget for degenerate draws");

    // ---- betti ----
    auto* betti = app.add_subcommand("betti", "Betti table of a stored model");
    std::string betti_model;
    int betti_qmax = 2;
    std::string betti_format = "table";
    betti->add_option("--model", betti_model, "model JSON file")->required();
    betti->add_option("--qmax", betti_qmax, "highest weight row to compute");
    betti->add_option("--format", betti_format, "table | json");

    // ---- pencils ----
    auto* pencils_cmd = app.add_subcommand("pencils", "extract the degree-4 pencils of a sextic model");
    std::string pencils_model;
    int pencils_divisors = 3;
    std::uint64_t pencils_seed = 1;
    std::string pencils_format = "json";
    pencils_cmd->add_option("--model", pencils_model, "model JSON file (sextic construction)")->required();
    pencils_cmd->add_option("--divisors", pencils_divisors, "split divisors per pencil")->check(CLI::PositiveNumber);
    pencils_cmd->add_option("--seed", pencils_seed, "parameter-walk seed");
    pencils_cmd->add_option("--format", pencils_format, "json | table");

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite_name;
    SuiteOptions vopts;
    std::string verify_format = "json";
    verify->add_option("suite", suite_name, "green | geometric | restriction | cross-model | all")->required();
    verify->add_option("--p", vopts.p, "field characteristic (prime >= 5)");
    verify->add_option("--m", vopts.m, "initial extension degree");
    verify->add_option("--seed", vopts.seed, "random seed");
    verify->add_option("--genus", vopts.genus, "genus for the green suite (4, 6, or 8)");
    verify->add_option("--variant", vopts.variant, "construction variant for the green suite");
    verify->add_option("--divisors", vopts.divisors_per_pencil, "divisors per pencil (geometric)");
    verify->add_option("--retries", vopts.retry_budget, "retry budget for degenerate draws");
    verify->add_flag("--force", vopts.force, "run below the characteristic bound, observations only");
    verify->add_option("--format", verify_format, "json | table");

    // ---- report ----
    auto* report = app.add_subcommand("report", "render a stored report");
    std::string report_in, report_format = "table";
    report->add_option("--in", report_in, "report JSON file")->required();
    report->add_option("--format", report_format, "table | json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    }

    try {
        if (gen->parsed()) {
            require_prime_p(gen_p);
            CanonicalModel cm = generate(gen_genus, gen_variant, gen_p, gen_m, gen_seed, gen_retries);
            save_model(gen_out, cm);
            std::cerr << "wrote " << cm.construction << " model over " << cm.pres.F->describe() << " to "
                      << gen_out << '\n';
            return 0;
        }
        if (betti->parsed()) {
            CanonicalModel cm = load_model(betti_model);
            GradedRing ring(cm.pres);
            BettiTable t = betti_table(ring, cm.pres.n, 0, betti_qmax, cm.construction);
            if (betti_format == "json") {
                Json j;
                j["model"] = cm.construction;
                j["pmax"] = t.pmax;
                j["qmin"] = t.qmin;
                j["qmax"] = t.qmax;
                j["rows"] = t.rows;
                std::cout << j.dump() << '\n';
            } else {
                std::cout << t.to_text();
            }
            return 0;
        }
        if (pencils_cmd->parsed()) {
            CanonicalModel cm = load_model(pencils_model);
            SuiteReport r = pencil_report(cm, static_cast<std::size_t>(pencils_divisors), pencils_seed);
            print_report(r, pencils_format);
            return r.all_pass() ? 0 : 1;
        }
        if (verify->parsed()) {
            require_prime_p(vopts.p);
            std::vector<std::pair<std::string, SuiteOptions>> jobs;
            if (suite_name == "all") {
                if (vopts.p <= 6 && !vopts.force)
                    throw BoundViolation("verify all requires p > 2k = 6 for the geometric suite");
                for (int g : {4, 6, 8}) {
                    SuiteOptions o = vopts;
                    o.genus = g;
                    o.variant.clear();
                    jobs.emplace_back("green", o);
                }
                jobs.emplace_back("geometric", vopts);
                jobs.emplace_back("restriction", vopts);
                jobs.emplace_back("cross-model", vopts);
            } else {
                jobs.emplace_back(suite_name, vopts);
            }
            std::vector<SuiteReport> results(jobs.size());
            const unsigned threads = thread_cap();
            if (threads > 1 && jobs.size() > 1) {
                std::vector<std::future<SuiteReport>> futs;
                for (auto& [name, o] : jobs)
                    futs.push_back(std::async(std::launch::async, [name = name, o = o] { return run_suite(name, o); }));
                for (std::size_t i = 0; i < futs.size(); ++i) results[i] = futs[i].get();
            } else {
                for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = run_suite(jobs[i].first, jobs[i].second);
            }
            bool ok = true;
            for (const SuiteReport& r : results) {
                print_report(r, verify_format);
                ok = ok && r.all_pass();
            }
            return ok ? 0 : 1;
        }
        if (report->parsed()) {
            std::ifstream in(report_in);
            if (!in) throw MalformedFile("cannot open report file " + report_in);
            Json j;
            try {
                in >> j;
            } catch (const Json::exception& e) {
                throw MalformedFile(std::string("invalid report JSON: ") + e.what());
            }
            if (report_format == "json") {
                std::cout << j.dump() << '\n';
                return 0;
            }
            SuiteReport r;
            r.suite = j.value("suite", std::string{});
            r.field = fieldspec_from_json(j.at("field"));
            r.seed = j.value("seed", std::uint64_t{0});
            r.forced = j.value("forced", false);
            for (const Json& jc : j.at("checks")) {
                CheckResult c;
                c.name = jc.value("name", std::string{});
                c.expected = jc.value("expected", std::int64_t{0});
                c.observed = jc.value("observed", std::int64_t{0});
                if (jc.contains("pass") && !jc.at("pass").is_null()) c.pass = jc.at("pass").get<bool>();
                r.checks.push_back(std::move(c));
            }
            r.elapsed_ms = j.value("elapsed_ms", std::int64_t{0});
            std::cout << report_to_table(r);
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 3;
}
