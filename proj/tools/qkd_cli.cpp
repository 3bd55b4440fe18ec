// Command-line driver: single-session traces in the worked-example table
// layout, JSON transcripts, and Monte Carlo campaigns.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qkd/analysis.hpp"
#include "qkd/fixtures.hpp"
#include "qkd/session.hpp"
#include "qkd/table_render.hpp"

namespace {

struct CliOptions {
    std::string scenario = "bb84";
    std::size_t qubits = 8;
    std::string mode = "symbolic";
    std::string policy = "none";
    std::uint64_t seed = 0;
    std::string fixture;
    std::string format;
    std::uint64_t trials = 1000;
    int copies = 1;
    std::string out;
    int jobs = 0;
    bool unicode = false;
};

void add_scenario_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--scenario", opt.scenario,
                    "bb84|intercept-z|intercept-x|intercept-random|attack1|attack2");
    cmd->add_option("--qubits", opt.qubits, "number of transmitted qubits (even, >= 2)");
    cmd->add_option("--mode", opt.mode, "symbolic|physical");
    cmd->add_option("--policy", opt.policy, "none|single-send|ordered-basis|both");
    cmd->add_option("--seed", opt.seed, "session seed")->envname("QKD_SEED");
    cmd->add_option("--fixture", opt.fixture, "named fixture or path to a fixture JSON file");
    cmd->add_option("--copies", opt.copies, "attack1 listening passes per basis");
}

qkd::Mode parse_mode(const std::string& mode) {
    if (mode == "symbolic") return qkd::Mode::symbolic;
    if (mode == "physical") return qkd::Mode::physical;
    throw qkd::ConfigError("unknown mode: " + mode);
}

qkd::PolicyConfig parse_policy(const std::string& policy) {
    qkd::PolicyConfig p;
    if (policy == "none") return p;
    if (policy == "single-send") {
        p.single_send = true;
    } else if (policy == "ordered-basis") {
        p.ordered_basis = true;
    } else if (policy == "both") {
        p.single_send = true;
        p.ordered_basis = true;
    } else {
        throw qkd::ConfigError("unknown policy: " + policy);
    }
    return p;
}

qkd::Fixture resolve_fixture(const std::string& name) {
    try {
        return qkd::named_fixture(name);
    } catch (const std::invalid_argument&) {
        if (std::filesystem::exists(name)) return qkd::load_fixture_file(name);
        throw;
    }
}

qkd::ScenarioConfig build_config(const CliOptions& opt) {
    qkd::ScenarioConfig cfg;
    cfg.qubits = opt.qubits;
    cfg.mode = parse_mode(opt.mode);
    cfg.policy = parse_policy(opt.policy);
    cfg.seed = opt.seed;
    if (!opt.fixture.empty()) cfg.fixture = resolve_fixture(opt.fixture);

    if (opt.scenario == "bb84") {
        cfg.ordering = qkd::MessageOrdering::standard();
    } else if (opt.scenario == "intercept-z") {
        cfg.ordering = qkd::MessageOrdering::standard();
        cfg.adversary = qkd::EveStrategy{qkd::EveStrategy::Kind::intercept_all_i, 1};
    } else if (opt.scenario == "intercept-x") {
        cfg.ordering = qkd::MessageOrdering::standard();
        cfg.adversary = qkd::EveStrategy{qkd::EveStrategy::Kind::intercept_all_h, 1};
    } else if (opt.scenario == "intercept-random") {
        cfg.ordering = qkd::MessageOrdering::standard();
        cfg.adversary = qkd::EveStrategy{qkd::EveStrategy::Kind::intercept_random, 1};
    } else if (opt.scenario == "attack1") {
        if (opt.copies < 1) throw qkd::ConfigError("--copies must be >= 1");
        cfg.ordering = qkd::MessageOrdering::retransmit(2 * opt.copies);
        cfg.adversary = qkd::EveStrategy{qkd::EveStrategy::Kind::attack1, opt.copies};
    } else if (opt.scenario == "attack2") {
        cfg.ordering = qkd::MessageOrdering::early_basis();
        cfg.adversary = qkd::EveStrategy{qkd::EveStrategy::Kind::attack2, 1};
    } else {
        throw qkd::ConfigError("unknown scenario: " + opt.scenario);
    }
    return cfg;
}

int cmd_run(const CliOptions& opt) {
    const std::string format = opt.format.empty() ? "table" : opt.format;
    if (format != "table" && format != "json") {
        throw qkd::ConfigError("run supports --format table|json");
    }
    const qkd::ScenarioConfig cfg = build_config(opt);
    const qkd::SessionTranscript t = qkd::run_session(cfg);
    if (format == "json") {
        std::cout << t.to_json_string(true) << "\n";
    } else {
        std::cout << qkd::render_table(t, opt.unicode);
    }
    return t.aborted ? 2 : 0;
}

int cmd_montecarlo(const CliOptions& opt) {
    if (opt.trials == 0) throw qkd::ConfigError("--trials must be >= 1");
    const std::string format = opt.format.empty() ? "csv" : opt.format;
    if (format != "csv" && format != "json") {
        throw qkd::ConfigError("montecarlo supports --format csv|json");
    }
    const qkd::ScenarioConfig cfg = build_config(opt);
    const qkd::StatsReport report = qkd::run_campaign(cfg, opt.trials, opt.seed, opt.jobs);

    if (!opt.out.empty()) {
        std::ofstream file(opt.out);
        if (!file) throw std::runtime_error("cannot write output file: " + opt.out);
        if (format == "csv") {
            file << qkd::StatsReport::csv_header() << "\n" << report.csv_row(opt.scenario) << "\n";
        } else {
            file << report.json(opt.scenario) << "\n";
        }
        if (!file.good()) throw std::runtime_error("write failed: " + opt.out);
    }

    std::cout << "scenario=" << opt.scenario << " trials=" << report.trials
              << " success=" << report.attack_success_rate << " qber=" << report.mean_qber
              << " detection=" << report.detection_rate << " sift=" << report.sift_rate
              << " forgery=" << report.exact_forgery_rate << " aborts=" << report.abort_rate
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BB84 key-distribution simulator with interposable eavesdropper strategies"};
    app.require_subcommand(1);

    CliOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "run one session and print its trace");
    add_scenario_flags(run, run_opt);
    run->add_option("--format", run_opt.format, "table|json (default table)");
    run->add_flag("--unicode", run_opt.unicode, "use ket glyphs in table output");

    CliOptions mc_opt;
    CLI::App* mc = app.add_subcommand("montecarlo", "run many sessions and aggregate statistics");
    add_scenario_flags(mc, mc_opt);
    mc->add_option("--trials", mc_opt.trials, "number of sessions");
    mc->add_option("--format", mc_opt.format, "csv|json (default csv)");
    mc->add_option("--out", mc_opt.out, "write the report to this path");
    mc->add_option("--jobs", mc_opt.jobs, "worker threads (0 = all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (run->parsed()) return cmd_run(run_opt);
        return cmd_montecarlo(mc_opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
