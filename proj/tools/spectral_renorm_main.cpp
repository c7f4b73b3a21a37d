#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "experiments.hpp"

using namespace spectral::harness;

namespace {

int log_level() {
    const char* env = std::getenv("SPECTRAL_LOG");
    if (!env) return 1;
    std::string v(env);
    if (v == "quiet") return 0;
    if (v == "debug") return 2;
    return 1;
}

int run(ExperimentKind kind, const std::string& config_path, std::optional<std::uint64_t> seed,
        std::optional<std::string> out) {
    json cfg_json;
    {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "cannot open config file: " << config_path << "\n";
            return 2;
        }
        try {
            in >> cfg_json;
        } catch (const std::exception& e) {
            std::cerr << "config parse error: " << e.what() << "\n";
            return 2;
        }
    }
    if (!cfg_json.contains("kind")) cfg_json["kind"] = kind_name(kind);
    ExperimentConfig cfg;
    try {
        cfg = parse_config(cfg_json);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    }
    if (cfg.kind != kind) {
        std::cerr << "schema error: config kind '" << kind_name(cfg.kind)
                  << "' does not match subcommand '" << kind_name(kind) << "'\n";
        return 2;
    }
    if (seed) cfg.seed = *seed;
    if (out) cfg.output_dir = *out;

    Report rep;
    try {
        rep = run_experiment(cfg);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    }
    const std::string path = write_report(rep, cfg);
    if (log_level() >= 1) {
        std::cout << "report: " << path << "\n";
        for (const auto& c : rep.checks)
            std::cout << (c.pass ? "  pass  " : "  FAIL  ") << c.name << "  value="
                      << c.value << " tol=" << c.tolerance << "\n";
    }
    if (!rep.all_pass()) {
        std::cerr << "failing checks:";
        for (const auto& n : rep.failing()) std::cerr << " " << n;
        std::cerr << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"renormalization and transfer-operator experiment runner"};
    app.require_subcommand(1);

    struct Sub {
        ExperimentKind kind;
        std::string config;
        std::optional<std::uint64_t> seed;
        std::optional<std::string> out;
    };
    std::vector<std::shared_ptr<Sub>> subs;
    for (ExperimentKind k :
         {ExperimentKind::validate_covering, ExperimentKind::renorm_iterate,
          ExperimentKind::renorm_poly, ExperimentKind::verify_identities, ExperimentKind::cmv,
          ExperimentKind::measure, ExperimentKind::lipschitz}) {
        auto sub = std::make_shared<Sub>();
        sub->kind = k;
        auto* cmd = app.add_subcommand(kind_name(k));
        cmd->add_option("--config", sub->config, "experiment config JSON")->required();
        cmd->add_option("--seed", [sub](const std::vector<std::string>& v) {
            try {
                sub->seed = std::stoull(v.at(0));
            } catch (const std::exception&) {
                return false;
            }
            return true;
        }, "seed override");
        cmd->add_option("--out", [sub](const std::vector<std::string>& v) {
            sub->out = v.at(0);
            return true;
        }, "output directory override");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);
    for (const auto& sub : subs) {
        if (app.got_subcommand(kind_name(sub->kind)))
            return run(sub->kind, sub->config, sub->seed, sub->out);
    }
    std::cerr << "no subcommand\n";
    return 2;
}
