#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "censmed/cli.hpp"
#include "censmed/error.hpp"

namespace {

void add_override(std::vector<censmed::ConfigEntry>& out, const std::string& key, const std::string& value) {
    out.push_back({key, value, "command line", 0});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mediation effects with a left-censored mediator"};
    app.set_version_flag("--version", censmed::version());

    std::string mode, config_path, input, output, seed, method, xi, assay_limit, bootstrap_B, level;
    std::vector<std::string> sets;
    app.add_option("--mode", mode, "simulate, estimate, bootstrap or oracle");
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--input", input, "subject-level CSV (estimate, bootstrap)");
    app.add_option("--output", output, "result file; stdout when omitted");
    app.add_option("--seed", seed, "base seed for every random stream");
    app.add_option("--method", method, "comma-separated methods or 'all'");
    app.add_option("--xi", xi, "comma-separated mediator shifts");
    app.add_option("--assay-limit", assay_limit, "assay lower limit on the modeling scale");
    app.add_option("--bootstrap-B", bootstrap_B, "bootstrap replicates");
    app.add_option("--level", level, "confidence level");
    app.add_option("--set", sets, "any other config key as key=value (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: ConfigError: " << e.what() << "\n";
        return 2;
    }

    try {
        std::vector<censmed::ConfigEntry> entries;
        if (!config_path.empty()) entries = censmed::parse_config(config_path);
        const std::pair<const char*, const std::string*> flags[] = {
            {"mode", &mode},     {"input", &input}, {"output", &output},
            {"seed", &seed},     {"method", &method}, {"xi", &xi},
            {"assay_limit", &assay_limit}, {"bootstrap_B", &bootstrap_B}, {"level", &level},
        };
        for (const auto& [key, value] : flags) {
            if (!value->empty()) add_override(entries, key, *value);
        }
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) {
                throw censmed::Error(censmed::ErrorKind::ConfigError, "--set expects key=value, got '" + s + "'");
            }
            add_override(entries, s.substr(0, eq), s.substr(eq + 1));
        }
        const censmed::RunConfig config = censmed::resolve_config(entries);
        return censmed::run(config, std::cout, std::cerr);
    } catch (const censmed::Error& e) {
        std::cerr << "error: " << censmed::to_string(e.kind()) << ": " << e.what() << "\n";
        return 2;
    }
}
