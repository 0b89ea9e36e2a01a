// Command-line front end: figure datasets, custom λ sweeps, CSV output.
//
// Exit codes: 0 ok, 1 bad input, 2 computation failure.

#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "phsub/errors.h"
#include "phsub/sweep.h"

namespace {

constexpr int kExitBadInput = 1;
constexpr int kExitComputation = 2;

struct Flags {
    std::string config;
    // Flag values in command-line order, applied after the config file.
    std::vector<std::pair<std::string, std::string>> settings;
};

void add_setting_options(CLI::App *cmd, Flags &flags) {
    cmd->add_option("--config", flags.config, "key=value config file; flags override its values");
    const std::pair<const char *, const char *> valued[] = {
        {"eta", "beam-splitter transmittance"},
        {"epsilon", "on-off detector efficiency"},
        {"cp", "preparation cost C_P"},
        {"cs", "post-selection cost C_S"},
        {"cm", "final-measurement cost C_M"},
        {"grid", "log-spaced lambda grid min:max:points"},
        {"out", "output CSV path ('-' for stdout)"},
        {"seed", "Monte Carlo seed"},
        {"trials", "Monte Carlo trials per grid point"},
        {"workers", "worker threads (0 = all cores)"},
        {"accepted-meas", "measurement on the heralded state for rate columns: het|hom"},
    };
    for (auto [name, help] : valued) {
        std::string key = name;
        cmd->add_option_function<std::string>(
            "--" + key, [&flags, key](const std::string &v) { flags.settings.emplace_back(key, v); }, help);
    }
    const std::pair<const char *, const char *> switches[] = {
        {"diagnostics", "write per-cell method and error estimates to <out>.diagnostics.csv"},
        {"compact", "fig7: also emit the compact post-selection rate"},
        {"oracle", "append Monte Carlo cross-check columns"},
    };
    for (auto [name, help] : switches) {
        std::string key = name;
        cmd->add_flag_callback("--" + key, [&flags, key]() { flags.settings.emplace_back(key, "true"); }, help);
    }
}

void emit(const phsub::Table &table, const phsub::SweepSpec &spec) {
    if (spec.output_path == "-") {
        phsub::write_csv(table, std::cout);
        if (spec.diagnostics) {
            phsub::write_diagnostics(table, std::cerr);
        }
        return;
    }
    std::ofstream out(spec.output_path, std::ios::binary);
    if (!out) {
        throw phsub::InvalidParameter("cannot open output file '" + spec.output_path + "'");
    }
    phsub::write_csv(table, out);
    if (spec.diagnostics) {
        std::ofstream diag(spec.output_path + ".diagnostics.csv", std::ios::binary);
        if (!diag) {
            throw phsub::InvalidParameter("cannot open diagnostics file");
        }
        phsub::write_diagnostics(table, diag);
    }
}

int run(phsub::SweepSpec spec, const Flags &flags) {
    if (!flags.config.empty()) {
        std::ifstream in(flags.config);
        if (!in) {
            throw phsub::InvalidParameter("cannot read config file '" + flags.config + "'");
        }
        for (const auto &[k, v] : phsub::parse_config(in)) {
            phsub::apply_setting(spec, k, v);
        }
    }
    for (const auto &[k, v] : flags.settings) {
        phsub::apply_setting(spec, k, v);
    }
    emit(phsub::run_sweep(spec), spec);
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Fisher information of photon-subtracted thermal light"};
    app.require_subcommand(1);

    Flags figure_flags;
    std::string figure_id;
    auto *figure = app.add_subcommand("figure", "emit the dataset of one figure (fig1..fig7)");
    figure->add_option("id", figure_id, "figure id")->required();
    add_setting_options(figure, figure_flags);

    Flags sweep_flags;
    std::string columns;
    auto *sweep = app.add_subcommand("sweep", "evaluate chosen columns over a lambda grid");
    sweep->add_option("--columns", columns, "comma-separated column names (see 'list')");
    add_setting_options(sweep, sweep_flags);

    auto *list = app.add_subcommand("list", "print figure ids and column names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitBadInput;
    }

    try {
        if (*list) {
            std::cout << "figures:";
            for (const auto &id : phsub::figure_ids()) {
                std::cout << " " << id;
            }
            std::cout << "\ncolumns:\n";
            for (const auto &c : phsub::column_names()) {
                std::cout << "  " << c << "\n";
            }
            return 0;
        }
        if (*figure) {
            return run(phsub::figure_spec(figure_id), figure_flags);
        }
        phsub::SweepSpec spec;
        if (!columns.empty()) {
            phsub::apply_setting(spec, "columns", columns);
        }
        return run(spec, sweep_flags);
    } catch (const phsub::InvalidParameter &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const phsub::UndefinedConditionalState &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception &e) {
        std::cerr << "computation failed: " << e.what() << "\n";
        return kExitComputation;
    }
}
