#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

#ifndef CHAINTX_CONVENTIONS
#define CHAINTX_CONVENTIONS "conventions.txt"
#endif

namespace {

struct Common {
    std::string format;
    std::string out;
    std::optional<double> g;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--format", c.format, "csv or json (default csv)")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--g", c.g, "signed hop prefactor; overrides config and conventions");
}

cli::GChoice choose_g(const Common& flags, const std::optional<double>& from_config) {
    if (flags.g) {
        if (*flags.g == 0.0) throw cli::CliError(cli::kUsage, "--g: expected a non-zero number");
        return {*flags.g, "flag"};
    }
    if (from_config) return {*from_config, "config"};
    return {1.0, "default"};
}

void emit(const cli::Report& r, const Common& flags, const cli::RunConfig* cfg) {
    cli::Format f = cli::Format::Csv;
    if (!flags.format.empty()) f = cli::parse_format(flags.format);
    else if (cfg && cfg->format) f = cli::parse_format(*cfg->format);
    std::optional<std::string> out;
    if (!flags.out.empty()) out = flags.out;
    else if (cfg && cfg->out) out = cfg->out;
    cli::emit(r, f, out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-chain state transfer: W(tau) eigenanalysis, fidelity scans and reproduction presets"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(chaintx_version()));

    Common common;
    std::string config_path, preset, conventions = CHAINTX_CONVENTIONS, write_to;

    auto* reproduce = app.add_subcommand("reproduce", "run a reproduction preset");
    reproduce->add_option("preset", preset, "table1..table5, fig2a, fig2b, fig3")->required();
    reproduce->add_option("--conventions", conventions, "conventions file holding calibrated g values");
    add_common(reproduce, common);

    CLI::App* config_cmds[3] = {
        app.add_subcommand("eigen", "W(tau) eigensystem and transferable candidates"),
        app.add_subcommand("scan", "fidelity over a time window, or F_max/T_max over chain lengths"),
        app.add_subcommand("table3", "maximal eigenvector overlaps with |1> over a tau window"),
    };
    for (auto* sub : config_cmds) {
        sub->add_option("--config", config_path, "key = value run file")->required();
        add_common(sub, common);
    }

    auto* calibrate = app.add_subcommand("calibrate", "fit g for every preset against the published numbers");
    calibrate->add_option("--out", write_to, "write a conventions file");
    calibrate->add_option("--format", common.format, "csv or json (default csv)")->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kUsage;
    }

    try {
        if (reproduce->parsed()) {
            cli::GChoice g{0.0, ""};
            if (common.g) {
                g = choose_g(common, std::nullopt);
            } else {
                cli::check(chaintx_conventions_lookup(conventions.c_str(), preset.c_str(), &g.value));
                g.source = "conventions";
            }
            emit(cli::cmd_reproduce(preset, g), common, nullptr);
        } else if (calibrate->parsed()) {
            Common to_stdout{common.format, "", std::nullopt};
            emit(cli::cmd_calibrate(write_to.empty() ? std::nullopt : std::optional<std::string>(write_to)),
                 to_stdout, nullptr);
        } else {
            const cli::RunConfig cfg = cli::load_config(config_path);
            const cli::GChoice g = choose_g(common, cfg.g);
            cli::Report r;
            if (config_cmds[0]->parsed()) r = cli::cmd_eigen(cfg, g);
            else if (config_cmds[1]->parsed()) r = cli::cmd_scan(cfg, g);
            else r = cli::cmd_table3(cfg, g);
            emit(r, common, &cfg);
        }
    } catch (const cli::CliError& e) {
        std::cerr << "chaintx: " << e.what() << '\n';
        return e.code();
    } catch (const std::exception& e) {
        std::cerr << "chaintx: internal error: " << e.what() << '\n';
        return cli::kInternal;
    }
    return cli::kOk;
}
