// micz-lab: batch front end for the integrable-systems laboratory.
//
//   micz-lab run <config.toml>     execute one experiment, write JSON/CSV
//   micz-lab report <glob...>      consolidate JSON summaries into markdown
//
// Exit codes: 0 all configured checks pass, 1 a check failed, 2 config error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "miczlab/lab/report.hpp"
#include "miczlab/lab/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"micz-lab: machine verification of a family of integrable systems"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "run one experiment from a TOML config");
    run->add_option("config", config_path, "experiment config (TOML)")->required();

    std::vector<std::string> globs;
    std::string report_out;
    auto* rep = app.add_subcommand("report", "consolidate JSON summaries");
    rep->add_option("summaries", globs, "summary files or globs")->required();
    rep->add_option("-o,--output", report_out, "markdown output path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto cfg = micz::lab::load_config(config_path);
            const auto result = micz::lab::run_task(cfg);
            std::cout << "wrote " << result.summary_path << "\n";
            for (const auto& cl : result.summary["claims"])
                std::cout << (cl["pass"].get<bool>() ? "  pass " : "  FAIL ")
                          << cl["id"].get<std::string>() << "  value=" << cl["value"].dump()
                          << " tol=" << cl["tolerance"].dump() << "\n";
            return result.exit_code;
        }
        const auto result = micz::lab::consolidate(globs);
        if (report_out.empty()) {
            std::cout << result.markdown;
        } else {
            std::ofstream md(report_out);
            md << result.markdown;
            std::ofstream js(report_out + ".json");
            js << result.merged.dump(2) << "\n";
            std::cout << "wrote " << report_out << " and " << report_out << ".json\n";
        }
        return result.exit_code;
    } catch (const micz::toml::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
