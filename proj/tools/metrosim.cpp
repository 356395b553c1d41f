// metrosim command line: sweeps, figure presets and the oracle crosscheck.

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <string>

#include "metrosim/figures.hpp"
#include "metrosim/parallel.hpp"
#include "metrosim/sweep.hpp"
#include "metrosim/validation.hpp"

namespace ex = metrosim::experiment;

int main(int argc, char** argv) {
    CLI::App app{"Hybrid spin-oscillator interferometer under particle loss"};
    app.require_subcommand(1);

    std::string config_path;
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "Evaluate a JSON sweep config and write sweep.csv");
    sweep->add_option("--config", config_path, "Sweep config (JSON)")->required();
    sweep->add_option("--out", sweep_out, "Output directory")->required();

    std::string figure_name;
    std::string figure_out;
    auto* figure = app.add_subcommand("figure", "Write the CSV data of a figure preset");
    figure->add_option("--id", figure_name, "Preset")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig3", "fig4", "sensitivity_comparison"}));
    figure->add_option("--out", figure_out, "Output directory")->required();

    std::string report_path = "crosscheck_report.json";
    std::string convention_name = "appendix";
    auto* validate = app.add_subcommand("validate", "Crosscheck closed forms against the oracle");
    validate->add_option("--json", report_path, "Report file")->capture_default_str();
    validate->add_option("--w-convention", convention_name)
        ->check(CLI::IsMember({"appendix", "main_text"}))
        ->group("");

    CLI11_PARSE(app, argc, argv);

    const unsigned threads = metrosim::thread_budget();
    try {
        if (*sweep) {
            const auto spec = ex::load_sweep_spec(config_path);
            std::cout << ex::write_sweep(spec, sweep_out, threads).string() << '\n';
            return 0;
        }
        if (*figure) {
            for (const auto& path : ex::write_figure(*ex::parse_figure_id(figure_name), figure_out,
                                                     threads)) {
                std::cout << path.string() << '\n';
            }
            return 0;
        }
        const auto convention = convention_name == "main_text"
                                    ? metrosim::analytic::WConvention::main_text
                                    : metrosim::analytic::WConvention::appendix;
        const auto outcome = ex::run_validation(convention, threads);
        ex::write_report(outcome, report_path);
        std::cout << outcome.text;
        if (outcome.exit_code != 0) {
            std::cerr << "failing claims:";
            for (const auto& name : outcome.failing_claims) std::cerr << ' ' << name;
            std::cerr << '\n';
        }
        return outcome.exit_code;
    } catch (const ex::SpecError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
