#include "metrosim/figures.hpp"

#include <fstream>
#include <numbers>
#include <stdexcept>

namespace metrosim::experiment {

namespace {

constexpr int figure_n = 25;
constexpr int comparison_n = 100;

SweepSpec full_period(std::vector<double> loss_a, std::vector<double> loss_b) {
    return {{figure_n}, {0.0, std::numbers::pi, 201}, std::move(loss_a), std::move(loss_b), {}};
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i ? " " : "") + format_number(values[i]);
    }
    return out;
}

std::string join(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i ? " " : "") + std::to_string(values[i]);
    }
    return out;
}

std::filesystem::path write_records(const SweepSpec& spec, const std::string& title,
                                    const std::filesystem::path& path, unsigned threads) {
    const auto records = run_sweep(spec, threads);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    const auto columns = spec.columns();
    write_csv(out, records, columns, csv_comments(title, spec));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
    return path;
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw std::runtime_error("cannot create output directory " + dir.string());
    }
}

}  // namespace

std::optional<FigureId> parse_figure_id(std::string_view text) {
    for (const auto id : {FigureId::fig2, FigureId::fig3, FigureId::fig4,
                          FigureId::sensitivity_comparison}) {
        if (text == to_string(id)) return id;
    }
    return std::nullopt;
}

const char* to_string(FigureId id) {
    switch (id) {
    case FigureId::fig2: return "fig2";
    case FigureId::fig3: return "fig3";
    case FigureId::fig4: return "fig4";
    case FigureId::sensitivity_comparison: return "sensitivity_comparison";
    }
    return "unknown";
}

std::vector<FigurePanel> figure_panels(FigureId id) {
    switch (id) {
    case FigureId::fig2:
        return {{"fig2_mode_b_loss.csv", "|R| versus theta, loss in mode b only",
                 full_period({0.0}, {0.1, 0.3, 0.5})},
                {"fig2_mode_a_loss.csv", "|R| versus theta, loss in mode a only",
                 full_period({0.1, 0.3, 0.5}, {0.0})}};
    case FigureId::fig3:
        return {{"fig3.csv", "|R| versus theta, R_b fixed at 0.5",
                 full_period({0.0, 0.1, 0.3, 0.5}, {0.5})}};
    case FigureId::fig4:
        // both orientations; they differ by theta -> theta + pi
        return {{"fig4_mode_a_loss.csv", "1/delta_theta versus theta, loss in mode a, R_b = 0",
                 full_period({0.0, 0.1, 0.3, 0.5}, {0.0})},
                {"fig4_mode_b_loss.csv", "1/delta_theta versus theta, loss in mode b, R_a = 0",
                 full_period({0.0}, {0.0, 0.1, 0.3, 0.5})}};
    case FigureId::sensitivity_comparison:
        return {{"sensitivity_comparison.csv", "1/delta_theta near theta = 0 with SQL and HL",
                 {{comparison_n}, {0.001, 0.2, 200}, {0.0}, {0.0, 0.1, 0.5}, {}}}};
    }
    throw std::invalid_argument("unknown figure id");
}

std::vector<std::string> csv_comments(const std::string& title, const SweepSpec& spec) {
    return {
        "metrosim " + title,
        "w convention: appendix, w = (R_b - R_a)/2",
        "grid: N = " + join(spec.n) + "; theta = " + format_number(spec.theta.start) + " .. " +
            format_number(spec.theta.stop) + " (" + std::to_string(spec.theta.steps) +
            " points); R_a = " + join(spec.loss_a) + "; R_b = " + join(spec.loss_b),
        "columns: abs_R, arg_R = |R|, arg R; P_down = (1 + Re R)/2; delta_theta_paper and "
        "delta_theta_exact in radians; inv_delta_theta = 1/delta_theta_paper; sql = 1/sqrt(N); "
        "hl = 1/N",
        "nan marks points where the error-propagation denominator vanishes",
    };
}

std::vector<std::filesystem::path> write_figure(FigureId id, const std::filesystem::path& out_dir,
                                                unsigned threads) {
    ensure_directory(out_dir);
    std::vector<std::filesystem::path> written;
    for (const auto& panel : figure_panels(id)) {
        written.push_back(
            write_records(panel.spec, panel.title, out_dir / panel.file_name, threads));
    }
    return written;
}

std::filesystem::path write_sweep(const SweepSpec& spec, const std::filesystem::path& out_dir,
                                  unsigned threads) {
    ensure_directory(out_dir);
    return write_records(spec, "sweep", out_dir / "sweep.csv", threads);
}

}  // namespace metrosim::experiment
