// figures.hpp
// Fixed sweep presets for the published figure data.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metrosim/sweep.hpp"

namespace metrosim::experiment {

enum class FigureId { fig2, fig3, fig4, sensitivity_comparison };

std::optional<FigureId> parse_figure_id(std::string_view text);
const char* to_string(FigureId id);

struct FigurePanel {
    std::string file_name;
    std::string title;
    SweepSpec spec;
};

std::vector<FigurePanel> figure_panels(FigureId id);

// Metadata lines written above the CSV header.
std::vector<std::string> csv_comments(const std::string& title, const SweepSpec& spec);

// Writes one CSV per panel into out_dir, creating it if needed. Returns the
// written paths. Throws std::runtime_error if a file cannot be written.
std::vector<std::filesystem::path> write_figure(FigureId id, const std::filesystem::path& out_dir,
                                                unsigned threads);

// Runs an arbitrary sweep and writes sweep.csv into out_dir.
std::filesystem::path write_sweep(const SweepSpec& spec, const std::filesystem::path& out_dir,
                                  unsigned threads);

}  // namespace metrosim::experiment
