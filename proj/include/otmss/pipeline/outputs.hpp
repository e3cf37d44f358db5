#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "otmss/pipeline/sweep.hpp"

namespace otmss::pipeline {

inline constexpr const char* kCsvHeader =
    "k,r,phi,occupation,gamma,power_bd,power_otmss,wronskian_residual";

/// records.csv content, 17 significant digits per value.
std::string records_csv(const RunReport& report);

std::string summary_text(const RunReport& report);

/// gnuplot script for one of fig_rk, fig_phik, fig_betak, fig_gammak, fig_deltak.
std::string plot_script(const std::string& figure, double pivot);

/// Writes records.csv, summary.txt and the five plot scripts, creating
/// out_dir if needed. Returns the files written. Throws std::runtime_error
/// carrying the path on I/O failure.
std::vector<std::filesystem::path> write_outputs(const RunReport& report,
                                                 const std::filesystem::path& out_dir);

} // namespace otmss::pipeline
