#pragma once

#include <filesystem>
#include <string>

#include "swirl/background.hpp"
#include "swirl/core.hpp"
#include "swirl/pipeline.hpp"

namespace swirl {

enum class ReportFormat { json, csv };

/// %.17g; -0 prints as 0, non-finite values become "nan", "inf", "-inf".
std::string format_double(double v);

void write_background_csv(const BackgroundShockSolution& bg, const std::filesystem::path& path);
/// Line 1: "z,<z_0>,...", line 2: "r,<r_0>,...", then one line per z of nr values.
void write_field_csv(const LinearField2D& f, const std::filesystem::path& path);
void write_report_json(const RunResult& res, const std::filesystem::path& path);
void write_report_csv(const RunResult& res, const std::filesystem::path& path);

/// Everything the result holds. Throws io errors when the directory is unusable.
void write_outputs(const RunResult& res, const std::filesystem::path& out_dir,
                   ReportFormat format = ReportFormat::json);

}  // namespace swirl
