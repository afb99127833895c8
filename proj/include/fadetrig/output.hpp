#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fadetrig/engine.hpp"

namespace fadetrig {

/// 12 significant digits, printf "%.12g".
std::string format_real(double v);

std::string path_csv(const SamplePath& path);
std::string events_csv(const SamplePath& path);
std::string envelope_csv(const McSummary& summary);
std::string intervals_hist_csv(const McSummary& summary);
std::string compare_csv(const std::vector<FormationRow>& rows);

/// Writes `content` to `file`, creating parent directories. Throws
/// std::runtime_error naming the file on failure.
void write_text_file(const std::filesystem::path& file, const std::string& content);

/// path_<seed>.csv and events_<seed>.csv for each path, then envelope.csv and
/// intervals_hist.csv. Returns the files written.
std::vector<std::filesystem::path> emit_outputs(const McSummary& summary,
                                                const std::vector<SamplePath>& paths,
                                                const std::filesystem::path& out_dir);

}  // namespace fadetrig
