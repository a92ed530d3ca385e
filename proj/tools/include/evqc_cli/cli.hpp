#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "evqc/states.hpp"

namespace evqc::cli {

// Stable exit-code contract for scripts.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitUndecided = 2;

/// Runs the `evqc` front end. args excludes the program name. Reports go to
/// out (or to --out when given), diagnostics to err.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// {"omega": [...], "theta": t, "couplings": [[i, j, J], ...], "n": k}
/// "n" and "couplings" are optional; "n" must match the omega count.
SpinSystem parse_spin_system(std::string_view json_text);
SpinSystem load_spin_system(const std::filesystem::path &path);

/// Writes to a sibling temp file and renames it over path.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);

std::string read_file(const std::filesystem::path &path);

} // namespace evqc::cli
