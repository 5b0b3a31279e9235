#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "dirac/harness/config.hpp"
#include "dirac/state.hpp"

namespace dirac::harness {

/// Double rendered with 17 significant digits.
std::string format_real(double v);

/// Opens a file for binary writing, creating parent directories. Throws
/// IoError.
std::ofstream open_output(const std::filesystem::path& path);

/// csv: header `x,re_up,im_up,re_dn,im_dn,abs2`, one row per node.
/// jsonl: one object per node with the same keys plus `t`.
void export_field(const StateField& state, std::ostream& out, FieldFormat format);
/// Throws IoError when the file cannot be written.
void export_field(const StateField& state, const std::filesystem::path& path, FieldFormat format);

/// Reads a csv export back onto `grid`. Throws IoError on malformed input or
/// when the rows do not match the grid nodes.
StateField import_csv(std::istream& in, const Grid1D& grid, double t);
StateField import_csv(const std::filesystem::path& path, const Grid1D& grid, double t);

}  // namespace dirac::harness
