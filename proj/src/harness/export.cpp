#include "dirac/harness/export.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dirac/error.hpp"

namespace dirac::harness {

std::string format_real(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  return out;
}

void export_field(const StateField& state, std::ostream& out, FieldFormat format) {
  const Grid1D& grid = state.grid;
  if (format == FieldFormat::csv) {
    out << "x,re_up,im_up,re_dn,im_dn,abs2\n";
  }
  const std::string t = format_real(state.t);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Spinor& s = state.psi[j];
    const std::string fields[] = {format_real(grid.x(j)),     format_real(s.up.real()),
                                  format_real(s.up.imag()),   format_real(s.dn.real()),
                                  format_real(s.dn.imag()),   format_real(norm2(s))};
    if (format == FieldFormat::csv) {
      out << fields[0] << ',' << fields[1] << ',' << fields[2] << ',' << fields[3] << ','
          << fields[4] << ',' << fields[5] << '\n';
    } else {
      out << "{\"t\":" << t << ",\"x\":" << fields[0] << ",\"re_up\":" << fields[1]
          << ",\"im_up\":" << fields[2] << ",\"re_dn\":" << fields[3] << ",\"im_dn\":" << fields[4]
          << ",\"abs2\":" << fields[5] << "}\n";
    }
  }
}

void export_field(const StateField& state, const std::filesystem::path& path, FieldFormat format) {
  std::ofstream out = open_output(path);
  export_field(state, out, format);
  if (!out.flush()) {
    throw IoError("write to '" + path.string() + "' failed");
  }
}

StateField import_csv(std::istream& in, const Grid1D& grid, double t) {
  std::string line;
  if (!std::getline(in, line) || line != "x,re_up,im_up,re_dn,im_dn,abs2") {
    throw IoError("import_csv: missing or unexpected header");
  }
  StateField state(grid, t);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    if (row >= grid.size()) {
      throw IoError("import_csv: more rows than grid nodes");
    }
    double v[6];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int k = 0; k < 6; ++k) {
      const auto res = std::from_chars(p, end, v[k]);
      if (res.ec != std::errc() || (k < 5 && (res.ptr == end || *res.ptr != ',')) ||
          (k == 5 && res.ptr != end)) {
        throw IoError("import_csv: malformed row " + std::to_string(row + 1));
      }
      p = res.ptr + 1;
    }
    if (v[0] != grid.x(row)) {
      throw IoError("import_csv: row " + std::to_string(row + 1) + " is not at grid node x = " +
                    format_real(grid.x(row)));
    }
    state.psi[row] = {cplx(v[1], v[2]), cplx(v[3], v[4])};
    ++row;
  }
  if (row != grid.size()) {
    throw IoError("import_csv: expected " + std::to_string(grid.size()) + " rows, found " +
                  std::to_string(row));
  }
  return state;
}

StateField import_csv(const std::filesystem::path& path, const Grid1D& grid, double t) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  return import_csv(in, grid, t);
}

}  // namespace dirac::harness
