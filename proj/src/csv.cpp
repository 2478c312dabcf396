#include "dsbu/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unistd.h>

#include "dsbu/error.hpp"

namespace dsbu {

namespace {

constexpr const char* kRecordsHeader = "t,mass,energy,grad_sq,second_moment,moment_valid,sup_abs,l4_accum,dt";

double parse_field(std::string_view s, std::size_t row) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("records csv row " + std::to_string(row) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_records_csv(std::ostream& out, const std::vector<ConservationRecord>& records) {
  out << kRecordsHeader << '\n';
  for (const auto& r : records) {
    out << format_double(r.t) << ',' << format_double(r.mass) << ',' << format_double(r.energy) << ','
        << format_double(r.gradient_norm_sq) << ',' << format_double(r.second_moment) << ','
        << (r.moment_valid ? 1 : 0) << ',' << format_double(r.sup_abs) << ',' << format_double(r.l4_accum) << ','
        << format_double(r.dt_used) << '\n';
  }
}

std::vector<ConservationRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRecordsHeader) throw FormatError("records csv: unexpected header");
  std::vector<ConservationRecord> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      cells.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (cells.size() != 9) throw FormatError("records csv row " + std::to_string(row) + ": expected 9 columns");
    ConservationRecord r;
    r.t = parse_field(cells[0], row);
    r.mass = parse_field(cells[1], row);
    r.energy = parse_field(cells[2], row);
    r.gradient_norm_sq = parse_field(cells[3], row);
    r.second_moment = parse_field(cells[4], row);
    r.moment_valid = parse_field(cells[5], row) != 0.0;
    r.sup_abs = parse_field(cells[6], row);
    r.l4_accum = parse_field(cells[7], row);
    r.dt_used = parse_field(cells[8], row);
    out.push_back(r);
  }
  return out;
}

void write_concentration_csv(std::ostream& out, const std::vector<ConcentrationRecord>& records) {
  out << "t,lambda,best_mass,yx,yy,rho,rescaled_energy,rescaled_quartic\n";
  for (const auto& r : records) {
    out << format_double(r.t) << ',' << format_double(r.window.size) << ',' << format_double(r.best_mass) << ','
        << format_double(r.y1) << ',' << format_double(r.y2) << ',' << format_double(r.rho) << ','
        << format_double(r.rescaled_energy) << ',' << format_double(r.rescaled_quartic) << '\n';
  }
}

void write_square_csv(std::ostream& out, const std::vector<SquareRecord>& records) {
  out << "t,side,best_mass,sqrt_best_mass,yx,yy,skipped\n";
  for (const auto& r : records) {
    out << format_double(r.t) << ',' << format_double(r.side) << ',' << format_double(r.best_mass) << ','
        << format_double(r.sqrt_best_mass) << ',' << format_double(r.y1) << ',' << format_double(r.y2) << ','
        << (r.skipped ? 1 : 0) << '\n';
  }
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace dsbu
