#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dsbu/concentration.hpp"
#include "dsbu/evolution.hpp"

namespace dsbu {

/// Shortest text that reads back to the same double ("%.17g").
std::string format_double(double x);

/// Header t,mass,energy,grad_sq,second_moment,moment_valid,sup_abs,l4_accum,dt
void write_records_csv(std::ostream& out, const std::vector<ConservationRecord>& records);
/// Inverse of write_records_csv. Throws FormatError on a bad header or row.
std::vector<ConservationRecord> read_records_csv(std::istream& in);

/// Header t,lambda,best_mass,yx,yy,rho,rescaled_energy,rescaled_quartic
void write_concentration_csv(std::ostream& out, const std::vector<ConcentrationRecord>& records);

/// Header t,side,best_mass,sqrt_best_mass,yx,yy,skipped
void write_square_csv(std::ostream& out, const std::vector<SquareRecord>& records);

/// Writes `text` to a temporary sibling and renames it over `path`.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace dsbu
