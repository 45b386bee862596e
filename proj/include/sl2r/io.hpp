#ifndef SL2R_IO_HPP
#define SL2R_IO_HPP

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sl2r/translators.hpp"

// CSV and JSON emission, grid and key=value parsing for the CLI front end.
// CSV: comma separated, header row, 17 significant digits, LF endings.

namespace sl2r::io {

std::string format_double(double v);  // %.17g

struct Grid1D {
    double lo = 0.0, hi = 1.0;
    int n = 1;
};

// "lo:hi:n"
Grid1D parse_grid1(const std::string& text);
// "slo:shi:ns,tlo:thi:nt"
GridSpec parse_grid2(const std::string& text);

// "k1=v1,k2=v2"
std::map<std::string, double> parse_key_values(const std::string& text);

double grid_point(double lo, double hi, int n, int i);

void write_solve_csv(std::ostream& os, const std::vector<SolveRow>& rows);
std::string solve_json(const std::vector<SolveRow>& rows,
                       const std::map<std::string, std::string>& metadata);

std::string residual_report_json(const ResidualReport& report);

}  // namespace sl2r::io

#endif
