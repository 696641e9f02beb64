#pragma once

#include <iosfwd>
#include <string>

#include "lsm/paths.hpp"
#include "lsm/stability.hpp"

namespace lsm {

// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double x);

// Header: path_index,t_0,...,t_M; one row per path.
void write_paths_csv(std::ostream& os, const PathSet& paths);

// Inverse of write_paths_csv; the time grid itself comes from the caller
// (the file stores values only). Column count must be M+2.
PathSet read_paths_csv(std::istream& is, const TimeGrid& grid);

// Header exactly: t,kappa,ln_t,ln_kappa,is_infinite. kappa and ln_kappa are
// empty when is_infinite is "true".
void write_scan_csv(std::ostream& os, const ConditionScan& scan);

} // namespace lsm
