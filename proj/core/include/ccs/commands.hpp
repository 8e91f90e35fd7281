// The file-emitting run modes behind the CLI subcommands. Each writes its
// output files into config.out_dir and a one-line note per file to `info`.
// Data files carry no timestamps; identical configs give byte-identical
// outputs.
#pragma once

#include <iosfwd>

#include "ccs/config.hpp"

namespace ccs {

// fields.csv (x,u,v | r,u,v | x,y,u,v) and summary.txt
void run_solve(const RunConfig& config, std::ostream& info);

// sweep.csv: alpha,m,m_prime,m_lower,sector_bound
void run_sweep(const RunConfig& config, std::ostream& info);

// timeseries.csv: t,dist_u,dist_v,mass_u
void run_validate(const RunConfig& config, std::ostream& info);

} // namespace ccs
