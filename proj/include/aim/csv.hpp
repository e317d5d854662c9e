#pragma once

#include <string>
#include <string_view>

#include "aim/scan.hpp"

namespace aim {

/// Shortest decimal form that round-trips to the same double.
std::string format_number(double value);

/// RFC-4180 field quoting (applied only when the field needs it).
std::string csv_field(std::string_view value);

/// Header `alpha,beta,h,gamma,iterations,runs,successes,tsr`, one row per
/// cell in alpha-major order.
std::string scan_csv(const ScanResult& scan);

/// Header `sweep_param,value,aoo_percent,nonzero_cells,total_cells`.
std::string sweep_csv(const SweepTable& table);

/// Header `alpha,sample_index,final_amplitude`, one row per recorded sample,
/// then a `# detected_threshold = ...` summary line.
std::string bifurcation_csv(const BifurcationScan& scan);

}  // namespace aim
