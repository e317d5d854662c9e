#include "aim/csv.hpp"

#include <charconv>

namespace aim {

std::string format_number(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos)
    return std::string(value);
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string scan_csv(const ScanResult& scan) {
  const GridSpec& g = scan.grid;
  std::string out = "alpha,beta,h,gamma,iterations,runs,successes,tsr\n";
  for (int ai = 0; ai < g.alpha_steps; ++ai) {
    for (int bi = 0; bi < g.beta_steps; ++bi) {
      const TsrEstimate& cell = scan.at(ai, bi);
      out += format_number(g.alpha_value(ai));
      out += ',';
      out += format_number(g.beta_value(bi));
      out += ',';
      out += format_number(g.base.h);
      out += ',';
      out += format_number(g.base.gamma);
      out += ',';
      out += std::to_string(g.base.iterations);
      out += ',';
      out += std::to_string(cell.runs);
      out += ',';
      out += std::to_string(cell.successes);
      out += ',';
      out += format_number(cell.value);
      out += '\n';
    }
  }
  return out;
}

std::string sweep_csv(const SweepTable& table) {
  std::string out = "sweep_param,value,aoo_percent,nonzero_cells,total_cells\n";
  for (const SweepEntry& e : table.entries) {
    out += csv_field(table.parameter);
    out += ',';
    out += format_number(e.value);
    out += ',';
    out += format_number(e.aoo.percent);
    out += ',';
    out += std::to_string(e.aoo.nonzero_cells);
    out += ',';
    out += std::to_string(e.aoo.total_cells);
    out += '\n';
  }
  return out;
}

std::string bifurcation_csv(const BifurcationScan& scan) {
  std::string out = "alpha,sample_index,final_amplitude\n";
  for (std::size_t ai = 0; ai < scan.alphas.size(); ++ai) {
    const auto& samples = scan.final_amplitudes[ai];
    for (std::size_t s = 0; s < samples.size(); ++s) {
      out += format_number(scan.alphas[ai]);
      out += ',';
      out += std::to_string(s);
      out += ',';
      out += format_number(samples[s]);
      out += '\n';
    }
  }
  out += "# detected_threshold = ";
  out += scan.detected_threshold ? format_number(*scan.detected_threshold)
                                 : std::string("not detected");
  out += '\n';
  return out;
}

}  // namespace aim
