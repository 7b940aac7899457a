#pragma once

#include "powerloop/evm.hpp"
#include "powerloop/sim.hpp"

#include <string>
#include <vector>

namespace powerloop {

// Shortest decimal form that round-trips to the same double.
std::string format_shortest(double v);

// General format with nine significant digits; the fixed width used in CSVs.
std::string format_g9(double v);

std::string trace_csv(const SimTrace& trace);
std::string evm_csv(const std::vector<EvmCurve>& curves);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

void write_trace_csv(const SimTrace& trace, const std::string& path);
void write_evm_csv(const std::vector<EvmCurve>& curves, const std::string& path);

} // namespace powerloop
