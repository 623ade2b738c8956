#pragma once

#include <optional>
#include <string>
#include <vector>

namespace aggne {

struct TraceRow {
	long k;
	double gamma_k;
	double eta_k;
	double ne_residual;
	double consensus_v;
	double consensus_y;
	std::optional<double> gap_to_xstar;
	std::optional<double> delta_norm;
};

struct Trace {
	std::vector<TraceRow> rows;
	bool has_gap = false;
	bool has_delta = false;
	bool diverged = false;
	long diverged_k = -1;
	std::string config_hash;    // filled by the experiment runner
	std::string constants_note; // constants used, for the run report
};

// CSV with a fixed column header; numbers in shortest round-trip decimal
// form. Written atomically (temp file + rename). Throws IoError.
void write_trace(const Trace& trace, const std::string& path);

// Round-trip parser for fixtures and tests.
Trace read_trace(const std::string& path);

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

} // namespace aggne
