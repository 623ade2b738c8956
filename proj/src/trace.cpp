#include "aggne/trace.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "aggne/errors.hpp"

namespace aggne {

std::string format_double(double v) {
	char buf[32];
	auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
	if (ec != std::errc{}) throw IoError("failed to format number");
	return std::string(buf, ptr);
}

namespace {

std::string header_for(const Trace& trace) {
	std::string h = "k,gamma_k,eta_k,ne_residual,consensus_v,consensus_y";
	if (trace.has_gap) h += ",gap_to_xstar";
	if (trace.has_delta) h += ",delta_norm";
	return h;
}

double parse_double(const std::string& tok) {
	double v = 0.0;
	auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
	if (ec != std::errc{} || ptr != tok.data() + tok.size())
		throw ParseError("trace: bad numeric field '" + tok + "'");
	return v;
}

} // namespace

void write_trace(const Trace& trace, const std::string& path) {
	namespace fs = std::filesystem;
	const fs::path target(path);
	const fs::path tmp = target.string() + ".tmp";

	{
		std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
		if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
		out << header_for(trace) << "\n";
		for (const TraceRow& row : trace.rows) {
			out << row.k << ',' << format_double(row.gamma_k) << ','
			    << format_double(row.eta_k) << ','
			    << format_double(row.ne_residual) << ','
			    << format_double(row.consensus_v) << ','
			    << format_double(row.consensus_y);
			if (trace.has_gap)
				out << ',' << format_double(row.gap_to_xstar.value_or(0.0));
			if (trace.has_delta) {
				out << ',';
				if (row.delta_norm) out << format_double(*row.delta_norm);
			}
			out << '\n';
		}
		if (!out) throw IoError("write failed for " + tmp.string());
	}
	std::error_code ec;
	fs::rename(tmp, target, ec);
	if (ec) {
		fs::remove(tmp);
		throw IoError("cannot move trace into place at " + path + ": " +
		              ec.message());
	}
}

Trace read_trace(const std::string& path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) throw IoError("cannot open " + path);
	std::string line;
	if (!std::getline(in, line)) throw ParseError("trace: empty file");

	Trace trace;
	trace.has_gap = line.find("gap_to_xstar") != std::string::npos;
	trace.has_delta = line.find("delta_norm") != std::string::npos;

	while (std::getline(in, line)) {
		if (line.empty()) continue;
		std::vector<std::string> toks;
		std::stringstream ss(line);
		std::string tok;
		while (std::getline(ss, tok, ',')) toks.push_back(tok);
		// trailing empty delta field
		if (line.back() == ',') toks.push_back("");
		std::size_t expected = 6 + (trace.has_gap ? 1 : 0) + (trace.has_delta ? 1 : 0);
		if (toks.size() != expected)
			throw ParseError("trace: wrong field count in '" + line + "'");
		TraceRow row;
		row.k = static_cast<long>(parse_double(toks[0]));
		row.gamma_k = parse_double(toks[1]);
		row.eta_k = parse_double(toks[2]);
		row.ne_residual = parse_double(toks[3]);
		row.consensus_v = parse_double(toks[4]);
		row.consensus_y = parse_double(toks[5]);
		std::size_t idx = 6;
		if (trace.has_gap) row.gap_to_xstar = parse_double(toks[idx++]);
		if (trace.has_delta && !toks[idx].empty())
			row.delta_norm = parse_double(toks[idx]);
		trace.rows.push_back(row);
	}
	return trace;
}

} // namespace aggne
