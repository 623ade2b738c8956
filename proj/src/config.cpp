#include "aggne/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "aggne/errors.hpp"
#include "aggne/log.hpp"

namespace aggne {

LogLevel log_level() {
	static const LogLevel level = [] {
		const char* env = std::getenv("AGGNE_LOG");
		if (env == nullptr || std::strcmp(env, "off") == 0) return LogLevel::off;
		if (std::strcmp(env, "info") == 0) return LogLevel::info;
		if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
		std::fprintf(stderr, "aggne: unknown AGGNE_LOG value '%s'\n", env);
		return LogLevel::off;
	}();
	return level;
}

void log_info(const std::string& msg) {
	if (log_level() >= LogLevel::info)
		std::fprintf(stderr, "[aggne] %s\n", msg.c_str());
}

void log_debug(const std::string& msg) {
	if (log_level() >= LogLevel::debug)
		std::fprintf(stderr, "[aggne:debug] %s\n", msg.c_str());
}

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
	if (!obj.is_object())
		throw ParseError(where + ": expected an object");
	for (auto it = obj.begin(); it != obj.end(); ++it) {
		if (!allowed.contains(it.key()))
			throw ValidationError(where + ": unknown key '" + it.key() + "'");
	}
}

double get_number(const json& j, const std::string& where) {
	if (!j.is_number()) throw ParseError(where + ": expected a number");
	return j.get<double>();
}

long get_integer(const json& j, const std::string& where) {
	if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
	return j.get<long>();
}

Eigen::VectorXd get_vector(const json& j, int len, const std::string& where) {
	if (!j.is_array() || static_cast<int>(j.size()) != len)
		throw ParseError(where + ": expected an array of length " +
		                 std::to_string(len));
	Eigen::VectorXd v(len);
	for (int i = 0; i < len; ++i) v(i) = get_number(j[i], where);
	return v;
}

// Dense row-major: array of rows.
Eigen::MatrixXd get_matrix(const json& j, int rows, int cols,
                           const std::string& where) {
	if (!j.is_array() || static_cast<int>(j.size()) != rows)
		throw ParseError(where + ": expected " + std::to_string(rows) + " rows");
	Eigen::MatrixXd m(rows, cols);
	for (int r = 0; r < rows; ++r)
		m.row(r) = get_vector(j[r], cols, where).transpose();
	return m;
}

GameSpec parse_game(const json& j) {
	require_keys(j, "game", {"builtin", "quadratic"});
	if (j.contains("builtin") == j.contains("quadratic"))
		throw ValidationError("game: exactly one of 'builtin'/'quadratic'");
	if (j.contains("builtin")) {
		const std::string name = j["builtin"].get<std::string>();
		if (name != "ev_paper")
			throw ValidationError("game: unknown builtin '" + name + "'");
		return BuiltinGameSpec{name};
	}
	const json& q = j["quadratic"];
	require_keys(q, "game.quadratic",
	             {"n", "m", "d", "c1", "b1", "u", "c2", "b2"});
	QuadraticGameSpec spec;
	spec.n = static_cast<int>(get_integer(q.at("n"), "game.quadratic.n"));
	spec.m = static_cast<int>(get_integer(q.at("m"), "game.quadratic.m"));
	if (spec.n < 1 || spec.m < 1)
		throw ValidationError("game.quadratic: n and m must be >= 1");
	spec.d = get_vector(q.at("d"), spec.n, "game.quadratic.d");
	spec.c1 = get_matrix(q.at("c1"), spec.m, spec.m, "game.quadratic.c1");
	spec.b1 = get_vector(q.at("b1"), spec.m, "game.quadratic.b1");
	spec.u = get_matrix(q.at("u"), spec.m, spec.m, "game.quadratic.u");
	const json& c2 = q.at("c2");
	if (!c2.is_array() || static_cast<int>(c2.size()) != spec.n)
		throw ParseError("game.quadratic.c2: need one matrix per player");
	for (const json& c : c2)
		spec.c2.push_back(get_matrix(c, spec.m, spec.m, "game.quadratic.c2[i]"));
	spec.b2 = get_vector(q.at("b2"), spec.m, "game.quadratic.b2");
	return spec;
}

GraphSpec parse_graph(const json& j) {
	if (j.is_string()) {
		if (j.get<std::string>() != "complete")
			throw ValidationError("graph: unknown kind '" + j.get<std::string>() + "'");
		return CompleteGraphSpec{};
	}
	require_keys(j, "graph", {"complete", "edges", "random"});
	if (j.size() != 1)
		throw ValidationError("graph: exactly one of 'complete'/'edges'/'random'");
	if (j.contains("complete")) return CompleteGraphSpec{};
	if (j.contains("edges")) {
		const json& e = j["edges"];
		require_keys(e, "graph.edges", {"n", "list"});
		EdgeListGraphSpec spec;
		spec.n = static_cast<int>(get_integer(e.at("n"), "graph.edges.n"));
		const json& list = e.at("list");
		if (!list.is_array()) throw ParseError("graph.edges.list: expected array");
		for (const json& pair : list) {
			if (!pair.is_array() || pair.size() != 2)
				throw ParseError("graph.edges.list: entries must be [i, j]");
			spec.edges.emplace_back(
			    static_cast<int>(get_integer(pair[0], "graph.edges.list")),
			    static_cast<int>(get_integer(pair[1], "graph.edges.list")));
		}
		return spec;
	}
	const json& r = j["random"];
	require_keys(r, "graph.random", {"n", "edge_prob", "seed"});
	RandomGraphSpec spec;
	spec.n = static_cast<int>(get_integer(r.at("n"), "graph.random.n"));
	spec.edge_prob = get_number(r.at("edge_prob"), "graph.random.edge_prob");
	spec.seed = static_cast<std::uint64_t>(
	    get_integer(r.at("seed"), "graph.random.seed"));
	return spec;
}

StepSchedule parse_schedule(const json& j, bool allow_unsafe) {
	StepSchedule s;
	if (j.is_string()) {
		if (j.get<std::string>() != "paper")
			throw ValidationError("schedule: unknown preset '" + j.get<std::string>() + "'");
		s = StepSchedule::paper();
	} else {
		require_keys(j, "schedule", {"gamma0", "a", "eta0", "b"});
		s.gamma0 = get_number(j.at("gamma0"), "schedule.gamma0");
		s.a = get_number(j.at("a"), "schedule.a");
		s.eta0 = get_number(j.at("eta0"), "schedule.eta0");
		s.b = get_number(j.at("b"), "schedule.b");
	}
	try {
		s.validate();
	} catch (const ValidationError&) {
		if (!allow_unsafe) throw;
		log_info("schedule violates the diminishing step-size rules; "
		         "proceeding because allow_unsafe_gamma0 is set");
	}
	return s;
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
	json root;
	try {
		root = json::parse(text);
	} catch (const json::parse_error& e) {
		throw ParseError(std::string("config: ") + e.what());
	}
	require_keys(root, "config",
	             {"game", "graph", "schedule", "x0", "max_iters",
	              "record_every", "attach_oracle", "diagnostics",
	              "allow_unsafe_gamma0", "output_path"});

	ExperimentConfig cfg;
	if (!root.contains("game")) throw ValidationError("config: 'game' required");
	if (!root.contains("graph")) throw ValidationError("config: 'graph' required");
	if (!root.contains("schedule"))
		throw ValidationError("config: 'schedule' required");
	if (!root.contains("max_iters"))
		throw ValidationError("config: 'max_iters' required");

	if (root.contains("allow_unsafe_gamma0")) {
		if (!root["allow_unsafe_gamma0"].is_boolean())
			throw ParseError("allow_unsafe_gamma0: expected a boolean");
		cfg.allow_unsafe_gamma0 = root["allow_unsafe_gamma0"].get<bool>();
	}

	cfg.game = parse_game(root["game"]);
	cfg.graph = parse_graph(root["graph"]);
	cfg.schedule = parse_schedule(root["schedule"], cfg.allow_unsafe_gamma0);

	cfg.max_iters = get_integer(root["max_iters"], "max_iters");
	if (cfg.max_iters < 0) throw ValidationError("max_iters must be >= 0");
	if (root.contains("record_every")) {
		cfg.record_every = get_integer(root["record_every"], "record_every");
		if (cfg.record_every < 1)
			throw ValidationError("record_every must be >= 1");
	}
	if (root.contains("attach_oracle")) {
		if (!root["attach_oracle"].is_boolean())
			throw ParseError("attach_oracle: expected a boolean");
		cfg.attach_oracle = root["attach_oracle"].get<bool>();
	}
	if (root.contains("x0") && !(root["x0"].is_string() &&
	                             root["x0"].get<std::string>() == "zeros")) {
		const json& x0 = root["x0"];
		if (!x0.is_array()) throw ParseError("x0: expected 'zeros' or an array");
		Eigen::VectorXd v(x0.size());
		for (std::size_t i = 0; i < x0.size(); ++i)
			v(static_cast<Eigen::Index>(i)) = get_number(x0[i], "x0");
		cfg.x0 = std::move(v);
	}
	if (root.contains("diagnostics")) {
		const json& d = root["diagnostics"];
		require_keys(d, "diagnostics", {"enabled", "window_end", "lf_scale"});
		if (d.contains("enabled")) {
			if (!d["enabled"].is_boolean())
				throw ParseError("diagnostics.enabled: expected a boolean");
			cfg.diagnostics.enabled = d["enabled"].get<bool>();
		}
		if (d.contains("window_end")) {
			cfg.diagnostics.window_end =
			    get_integer(d["window_end"], "diagnostics.window_end");
			if (cfg.diagnostics.window_end < 1)
				throw ValidationError("diagnostics.window_end must be >= 1");
		}
		if (d.contains("lf_scale")) {
			cfg.diagnostics.lf_scale = get_number(d["lf_scale"], "diagnostics.lf_scale");
			if (!(cfg.diagnostics.lf_scale > 0.0))
				throw ValidationError("diagnostics.lf_scale must be > 0");
		}
	}
	if (root.contains("output_path")) {
		if (!root["output_path"].is_string())
			throw ParseError("output_path: expected a string");
		cfg.output_path = root["output_path"].get<std::string>();
	}
	return cfg;
}

ExperimentConfig load_config(const std::string& path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) throw IoError("cannot open config file " + path);
	std::ostringstream ss;
	ss << in.rdbuf();
	return parse_config(ss.str());
}

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
	json arr = json::array();
	for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
	return arr;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
	json rows = json::array();
	for (Eigen::Index r = 0; r < m.rows(); ++r)
		rows.push_back(vector_to_json(m.row(r).transpose()));
	return rows;
}

} // namespace

std::string emit_config(const ExperimentConfig& config) {
	json root;
	if (const auto* builtin = std::get_if<BuiltinGameSpec>(&config.game)) {
		root["game"] = {{"builtin", builtin->name}};
	} else {
		const auto& q = std::get<QuadraticGameSpec>(config.game);
		json qj;
		qj["n"] = q.n;
		qj["m"] = q.m;
		qj["d"] = vector_to_json(q.d);
		qj["c1"] = matrix_to_json(q.c1);
		qj["b1"] = vector_to_json(q.b1);
		qj["u"] = matrix_to_json(q.u);
		json c2 = json::array();
		for (const auto& c : q.c2) c2.push_back(matrix_to_json(c));
		qj["c2"] = c2;
		qj["b2"] = vector_to_json(q.b2);
		root["game"] = {{"quadratic", qj}};
	}
	if (std::holds_alternative<CompleteGraphSpec>(config.graph)) {
		root["graph"] = "complete";
	} else if (const auto* el = std::get_if<EdgeListGraphSpec>(&config.graph)) {
		json list = json::array();
		for (auto [i, j] : el->edges) list.push_back(json::array({i, j}));
		root["graph"] = {{"edges", {{"n", el->n}, {"list", list}}}};
	} else {
		const auto& r = std::get<RandomGraphSpec>(config.graph);
		root["graph"] = {{"random",
		                  {{"n", r.n},
		                   {"edge_prob", r.edge_prob},
		                   {"seed", static_cast<long>(r.seed)}}}};
	}
	root["schedule"] = {{"gamma0", config.schedule.gamma0},
	                    {"a", config.schedule.a},
	                    {"eta0", config.schedule.eta0},
	                    {"b", config.schedule.b}};
	if (config.x0)
		root["x0"] = vector_to_json(*config.x0);
	else
		root["x0"] = "zeros";
	root["max_iters"] = config.max_iters;
	root["record_every"] = config.record_every;
	root["attach_oracle"] = config.attach_oracle;
	root["diagnostics"] = {{"enabled", config.diagnostics.enabled},
	                       {"window_end", config.diagnostics.window_end},
	                       {"lf_scale", config.diagnostics.lf_scale}};
	root["allow_unsafe_gamma0"] = config.allow_unsafe_gamma0;
	root["output_path"] = config.output_path;
	return root.dump(2);
}

std::string config_hash(const ExperimentConfig& config) {
	const std::string text = emit_config(config);
	std::uint64_t h = 14695981039346656037ull;
	for (unsigned char c : text) {
		h ^= c;
		h *= 1099511628211ull;
	}
	char buf[17];
	std::snprintf(buf, sizeof(buf), "%016llx",
	              static_cast<unsigned long long>(h));
	return buf;
}

} // namespace aggne
