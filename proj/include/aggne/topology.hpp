#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace aggne {

// Undirected connected communication graph, 0-based nodes, no self-edges.
// Edges are stored normalized (i < j) and sorted.
class Topology {
 public:
	Topology(int n, std::vector<std::pair<int, int>> edges);

	int n() const { return n_; }
	const std::vector<std::pair<int, int>>& edges() const { return edges_; }
	bool has_edge(int i, int j) const;
	std::vector<int> degrees() const;
	bool connected() const;

 private:
	int n_;
	std::vector<std::pair<int, int>> edges_;
};

Topology complete_topology(int n);

// Seeded Erdos-Renyi draw; if the draw is disconnected it is augmented
// with a random spanning tree drawn from the same stream, so the result
// is always connected and deterministic per (n, edge_prob, seed).
Topology random_connected_topology(int n, double edge_prob, std::uint64_t seed);

} // namespace aggne
