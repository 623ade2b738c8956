#include "aggne/topology.hpp"

#include <algorithm>
#include <queue>
#include <random>
#include <set>

#include "aggne/errors.hpp"

namespace aggne {

Topology::Topology(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
	if (n < 1) throw ValidationError("topology: node count must be >= 1");
	std::set<std::pair<int, int>> uniq;
	for (auto [i, j] : edges) {
		if (i == j) throw ValidationError("topology: self-edge not allowed");
		if (i < 0 || j < 0 || i >= n || j >= n)
			throw ValidationError("topology: node index out of range");
		uniq.emplace(std::min(i, j), std::max(i, j));
	}
	edges_.assign(uniq.begin(), uniq.end());
}

bool Topology::has_edge(int i, int j) const {
	auto e = std::make_pair(std::min(i, j), std::max(i, j));
	return std::binary_search(edges_.begin(), edges_.end(), e);
}

std::vector<int> Topology::degrees() const {
	std::vector<int> deg(n_, 0);
	for (auto [i, j] : edges_) {
		++deg[i];
		++deg[j];
	}
	return deg;
}

bool Topology::connected() const {
	std::vector<std::vector<int>> adj(n_);
	for (auto [i, j] : edges_) {
		adj[i].push_back(j);
		adj[j].push_back(i);
	}
	std::vector<bool> seen(n_, false);
	std::queue<int> q;
	q.push(0);
	seen[0] = true;
	int count = 1;
	while (!q.empty()) {
		int u = q.front();
		q.pop();
		for (int v : adj[u]) {
			if (!seen[v]) {
				seen[v] = true;
				++count;
				q.push(v);
			}
		}
	}
	return count == n_;
}

Topology complete_topology(int n) {
	std::vector<std::pair<int, int>> edges;
	for (int i = 0; i < n; ++i)
		for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
	return Topology(n, std::move(edges));
}

Topology random_connected_topology(int n, double edge_prob,
                                   std::uint64_t seed) {
	if (n < 2) throw ValidationError("random topology: need n >= 2");
	if (!(edge_prob > 0.0 && edge_prob <= 1.0))
		throw ValidationError("random topology: edge_prob must be in (0,1]");
	std::mt19937_64 rng(seed);
	std::uniform_real_distribution<double> unif(0.0, 1.0);
	std::vector<std::pair<int, int>> edges;
	for (int i = 0; i < n; ++i)
		for (int j = i + 1; j < n; ++j)
			if (unif(rng) < edge_prob) edges.emplace_back(i, j);

	Topology t(n, edges);
	if (t.connected()) return t;

	// Random spanning tree from the same stream: attach each node to a
	// uniformly chosen earlier node in a shuffled order.
	std::vector<int> order(n);
	for (int i = 0; i < n; ++i) order[i] = i;
	std::shuffle(order.begin(), order.end(), rng);
	for (int idx = 1; idx < n; ++idx) {
		std::uniform_int_distribution<int> pick(0, idx - 1);
		edges.emplace_back(order[pick(rng)], order[idx]);
	}
	return Topology(n, std::move(edges));
}

} // namespace aggne
