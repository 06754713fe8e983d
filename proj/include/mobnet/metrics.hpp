#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mobnet/errors.hpp"
#include "mobnet/network.hpp"
#include "mobnet/ratio.hpp"

namespace mobnet {

enum class Direction { In, Out, All };
enum class StemSplitPolicy { Binary, FullField };

// Degree pairing used by the assortativity correlation: which degree is read
// off the source and which off the target of each arc.
enum class DegreePairing { OutIn, OutOut, InIn, InOut };

namespace detail {

// Indexed binary adjacency over the sorted node list; all metrics run on this.
struct BinaryView {
  std::size_t n = 0;
  std::vector<std::string> code;
  std::vector<std::vector<int>> out;  // sorted successor lists
  std::vector<std::vector<int>> in;   // sorted predecessor lists
  std::vector<std::int64_t> outdeg, indeg;
  std::set<std::pair<int, int>> arc_set;

  explicit BinaryView(const Network& net) {
    code = net.nodes();
    n = code.size();
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < n; ++i) index[code[i]] = static_cast<int>(i);
    out.resize(n);
    in.resize(n);
    outdeg.assign(n, 0);
    indeg.assign(n, 0);
    for (const auto& [src, dst] : net.arcs()) {
      const int s = index.at(src), d = index.at(dst);
      out[s].push_back(d);
      in[d].push_back(s);
      ++outdeg[s];
      ++indeg[d];
      arc_set.emplace(s, d);
    }
    for (auto& v : out) std::sort(v.begin(), v.end());
    for (auto& v : in) std::sort(v.begin(), v.end());
  }

  std::int64_t degree(int node, Direction dir) const {
    switch (dir) {
      case Direction::In: return indeg[node];
      case Direction::Out: return outdeg[node];
      default: return indeg[node] + outdeg[node];
    }
  }

  // BFS distances from `start`, following arcs forward (Out), backward (In)
  // or in either direction (All). Unreachable nodes stay at -1.
  std::vector<int> distances(int start, Direction dir) const {
    std::vector<int> dist(n, -1);
    dist[start] = 0;
    std::deque<int> queue{start};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      auto visit = [&](int v) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      };
      if (dir == Direction::Out || dir == Direction::All)
        for (const int v : out[u]) visit(v);
      if (dir == Direction::In || dir == Direction::All)
        for (const int v : in[u]) visit(v);
    }
    return dist;
  }
};

}  // namespace detail

// |L| / (n(n-1)) on the binary directed graph over the full universe,
// isolates included.
inline Ratio density(const Network& net) {
  const auto n = static_cast<std::int64_t>(net.nodes().size());
  if (n < 2) throw DataError("density requires at least 2 nodes");
  return Ratio(net.arc_count(), n * (n - 1));
}

// Freeman centralization of binary degree: sum of (max - degree) over all
// nodes, normalized by its theoretical maximum, which a directed star
// attains: (n-1)^2 for in- or out-degree, 2(n-1)(n-2) for total degree.
inline Ratio degree_centralization(const Network& net, Direction dir) {
  const detail::BinaryView view(net);
  const auto n = static_cast<std::int64_t>(view.n);
  if (n < 3) throw DataError("degree centralization requires at least 3 nodes");
  std::int64_t max_deg = 0;
  for (std::size_t i = 0; i < view.n; ++i)
    max_deg = std::max(max_deg, view.degree(static_cast<int>(i), dir));
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < view.n; ++i)
    sum += max_deg - view.degree(static_cast<int>(i), dir);
  const std::int64_t denom = dir == Direction::All ? 2 * (n - 1) * (n - 2) : (n - 1) * (n - 1);
  return Ratio(sum, denom);
}

// Centralization of harmonic closeness. Node closeness is the sum of
// reciprocal directed distances (unreachable contributes 0) divided by n-1,
// which is total on disconnected graphs; Direction::All measures distances on
// the symmetrized graph. The Freeman normalizer is n-1: a directed star puts
// the hub at closeness 1 and everyone else at 0, so the sum of differences
// can reach but not exceed n-1.
inline double closeness_centralization(const Network& net, Direction dir) {
  const detail::BinaryView view(net);
  const auto n = static_cast<std::int64_t>(view.n);
  if (n < 3) throw DataError("closeness centralization requires at least 3 nodes");
  std::vector<double> closeness(view.n, 0.0);
  for (std::size_t i = 0; i < view.n; ++i) {
    const auto dist = view.distances(static_cast<int>(i), dir);
    double sum = 0.0;
    for (std::size_t j = 0; j < view.n; ++j) {
      if (j != i && dist[j] > 0) sum += 1.0 / dist[j];
    }
    closeness[i] = sum / static_cast<double>(n - 1);
  }
  const double c_max = *std::max_element(closeness.begin(), closeness.end());
  double total = 0.0;
  for (const double c : closeness) total += c_max - c;
  return total / static_cast<double>(n - 1);
}

// Pearson correlation of endpoint degrees across arcs; the default pairing is
// (source out-degree, target in-degree). Returns nullopt when either marginal
// is constant — a correlation is not defined there.
inline std::optional<double> assortativity(const Network& net,
                                           DegreePairing pairing = DegreePairing::OutIn) {
  const detail::BinaryView view(net);
  const auto arcs = static_cast<std::int64_t>(view.arc_set.size());
  if (arcs < 2) throw DataError("assortativity requires at least 2 arcs");

  const Direction src_dir =
      (pairing == DegreePairing::OutIn || pairing == DegreePairing::OutOut) ? Direction::Out
                                                                            : Direction::In;
  const Direction dst_dir =
      (pairing == DegreePairing::OutIn || pairing == DegreePairing::InIn) ? Direction::In
                                                                          : Direction::Out;

  // Integer moment sums make the zero-variance test exact.
  __int128 sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (const auto& [s, d] : view.arc_set) {
    const std::int64_t x = view.degree(s, src_dir);
    const std::int64_t y = view.degree(d, dst_dir);
    sx += x;
    sy += y;
    sxx += static_cast<__int128>(x) * x;
    syy += static_cast<__int128>(y) * y;
    sxy += static_cast<__int128>(x) * y;
  }
  const __int128 var_x = static_cast<__int128>(arcs) * sxx - sx * sx;
  const __int128 var_y = static_cast<__int128>(arcs) * syy - sy * sy;
  if (var_x == 0 || var_y == 0) return std::nullopt;
  const __int128 cov = static_cast<__int128>(arcs) * sxy - sx * sy;
  return static_cast<double>(cov) /
         std::sqrt(static_cast<double>(var_x) * static_cast<double>(var_y));
}

// Fraction of arcs whose reverse arc also exists.
inline Ratio reciprocity(const Network& net) {
  const detail::BinaryView view(net);
  const auto arcs = static_cast<std::int64_t>(view.arc_set.size());
  if (arcs == 0) throw DataError("reciprocity requires at least 1 arc");
  std::int64_t mutual = 0;
  for (const auto& [s, d] : view.arc_set) {
    if (view.arc_set.count({d, s})) ++mutual;
  }
  return Ratio(mutual, arcs);
}

struct RankingEntry {
  std::string institution;
  std::int64_t degree = 0;
  Direction direction = Direction::Out;
};

// k highest-degree active nodes on the binary graph, ties broken by code.
// Fewer than k active nodes yields a shorter list.
inline std::vector<RankingEntry> top_k(const Network& net, Direction dir, std::size_t k) {
  if (k < 1) throw std::invalid_argument("top_k: k must be at least 1");
  if (dir == Direction::All) throw std::invalid_argument("top_k: direction must be In or Out");
  const detail::BinaryView view(net);
  std::vector<RankingEntry> entries;
  for (std::size_t i = 0; i < view.n; ++i) {
    const std::int64_t deg = view.degree(static_cast<int>(i), dir);
    if (deg > 0) entries.push_back({view.code[i], deg, dir});
  }
  std::sort(entries.begin(), entries.end(), [](const RankingEntry& a, const RankingEntry& b) {
    if (a.degree != b.degree) return a.degree > b.degree;
    return a.institution < b.institution;
  });
  if (entries.size() > k) entries.resize(k);
  return entries;
}

// Hub and authority scores, aligned with Network::nodes(). When the
// iteration cap is reached the last iterate is returned with converged=false
// rather than raising.
struct HitsScores {
  std::vector<double> hub;
  std::vector<double> authority;
  bool converged = false;
  int iterations = 0;
};

// Power iteration on the binary adjacency: authority <- A^T hub,
// hub <- A authority, each step L2-normalized, starting from all-ones.
// Converged when both vectors move by less than `tolerance` in max-norm.
// Isolates have no incident arcs and stay at 0 after the first step.
inline HitsScores hits(const Network& net, double tolerance = 1e-10, int max_iterations = 1000) {
  const detail::BinaryView view(net);
  if (view.arc_set.empty()) throw DataError("hits requires at least 1 arc");
  const std::size_t n = view.n;

  std::vector<double> hub(n, 1.0), authority(n, 1.0);
  auto l2_normalize = [](std::vector<double>& v) {
    double norm = 0.0;
    for (const double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (double& x : v) x /= norm;
    }
  };

  HitsScores result;
  for (int iter = 1; iter <= max_iterations; ++iter) {
    std::vector<double> next_auth(n, 0.0), next_hub(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (const int u : view.in[v]) next_auth[v] += hub[u];
    }
    l2_normalize(next_auth);
    for (std::size_t u = 0; u < n; ++u) {
      for (const int v : view.out[u]) next_hub[u] += next_auth[v];
    }
    l2_normalize(next_hub);

    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      delta = std::max(delta, std::abs(next_auth[i] - authority[i]));
      delta = std::max(delta, std::abs(next_hub[i] - hub[i]));
    }
    authority = std::move(next_auth);
    hub = std::move(next_hub);
    result.iterations = iter;
    if (delta < tolerance) {
      result.converged = true;
      break;
    }
  }
  result.hub = std::move(hub);
  result.authority = std::move(authority);
  return result;
}

struct StrengthCounts {
  std::int64_t total = 0;
  std::int64_t stem = 0;
  std::int64_t non_stem = 0;
};

inline StrengthCounts strength(const Network& net, const CohortSlice& slice = {}) {
  StrengthCounts counts;
  for (const auto& [key, count] : net.weights()) {
    if (!slice.matches(key)) continue;
    counts.total += count;
    (key.stem == StemClass::Stem ? counts.stem : counts.non_stem) += count;
  }
  return counts;
}

// Distinct ordered (sender, receiver) institution pairs with positive flow.
inline std::int64_t partnerships(const Network& net) { return net.arc_count(); }

// Partnerships split by field class: under the Binary policy a pair counts
// once per STEM class it exchanges students in, under FullField once per
// distinct field label.
inline std::int64_t active_connections(const Network& net,
                                       StemSplitPolicy policy = StemSplitPolicy::Binary) {
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (const auto& [key, count] : net.weights()) {
    const std::string cls = policy == StemSplitPolicy::Binary
                                ? std::string(key.stem == StemClass::Stem ? "S" : "N")
                                : key.field;
    seen.emplace(key.src, key.dst, cls);
  }
  return static_cast<std::int64_t>(seen.size());
}

inline std::int64_t active_count(const Network& net) {
  std::set<std::string> active;
  for (const auto& [src, dst] : net.arcs()) {
    active.insert(src);
    active.insert(dst);
  }
  return static_cast<std::int64_t>(active.size());
}

inline std::int64_t isolate_count(const Network& net) {
  return static_cast<std::int64_t>(net.nodes().size()) - active_count(net);
}

}  // namespace mobnet
