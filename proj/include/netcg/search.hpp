#pragma once

// Backward greedy structure search over network ties, scored by PBIC.
// Variants: single-edge deletion (optionally restricted to one tier's
// conditional MRF), per-unit-pair bundle deletion with known edge types,
// per-prototype homolog deletion with known network, their chaining, and an
// optional forward-backward pass for the pairwise family.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netcg/dataset.hpp"
#include "netcg/graph.hpp"
#include "netcg/model.hpp"
#include "netcg/parallel.hpp"

namespace netcg {

// Accept a move only if it clears this much; guards float noise.
inline constexpr double kScoreImprovementEps = 1e-9;

struct TraceRow {
  int iteration = 0;
  std::string deleted_item;  // empty for the initial row
  double pbic = 0.0;
};

struct SearchResult {
  TieredChainGraph graph;
  std::vector<Edge> cross_edges;          // learned E*_N
  std::vector<UnitPair> network;          // learned N*
  std::vector<EdgePrototype> protos;      // learned E*_proto (homogeneous runs)
  std::vector<TraceRow> trace;
  double final_pbic = 0.0;
};

struct SearchOptions {
  Sharing sharing = Sharing::none;
  int threads = 1;
};

namespace detail {

inline void finish_result(SearchResult& r) {
  r.cross_edges = r.graph.cross_edges();
  r.network = r.graph.network();
  r.protos = prototypes(r.graph);
  r.final_pbic = r.trace.empty() ? 0.0 : r.trace.back().pbic;
}

}  // namespace detail

// Algorithm core: repeatedly delete the cross edge whose removal improves
// PBIC most (ties broken toward the canonically least edge). An optional
// tier restriction turns this into the search over one conditional MRF.
inline SearchResult greedy_network_search(const TieredChainGraph& init, const BlockDataset& data,
                                          const SearchOptions& opt = {},
                                          std::optional<Tier> restrict_tier = std::nullopt,
                                          Scorer* shared_scorer = nullptr,
                                          std::vector<TraceRow>* trace_out = nullptr,
                                          int iteration_base = 0) {
  data.require_match(init);
  Scorer local_scorer(data, opt.sharing);
  Scorer& scorer = shared_scorer ? *shared_scorer : local_scorer;

  SearchResult result;
  result.graph = init;
  std::vector<TraceRow>& trace = trace_out ? *trace_out : result.trace;
  int iter = iteration_base;
  if (trace.empty()) trace.push_back({iter, "", scorer.pbic(result.graph)});

  for (;;) {
    std::vector<Edge> candidates;
    for (const auto& e : result.graph.cross_edges())
      if (!restrict_tier || owning_tier(e) == *restrict_tier) candidates.push_back(e);
    if (candidates.empty()) break;

    std::vector<double> diffs(candidates.size());
    parallel_for(candidates.size(), opt.threads, [&](size_t i) {
      diffs[i] = scorer.local_score_diff(result.graph, candidates[i]);
    });
    size_t best = 0;
    for (size_t i = 1; i < diffs.size(); ++i)
      if (diffs[i] > diffs[best]) best = i;  // candidates are canonically sorted
    if (diffs[best] <= kScoreImprovementEps) break;

    result.graph = result.graph.without_cross_edge(candidates[best]);
    ++iter;
    trace.push_back({iter, candidates[best].name(), scorer.pbic(result.graph)});
  }
  detail::finish_result(result);
  return result;
}

// Heterogeneous search: solve the three tier subproblems and return the union of the
// learned tie sets. The subproblems share no deletable edges or score
// components, so they are run as tier-restricted passes over one evolving
// graph; the concatenated trace carries the full-graph PBIC.
inline SearchResult heterogeneous(const BlockDataset& data, int m, int p,
                                  const SearchOptions& opt = {}) {
  SearchOptions o = opt;  // sharing none by default; the override flag is honored
  Scorer scorer(data, o.sharing);
  SearchResult result;
  result.graph = complete_tiered_graph(m, p);
  result.trace.push_back({0, "", scorer.pbic(result.graph)});
  for (Tier t : {Tier::L, Tier::A, Tier::Y}) {
    auto r = greedy_network_search(result.graph, data, o, t, &scorer, &result.trace,
                                   int(result.trace.size()) - 1);
    result.graph = r.graph;
  }
  detail::finish_result(result);
  return result;
}

// Known edge types, unknown adjacencies: learn which unit pairs are adjacent. Moves
// delete entire pair bundles E_ij.
inline SearchResult homogeneous_known_proto(const BlockDataset& data,
                                            const std::vector<EdgePrototype>& protos, int m, int p,
                                            const SearchOptions& opt = {}) {
  SearchOptions o = opt;
  o.sharing = Sharing::homogeneous;
  SearchResult result;
  if (protos.empty()) {
    result.graph = empty_network_graph(m, p);
    result.trace.push_back({0, "", pbic(data, result.graph, o.sharing)});
    detail::finish_result(result);
    return result;
  }
  std::vector<UnitPair> net;
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j) net.push_back({i, j});
  result.graph = make_homogeneous_graph(m, p, net, protos);
  data.require_match(result.graph);

  Scorer scorer(data, o.sharing);
  double current = scorer.pbic(result.graph);
  result.trace.push_back({0, "", current});
  int iter = 0;
  for (;;) {
    auto pairs = result.graph.network();
    if (pairs.empty()) break;
    std::vector<double> scores(pairs.size());
    std::vector<TieredChainGraph> cands(pairs.size());
    parallel_for(pairs.size(), o.threads, [&](size_t i) {
      cands[i] = result.graph.without_unit_pair(pairs[i].i, pairs[i].j);
      scores[i] = scorer.pbic(cands[i]);
    });
    size_t best = 0;
    for (size_t i = 1; i < scores.size(); ++i)
      if (scores[i] > scores[best]) best = i;
    if (scores[best] - current <= kScoreImprovementEps) break;
    current = scores[best];
    result.graph = std::move(cands[best]);
    ++iter;
    result.trace.push_back({iter, "E_" + std::to_string(pairs[best].i) + "," +
                                      std::to_string(pairs[best].j),
                            current});
  }
  detail::finish_result(result);
  return result;
}

// Known network, unknown edge types: learn which types connect adjacent units.
// Moves delete all homologs of one prototype.
inline SearchResult homogeneous_known_network(const BlockDataset& data,
                                              const std::vector<UnitPair>& network, int m, int p,
                                              const SearchOptions& opt = {}) {
  SearchOptions o = opt;
  o.sharing = Sharing::homogeneous;
  SearchResult result;
  if (network.empty()) {
    result.graph = empty_network_graph(m, p);
    result.trace.push_back({0, "", pbic(data, result.graph, o.sharing)});
    detail::finish_result(result);
    return result;
  }
  result.graph = make_homogeneous_graph(m, p, network, all_legal_prototypes(p));
  data.require_match(result.graph);

  Scorer scorer(data, o.sharing);
  double current = scorer.pbic(result.graph);
  result.trace.push_back({0, "", current});
  int iter = 0;
  for (;;) {
    auto protos = prototypes(result.graph);
    if (protos.empty()) break;
    std::vector<double> scores(protos.size());
    std::vector<TieredChainGraph> cands(protos.size());
    parallel_for(protos.size(), o.threads, [&](size_t i) {
      std::vector<Edge> homolog_set;
      for (const auto& e : result.graph.cross_edges())
        if (prototype_of(e) == protos[i]) homolog_set.push_back(e);
      cands[i] = result.graph.without_cross_edges(homolog_set);
      scores[i] = scorer.pbic(cands[i]);
    });
    size_t best = 0;
    for (size_t i = 1; i < scores.size(); ++i)
      if (scores[i] > scores[best]) best = i;
    if (scores[best] - current <= kScoreImprovementEps) break;
    current = scores[best];
    result.graph = std::move(cands[best]);
    ++iter;
    result.trace.push_back({iter, "h(" + protos[best].name() + ")", current});
  }
  detail::finish_result(result);
  return result;
}

// No background knowledge: learn the network assuming all legal edge types,
// then the types on the learned network. reverse_order runs types-first.
inline SearchResult homogeneous(const BlockDataset& data, int m, int p,
                                const SearchOptions& opt = {}, bool reverse_order = false) {
  SearchResult first, second;
  if (!reverse_order) {
    first = homogeneous_known_proto(data, all_legal_prototypes(p), m, p, opt);
    second = homogeneous_known_network(data, first.network, m, p, opt);
  } else {
    std::vector<UnitPair> net;
    for (int i = 1; i <= m; ++i)
      for (int j = i + 1; j <= m; ++j) net.push_back({i, j});
    first = homogeneous_known_network(data, net, m, p, opt);
    second = homogeneous_known_proto(data, first.protos, m, p, opt);
  }
  SearchResult result;
  result.graph = second.graph;
  result.trace = first.trace;
  for (size_t i = 1; i < second.trace.size(); ++i) {
    TraceRow row = second.trace[i];
    row.iteration = int(result.trace.size());
    result.trace.push_back(row);
  }
  detail::finish_result(result);
  return result;
}

// Optional variant: a forward phase adds the best-improving cross edge
// starting from the empty tie set, then the usual backward pass.
inline SearchResult forward_backward(const BlockDataset& data, int m, int p,
                                     const SearchOptions& opt = {}) {
  SearchOptions o = opt;
  Scorer scorer(data, o.sharing);
  TieredChainGraph g = empty_network_graph(m, p);
  data.require_match(g);
  std::vector<TraceRow> trace;
  trace.push_back({0, "", scorer.pbic(g)});
  int iter = 0;

  const TieredChainGraph complete = complete_tiered_graph(m, p);
  const std::vector<Edge>& universe = complete.cross_edges();

  for (;;) {
    std::vector<Edge> candidates;
    for (const auto& e : universe)
      if (!g.has_cross_edge(e)) candidates.push_back(e);
    if (candidates.empty()) break;
    std::vector<double> gains(candidates.size());
    parallel_for(candidates.size(), o.threads, [&](size_t i) {
      TieredChainGraph g2 = g.with_cross_edge(candidates[i]);
      // gain of adding e = -(score change of deleting e from g+e)
      gains[i] = -scorer.local_score_diff(g2, candidates[i]);
    });
    size_t best = 0;
    for (size_t i = 1; i < gains.size(); ++i)
      if (gains[i] > gains[best]) best = i;
    if (gains[best] <= kScoreImprovementEps) break;
    g = g.with_cross_edge(candidates[best]);
    ++iter;
    trace.push_back({iter, "+" + candidates[best].name(), scorer.pbic(g)});
  }

  auto result = greedy_network_search(g, data, o, std::nullopt, &scorer, &trace, iter);
  result.trace = std::move(trace);
  detail::finish_result(result);
  return result;
}

enum class SearchMode { heterogeneous, homo_known_proto, homo_known_network, homogeneous };

inline SearchMode search_mode_from_name(const std::string& s) {
  if (s == "hetero" || s == "heterogeneous") return SearchMode::heterogeneous;
  if (s == "homo" || s == "homogeneous") return SearchMode::homogeneous;
  if (s == "homo-known-proto") return SearchMode::homo_known_proto;
  if (s == "homo-known-net" || s == "homo-known-network") return SearchMode::homo_known_network;
  throw InputError("unknown mode '" + s + "'");
}

inline long candidate_move_count(SearchMode mode, int m, int prototype_count) {
  long pairs = long(m) * (m - 1) / 2;
  switch (mode) {
    case SearchMode::heterogeneous: return long(prototype_count) * pairs;
    case SearchMode::homo_known_proto: return pairs;
    case SearchMode::homo_known_network: return prototype_count;
    default: return pairs + prototype_count;
  }
}

}  // namespace netcg
