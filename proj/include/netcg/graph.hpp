#pragma once

// Tiered chain graphs over blocks of units. Each unit carries covariates
// L_1..L_p, a treatment A and an outcome Y. Within-tier edges are
// undirected, cross-tier edges are directed and follow the L -> A -> Y
// ordering. Unit-level structure is a shared template; cross-unit edges
// (network ties) are the part structure learning operates on.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace netcg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input (files, flags); CLI maps this to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

enum class Tier : int { L = 0, A = 1, Y = 2 };

inline const char* tier_name(Tier t) {
  switch (t) {
    case Tier::L: return "L";
    case Tier::A: return "A";
    default: return "Y";
  }
}

// Template-level variable: a tier plus covariate index (1..p for L, 0 else).
struct TemplateVar {
  Tier tier = Tier::L;
  int cov = 0;

  friend auto operator<=>(const TemplateVar&, const TemplateVar&) = default;

  std::string name() const {
    std::string s = tier_name(tier);
    if (tier == Tier::L) s += std::to_string(cov);
    return s;
  }
};

inline TemplateVar template_var_from_name(const std::string& s) {
  if (s.empty()) throw InputError("empty variable name");
  if (s == "A") return {Tier::A, 0};
  if (s == "Y") return {Tier::Y, 0};
  if (s[0] == 'L') {
    int cov = 0;
    try {
      cov = std::stoi(s.substr(1));
    } catch (const std::exception&) {
      throw InputError("bad variable name '" + s + "'");
    }
    if (cov < 1) throw InputError("covariate index must be >= 1 in '" + s + "'");
    return {Tier::L, cov};
  }
  throw InputError("bad variable name '" + s + "'");
}

struct VariableId {
  Tier tier = Tier::L;
  int unit = 1;  // 1..m
  int cov = 0;   // 1..p for L, 0 otherwise

  friend auto operator<=>(const VariableId&, const VariableId&) = default;

  TemplateVar template_var() const { return {tier, cov}; }
  std::string name() const { return template_var().name() + "_" + std::to_string(unit); }
};

inline VariableId make_var(Tier t, int unit, int cov = 0) { return {t, unit, cov}; }

enum class EdgeKind : int { directed = 0, undirected = 1 };

struct Edge {
  VariableId tail;
  VariableId head;
  EdgeKind kind = EdgeKind::directed;

  friend auto operator<=>(const Edge&, const Edge&) = default;

  bool cross() const { return tail.unit != head.unit; }

  Edge canonical() const {
    if (kind == EdgeKind::undirected && head < tail) return {head, tail, kind};
    return *this;
  }

  std::string name() const {
    return tail.name() + (kind == EdgeKind::directed ? "->" : "--") + head.name();
  }
};

inline Edge make_edge(VariableId tail, VariableId head, EdgeKind kind) {
  return Edge{tail, head, kind}.canonical();
}

// Cross-unit edge type, abstracted over the unit pair.
struct EdgePrototype {
  TemplateVar tail;
  TemplateVar head;
  EdgeKind kind = EdgeKind::directed;

  friend auto operator<=>(const EdgePrototype&, const EdgePrototype&) = default;

  EdgePrototype canonical() const {
    if (kind == EdgeKind::undirected && head < tail) return {head, tail, kind};
    return *this;
  }

  std::string name() const {
    return tail.name() + (kind == EdgeKind::directed ? "->" : "--") + head.name();
  }
};

inline EdgePrototype prototype_of(const Edge& e) {
  return EdgePrototype{e.tail.template_var(), e.head.template_var(), e.kind}.canonical();
}

// The tier that "owns" an edge for scoring: the head's tier for directed
// edges, the common tier for undirected ones.
inline Tier owning_tier(const Edge& e) { return e.head.tier; }
inline Tier owning_tier(const EdgePrototype& e) { return e.head.tier; }

// Instantiates a prototype on an (unordered) adjacent unit pair. Directed
// prototypes and undirected prototypes with distinct endpoints produce both
// unit orderings, matching the symmetry of unordered network ties.
inline std::vector<Edge> instantiate_prototype(const EdgePrototype& proto, int i, int j) {
  VariableId a{proto.tail.tier, i, proto.tail.cov};
  VariableId b{proto.head.tier, j, proto.head.cov};
  VariableId a2{proto.tail.tier, j, proto.tail.cov};
  VariableId b2{proto.head.tier, i, proto.head.cov};
  std::vector<Edge> out;
  out.push_back(make_edge(a, b, proto.kind));
  Edge rev = make_edge(a2, b2, proto.kind);
  if (rev != out[0]) out.push_back(rev);
  return out;
}

struct UnitPair {
  int i = 0, j = 0;  // i < j
  friend auto operator<=>(const UnitPair&, const UnitPair&) = default;
};

inline UnitPair make_pair_sorted(int i, int j) { return i < j ? UnitPair{i, j} : UnitPair{j, i}; }

using UnitTemplateEdge = std::pair<TemplateVar, TemplateVar>;

inline std::vector<UnitTemplateEdge> default_unit_template(int p) {
  std::vector<UnitTemplateEdge> t;
  for (int k = 1; k <= p; ++k) {
    t.push_back({{Tier::L, k}, {Tier::A, 0}});
    t.push_back({{Tier::L, k}, {Tier::Y, 0}});
  }
  t.push_back({{Tier::A, 0}, {Tier::Y, 0}});
  return t;
}

class TieredChainGraph {
 public:
  TieredChainGraph() = default;

  TieredChainGraph(int m, int p, std::vector<UnitTemplateEdge> unit_template,
                   std::vector<Edge> cross_edges)
      : m_(m), p_(p), unit_template_(std::move(unit_template)) {
    if (m_ < 1) throw InputError("unit count m must be >= 1");
    if (p_ < 1) throw InputError("covariate count p must be >= 1");
    for (const auto& [a, b] : unit_template_) {
      check_template_var(a);
      check_template_var(b);
    }
    std::sort(unit_template_.begin(), unit_template_.end());
    unit_template_.erase(std::unique(unit_template_.begin(), unit_template_.end()),
                         unit_template_.end());
    cross_edges_.reserve(cross_edges.size());
    for (const auto& e : cross_edges) {
      check_var(e.tail);
      check_var(e.head);
      if (!e.cross()) throw InputError("cross edge list contains unit-level edge " + e.name());
      cross_edges_.push_back(e.canonical());
    }
    std::sort(cross_edges_.begin(), cross_edges_.end());
    cross_edges_.erase(std::unique(cross_edges_.begin(), cross_edges_.end()),
                       cross_edges_.end());
    build_index();
  }

  int m() const { return m_; }
  int p() const { return p_; }
  int var_count() const { return m_ * (p_ + 2); }

  const std::vector<UnitTemplateEdge>& unit_template() const { return unit_template_; }
  const std::vector<Edge>& cross_edges() const { return cross_edges_; }

  // Canonical (tier, unit, cov) order; var_index is its inverse.
  std::vector<VariableId> all_variables() const {
    std::vector<VariableId> vs;
    vs.reserve(var_count());
    for (int u = 1; u <= m_; ++u)
      for (int k = 1; k <= p_; ++k) vs.push_back({Tier::L, u, k});
    for (int u = 1; u <= m_; ++u) vs.push_back({Tier::A, u, 0});
    for (int u = 1; u <= m_; ++u) vs.push_back({Tier::Y, u, 0});
    std::sort(vs.begin(), vs.end());
    return vs;
  }

  int var_index(const VariableId& v) const {
    check_var(v);
    switch (v.tier) {
      case Tier::L: return (v.unit - 1) * p_ + (v.cov - 1);
      case Tier::A: return m_ * p_ + (v.unit - 1);
      default: return m_ * p_ + m_ + (v.unit - 1);
    }
  }

  bool contains(const VariableId& v) const {
    if (v.unit < 1 || v.unit > m_) return false;
    if (v.tier == Tier::L) return v.cov >= 1 && v.cov <= p_;
    return v.cov == 0;
  }

  // Unit-level edges materialized for every unit.
  std::vector<Edge> unit_edge_instances() const {
    std::vector<Edge> out;
    out.reserve(unit_template_.size() * m_);
    for (int u = 1; u <= m_; ++u)
      for (const auto& [a, b] : unit_template_)
        out.push_back(make_edge({a.tier, u, a.cov}, {b.tier, u, b.cov}, template_kind(a, b)));
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<Edge> all_edges() const {
    std::vector<Edge> out = unit_edge_instances();
    out.insert(out.end(), cross_edges_.begin(), cross_edges_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  bool has_cross_edge(const Edge& e) const {
    Edge c = e.canonical();
    return std::binary_search(cross_edges_.begin(), cross_edges_.end(), c);
  }

  std::vector<UnitPair> network() const {
    std::set<UnitPair> pairs;
    for (const auto& e : cross_edges_) pairs.insert(make_pair_sorted(e.tail.unit, e.head.unit));
    return {pairs.begin(), pairs.end()};
  }

  std::vector<Edge> edges_between(int i, int j) const {
    std::vector<Edge> out;
    for (const auto& e : cross_edges_) {
      UnitPair pq = make_pair_sorted(e.tail.unit, e.head.unit);
      if (pq == make_pair_sorted(i, j)) out.push_back(e);
    }
    return out;
  }

  TieredChainGraph with_cross_edge(const Edge& e) const {
    auto ce = cross_edges_;
    ce.push_back(e.canonical());
    return TieredChainGraph(m_, p_, unit_template_, std::move(ce));
  }

  TieredChainGraph without_cross_edge(const Edge& e) const {
    if (!has_cross_edge(e)) throw Error("edge not present: " + e.name());
    Edge c = e.canonical();
    std::vector<Edge> ce;
    ce.reserve(cross_edges_.size() - 1);
    for (const auto& x : cross_edges_)
      if (x != c) ce.push_back(x);
    return TieredChainGraph(m_, p_, unit_template_, std::move(ce));
  }

  TieredChainGraph without_cross_edges(const std::vector<Edge>& edges) const {
    std::set<Edge> drop;
    for (const auto& e : edges) drop.insert(e.canonical());
    std::vector<Edge> ce;
    for (const auto& x : cross_edges_)
      if (!drop.count(x)) ce.push_back(x);
    return TieredChainGraph(m_, p_, unit_template_, std::move(ce));
  }

  TieredChainGraph without_unit_pair(int i, int j) const {
    UnitPair pq = make_pair_sorted(i, j);
    std::vector<Edge> ce;
    for (const auto& x : cross_edges_)
      if (make_pair_sorted(x.tail.unit, x.head.unit) != pq) ce.push_back(x);
    return TieredChainGraph(m_, p_, unit_template_, std::move(ce));
  }

  // Boundary queries (valid-graph semantics: undirected partners are
  // neighbors, directed in-edges give parents).
  std::vector<VariableId> parents(const VariableId& v) const { return index_at(v).pa; }
  std::vector<VariableId> neighbors(const VariableId& v) const { return index_at(v).nb; }

  std::vector<VariableId> boundary(const VariableId& v) const {
    const auto& rec = index_at(v);
    std::vector<VariableId> bd = rec.pa;
    bd.insert(bd.end(), rec.nb.begin(), rec.nb.end());
    std::sort(bd.begin(), bd.end());
    bd.erase(std::unique(bd.begin(), bd.end()), bd.end());
    return bd;
  }

 private:
  struct AdjRec {
    std::vector<VariableId> pa, nb;
  };

  static EdgeKind template_kind(const TemplateVar& a, const TemplateVar& b) {
    return a.tier == b.tier ? EdgeKind::undirected : EdgeKind::directed;
  }

  void check_template_var(const TemplateVar& v) const {
    if (v.tier == Tier::L) {
      if (v.cov < 1 || v.cov > p_) throw InputError("covariate index out of range in template");
    } else if (v.cov != 0) {
      throw InputError("covariate index only valid for tier L");
    }
  }

  void check_var(const VariableId& v) const {
    if (v.unit < 1 || v.unit > m_)
      throw InputError("unit index out of range for " + v.name());
    check_template_var(v.template_var());
  }

  const AdjRec& index_at(const VariableId& v) const {
    auto it = adj_.find(v);
    if (it == adj_.end()) throw Error("unknown variable " + v.name());
    return it->second;
  }

  void build_index() {
    adj_.clear();
    for (const auto& v : all_variables()) adj_[v];
    auto add = [&](const Edge& e) {
      if (e.kind == EdgeKind::undirected) {
        adj_[e.tail].nb.push_back(e.head);
        adj_[e.head].nb.push_back(e.tail);
      } else {
        adj_[e.head].pa.push_back(e.tail);
      }
    };
    for (const auto& e : unit_edge_instances()) add(e);
    for (const auto& e : cross_edges_) add(e);
    for (auto& [v, rec] : adj_) {
      std::sort(rec.pa.begin(), rec.pa.end());
      rec.pa.erase(std::unique(rec.pa.begin(), rec.pa.end()), rec.pa.end());
      std::sort(rec.nb.begin(), rec.nb.end());
      rec.nb.erase(std::unique(rec.nb.begin(), rec.nb.end()), rec.nb.end());
    }
  }

  int m_ = 1;
  int p_ = 1;
  std::vector<UnitTemplateEdge> unit_template_;
  std::vector<Edge> cross_edges_;
  std::map<VariableId, AdjRec> adj_;
};

// ---------------------------------------------------------------------------
// Validation

struct Validity {
  bool ok = true;
  std::vector<std::string> violations;
};

inline Validity validate_tiered_cg(const TieredChainGraph& g) {
  Validity v;
  auto fail = [&](const std::string& msg) {
    v.ok = false;
    v.violations.push_back(msg);
  };
  for (const auto& e : g.all_edges()) {
    if (e.kind == EdgeKind::undirected) {
      if (e.tail.tier != e.head.tier)
        fail("tier symmetry: cross-tier undirected edge " + e.name());
    } else {
      if (static_cast<int>(e.tail.tier) >= static_cast<int>(e.head.tier))
        fail("causal ordering: directed edge " + e.name() + " violates L->A->Y order");
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Blocks: maximal undirected-connected vertex sets.

inline std::vector<std::vector<VariableId>> blocks(const TieredChainGraph& g) {
  auto vars = g.all_variables();
  std::map<VariableId, int> comp;
  for (const auto& v : vars) comp[v] = -1;
  int next = 0;
  for (const auto& root : vars) {
    if (comp[root] != -1) continue;
    std::vector<VariableId> stack{root};
    comp[root] = next;
    while (!stack.empty()) {
      VariableId v = stack.back();
      stack.pop_back();
      for (const auto& u : g.neighbors(v)) {
        if (comp[u] == -1) {
          comp[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  std::vector<std::vector<VariableId>> out(next);
  for (const auto& v : vars) out[comp[v]].push_back(v);
  for (auto& b : out) std::sort(b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<VariableId> block_of(const TieredChainGraph& g, const VariableId& v) {
  for (auto& b : blocks(g))
    if (std::binary_search(b.begin(), b.end(), v)) return b;
  throw Error("unknown variable " + v.name());
}

inline std::vector<VariableId> parents_of_set(const TieredChainGraph& g,
                                              const std::vector<VariableId>& set) {
  std::set<VariableId> in(set.begin(), set.end()), pa;
  for (const auto& v : set)
    for (const auto& u : g.parents(v))
      if (!in.count(u)) pa.insert(u);
  return {pa.begin(), pa.end()};
}

// ---------------------------------------------------------------------------
// Undirected graphs (augmented block graphs) and maximal cliques.

class UndirectedGraph {
 public:
  explicit UndirectedGraph(std::vector<VariableId> vertices) : vertices_(std::move(vertices)) {
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
    adj_.assign(vertices_.size(), std::vector<bool>(vertices_.size(), false));
  }

  const std::vector<VariableId>& vertices() const { return vertices_; }
  int size() const { return static_cast<int>(vertices_.size()); }

  int index_of(const VariableId& v) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
    if (it == vertices_.end() || *it != v) throw Error("vertex not in graph: " + v.name());
    return static_cast<int>(it - vertices_.begin());
  }

  void add_edge(const VariableId& a, const VariableId& b) {
    if (a == b) return;
    int i = index_of(a), j = index_of(b);
    adj_[i][j] = adj_[j][i] = true;
  }

  bool adjacent(int i, int j) const { return adj_[i][j]; }

 private:
  std::vector<VariableId> vertices_;
  std::vector<std::vector<bool>> adj_;
};

inline UndirectedGraph augmented_block_graph(const TieredChainGraph& g,
                                             const std::vector<VariableId>& block) {
  auto bs = blocks(g);
  std::vector<VariableId> sorted_block = block;
  std::sort(sorted_block.begin(), sorted_block.end());
  if (std::find(bs.begin(), bs.end(), sorted_block) == bs.end())
    throw Error("vertex set is not a block of the graph");
  auto pa = parents_of_set(g, sorted_block);
  std::vector<VariableId> verts = sorted_block;
  verts.insert(verts.end(), pa.begin(), pa.end());
  UndirectedGraph ug(std::move(verts));
  for (const auto& v : sorted_block) {
    for (const auto& u : g.neighbors(v))
      ug.add_edge(u, v);
    for (const auto& u : g.parents(v)) ug.add_edge(u, v);
  }
  // moralization: parents of the block become pairwise adjacent
  for (size_t i = 0; i < pa.size(); ++i)
    for (size_t j = i + 1; j < pa.size(); ++j) ug.add_edge(pa[i], pa[j]);
  return ug;
}

namespace detail {

inline void bron_kerbosch(const UndirectedGraph& g, std::vector<int>& R, std::vector<int> P,
                          std::vector<int> X, std::vector<std::vector<int>>& out) {
  if (P.empty() && X.empty()) {
    out.push_back(R);
    return;
  }
  // pivot: vertex of P ∪ X with most candidates in P
  int pivot = -1, best = -1;
  for (int cand : P) {
    int d = 0;
    for (int u : P)
      if (g.adjacent(cand, u)) ++d;
    if (d > best) best = d, pivot = cand;
  }
  for (int cand : X) {
    int d = 0;
    for (int u : P)
      if (g.adjacent(cand, u)) ++d;
    if (d > best) best = d, pivot = cand;
  }
  std::vector<int> ext;
  for (int v : P)
    if (pivot < 0 || !g.adjacent(pivot, v)) ext.push_back(v);
  for (int v : ext) {
    std::vector<int> P2, X2;
    for (int u : P)
      if (g.adjacent(v, u)) P2.push_back(u);
    for (int u : X)
      if (g.adjacent(v, u)) X2.push_back(u);
    R.push_back(v);
    bron_kerbosch(g, R, std::move(P2), std::move(X2), out);
    R.pop_back();
    P.erase(std::find(P.begin(), P.end(), v));
    X.insert(std::lower_bound(X.begin(), X.end(), v), v);
  }
}

}  // namespace detail

inline std::vector<std::vector<VariableId>> maximal_cliques(const UndirectedGraph& g) {
  std::vector<int> all(g.size());
  for (int i = 0; i < g.size(); ++i) all[i] = i;
  std::vector<std::vector<int>> raw;
  std::vector<int> R;
  detail::bron_kerbosch(g, R, all, {}, raw);
  std::vector<std::vector<VariableId>> out;
  out.reserve(raw.size());
  for (auto& c : raw) {
    std::vector<VariableId> clique;
    clique.reserve(c.size());
    for (int i : c) clique.push_back(g.vertices()[i]);
    std::sort(clique.begin(), clique.end());
    out.push_back(std::move(clique));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Boundary record, homologs, prototypes.

struct AdjacencyRecord {
  std::vector<VariableId> pa, nb, bd, cl;
};

inline AdjacencyRecord adjacency(const TieredChainGraph& g, const VariableId& v) {
  if (!g.contains(v)) throw Error("unknown variable " + v.name());
  AdjacencyRecord rec;
  rec.pa = g.parents(v);
  rec.nb = g.neighbors(v);
  rec.bd = g.boundary(v);
  rec.cl = rec.bd;
  rec.cl.insert(std::lower_bound(rec.cl.begin(), rec.cl.end(), v), v);
  return rec;
}

inline std::vector<Edge> homologs(const TieredChainGraph& g, const Edge& e) {
  if (!e.cross()) throw Error("homologs are defined for cross-unit edges, got " + e.name());
  EdgePrototype proto = prototype_of(e);
  std::vector<Edge> out;
  for (const auto& x : g.cross_edges())
    if (prototype_of(x) == proto) out.push_back(x);
  return out;
}

inline std::vector<EdgePrototype> prototypes(const TieredChainGraph& g) {
  std::set<EdgePrototype> protos;
  for (const auto& e : g.cross_edges()) protos.insert(prototype_of(e));
  return {protos.begin(), protos.end()};
}

// All cross-edge types allowed by tier symmetry and causal ordering.
inline std::vector<EdgePrototype> all_legal_prototypes(int p) {
  std::vector<EdgePrototype> out;
  for (int k = 1; k <= p; ++k)
    for (int k2 = k; k2 <= p; ++k2)
      out.push_back({{Tier::L, k}, {Tier::L, k2}, EdgeKind::undirected});
  out.push_back({{Tier::A, 0}, {Tier::A, 0}, EdgeKind::undirected});
  out.push_back({{Tier::Y, 0}, {Tier::Y, 0}, EdgeKind::undirected});
  for (int k = 1; k <= p; ++k) {
    out.push_back({{Tier::L, k}, {Tier::A, 0}, EdgeKind::directed});
    out.push_back({{Tier::L, k}, {Tier::Y, 0}, EdgeKind::directed});
  }
  out.push_back({{Tier::A, 0}, {Tier::Y, 0}, EdgeKind::directed});
  std::sort(out.begin(), out.end());
  return out;
}

inline TieredChainGraph make_homogeneous_graph(int m, int p,
                                               const std::vector<UnitPair>& network,
                                               const std::vector<EdgePrototype>& protos) {
  std::vector<Edge> cross;
  for (const auto& pr : network)
    for (const auto& proto : protos)
      for (const auto& e : instantiate_prototype(proto, pr.i, pr.j)) cross.push_back(e);
  return TieredChainGraph(m, p, default_unit_template(p), std::move(cross));
}

inline TieredChainGraph complete_tiered_graph(int m, int p) {
  std::vector<UnitPair> net;
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j) net.push_back({i, j});
  return make_homogeneous_graph(m, p, net, all_legal_prototypes(p));
}

// Unit template only, no network ties.
inline TieredChainGraph empty_network_graph(int m, int p) {
  return TieredChainGraph(m, p, default_unit_template(p), {});
}

// True when every adjacent unit pair carries the same set of edge types.
inline bool is_homogeneous(const TieredChainGraph& g) {
  auto net = g.network();
  if (net.empty()) return true;
  auto type_set = [&](const UnitPair& pr) {
    std::set<EdgePrototype> s;
    for (const auto& e : g.edges_between(pr.i, pr.j)) s.insert(prototype_of(e));
    return s;
  };
  auto ref = type_set(net.front());
  for (const auto& pr : net) {
    if (type_set(pr) != ref) return false;
    // both orderings of each directed / asymmetric prototype must be present
    std::set<Edge> have;
    for (const auto& e : g.edges_between(pr.i, pr.j)) have.insert(e);
    for (const auto& proto : ref)
      for (const auto& e : instantiate_prototype(proto, pr.i, pr.j))
        if (!have.count(e)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Tier subproblems: the conditional MRF a tier induces given earlier tiers.

struct TierSubproblem {
  Tier tier = Tier::L;
  TieredChainGraph graph;            // earlier-tier structure dropped
  std::vector<VariableId> random_vertices;
  std::vector<VariableId> fixed_vertices;
  std::vector<Edge> deletable;       // cross edges owned by the tier
};

inline TierSubproblem tier_subproblem_graph(const TieredChainGraph& g, Tier tier) {
  TierSubproblem sub;
  sub.tier = tier;
  // keep unit-template edges into or within the tier
  std::vector<UnitTemplateEdge> tmpl;
  for (const auto& [a, b] : g.unit_template()) {
    Tier own = (a.tier == b.tier) ? a.tier : b.tier;
    if (own == tier) tmpl.push_back({a, b});
  }
  std::vector<Edge> cross;
  for (const auto& e : g.cross_edges())
    if (owning_tier(e) == tier) cross.push_back(e);
  sub.deletable = cross;
  sub.graph = TieredChainGraph(g.m(), g.p(), std::move(tmpl), std::move(cross));
  for (const auto& v : g.all_variables()) {
    if (v.tier == tier)
      sub.random_vertices.push_back(v);
    else if (static_cast<int>(v.tier) < static_cast<int>(tier))
      sub.fixed_vertices.push_back(v);
  }
  return sub;
}

}  // namespace netcg
