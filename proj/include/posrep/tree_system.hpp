#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "posrep/flags.hpp"
#include "posrep/surface.hpp"

namespace posrep {

// A G-local system on a finite piece of a tree. Vertices are ints; edge
// (from, to) stores T(to <- from), and the reverse edge stores its inverse.
template <class S>
struct TreeLocalSystem {
  std::map<int, Mat<S>> T_vertex;
  std::map<std::pair<int, int>, Mat<S>> T_edge;
  std::map<int, std::string> label;  // for witnesses

  void add_vertex(int v, const Mat<S>& t, std::string name = "") {
    T_vertex.insert_or_assign(v, t);
    label[v] = name.empty() ? std::to_string(v) : std::move(name);
  }
  void add_edge(int from, int to, const Mat<S>& t) {
    T_edge.insert_or_assign({from, to}, t);
    T_edge.insert_or_assign({to, from}, inverse(t));
  }
  std::string name(int v) const {
    auto it = label.find(v);
    return it == label.end() ? std::to_string(v) : it->second;
  }
  // T(to) = T(to <- from) T(from) on every stored edge
  std::optional<std::pair<int, int>> first_inconsistent_edge() const {
    for (auto& [e, t] : T_edge) {
      auto a = T_vertex.find(e.first), b = T_vertex.find(e.second);
      if (a == T_vertex.end() || b == T_vertex.end()) continue;
      if (!(b->second == t * a->second)) return e;
    }
    return std::nullopt;
  }
};

template <class S>
Mat<S> transport(const TreeLocalSystem<S>& sys, const std::vector<int>& path) {
  if (path.empty()) throw Error(Err::NotAPath, "", "empty path");
  int n = 0;
  auto it0 = sys.T_vertex.find(path[0]);
  if (it0 != sys.T_vertex.end()) n = it0->second.n();
  else if (!sys.T_edge.empty()) n = sys.T_edge.begin()->second.n();
  Mat<S> r = Mat<S>::identity(n);
  for (size_t i = 1; i < path.size(); ++i) {
    auto it = sys.T_edge.find({path[i - 1], path[i]});
    if (it == sys.T_edge.end()) {
      std::string w = sys.name(path[i - 1]) + "->" + sys.name(path[i]);
      throw Error(Err::NotAPath, w, "no tree edge " + w);
    }
    r = it->second * r;
  }
  return r;
}

// A deck transformation given by its action on the vertices where it is known.
using VertexMap = std::map<int, int>;

// rho(gamma) = T(gamma v)^{-1} T(v). Checks invariance on every edge whose
// endpoints and images are present, and base independence over the domain.
template <class S>
Mat<S> rho_from_system(const TreeLocalSystem<S>& sys, const VertexMap& action) {
  if (action.empty()) throw Error(Err::NotInvariant, "", "action has empty domain");
  for (auto& [e, t] : sys.T_edge) {
    auto a = action.find(e.first), b = action.find(e.second);
    if (a == action.end() || b == action.end()) continue;
    auto img = sys.T_edge.find({a->second, b->second});
    if (img == sys.T_edge.end()) continue;
    if (!(img->second == t)) {
      std::string w = sys.name(e.first) + "->" + sys.name(e.second);
      throw Error(Err::NotInvariant, w, "local system is not invariant along " + w);
    }
  }
  std::optional<Mat<S>> rho;
  for (auto [v, gv] : action) {
    Mat<S> r = inverse(sys.T_vertex.at(gv)) * sys.T_vertex.at(v);
    if (!rho)
      rho = r;
    else if (!(*rho == r))
      throw Error(Err::NotInvariant, sys.name(v), "holonomy depends on the base vertex " + sys.name(v));
  }
  return *rho;
}

template <class S>
struct TreeFraming {
  std::map<int, Flag<S>> F_top, F_bot;
  // third corner of the triangle; needed where a corner lies on no glued side
  std::map<int, Flag<S>> F_right;
};

struct AdaptedVerdict {
  bool ok = true;
  int vertex = -1;
};

template <class S>
AdaptedVerdict check_adapted(const GroupModel<S>& m, const TreeLocalSystem<S>& sys, const TreeFraming<S>& fr) {
  Flag<S> st = standard_flag(m), op = opposite_flag(m);
  for (auto& [v, t] : sys.T_vertex) {
    auto a = fr.F_top.find(v), b = fr.F_bot.find(v);
    if (a == fr.F_top.end() || b == fr.F_bot.end()) continue;
    if (!same_flag(m, act(t, a->second), st) || !same_flag(m, act(t, b->second), op)) return {false, v};
  }
  return {};
}

// Flags per polygon vertex of a fundamental domain.
template <class S>
using PunctureFraming = std::vector<Flag<S>>;

// F^t(v) = F(corner v.side), F^b(v) = F(corner v.side + 1); vertex ids are the
// Gamma graph indices.
template <class S>
TreeFraming<S> induced_framing(const GammaGraph& g, const FundamentalDomain& fd, const PunctureFraming<S>& F) {
  TreeFraming<S> fr;
  for (int v = 0; v < static_cast<int>(g.verts.size()); ++v) {
    const SideRef& sv = g.verts[v];
    fr.F_top.emplace(v, F[fd.corner_pv[sv.tri][GammaGraph::top(sv)]]);
    fr.F_bot.emplace(v, F[fd.corner_pv[sv.tri][GammaGraph::bottom(sv)]]);
    fr.F_right.emplace(v, F[fd.corner_pv[sv.tri][GammaGraph::right(sv)]]);
  }
  return fr;
}

// Inverse of induced_framing. Requires that the flags agree wherever two Gamma
// vertices see the same polygon vertex: inside a triangle and across tree
// edges (F^t(v') = F^b(v), F^b(v') = F^t(v)).
template <class S>
PunctureFraming<S> framing_from_induced(const GroupModel<S>& m, const TriSurface& s, const GammaGraph& g,
                                        const FundamentalDomain& fd, const TreeFraming<S>& fr) {
  std::vector<std::optional<Flag<S>>> F(fd.num_pv());
  auto put = [&](int tri, int corner, const Flag<S>& f, int v) {
    int pv = fd.corner_pv[tri][corner];
    if (!F[pv]) {
      F[pv] = f;
    } else if (!same_flag(m, *F[pv], f)) {
      std::string w = "E(" + s.triangles()[g.verts[v].tri].name + "," + std::to_string(g.verts[v].side) + ")";
      throw Error(Err::IncompatibleFraming, w,
                  "framing at " + w + " disagrees with its neighbours at puncture " + fd.pv_name[pv]);
    }
  };
  for (int v = 0; v < static_cast<int>(g.verts.size()); ++v) {
    const SideRef& sv = g.verts[v];
    put(sv.tri, GammaGraph::top(sv), fr.F_top.at(v), v);
    put(sv.tri, GammaGraph::bottom(sv), fr.F_bot.at(v), v);
    auto r = fr.F_right.find(v);
    if (r != fr.F_right.end()) put(sv.tri, GammaGraph::right(sv), r->second, v);
  }
  PunctureFraming<S> out;
  for (int i = 0; i < fd.num_pv(); ++i) {
    if (!F[i]) throw Error(Err::IncompatibleFraming, fd.pv_name[i], "no flag for puncture lift " + fd.pv_name[i]);
    out.push_back(*F[i]);
  }
  return out;
}

}  // namespace posrep
