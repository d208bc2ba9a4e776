#include "posrep/surface.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <functional>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

namespace posrep {

namespace {

std::string side_str(const std::vector<Triangle>& tris, const SideRef& s) {
  return "E(" + tris[s.tri].name + "," + std::to_string(s.side) + ")";
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

const char* err_name(Err e) {
  switch (e) {
    case Err::SingularCell: return "SingularCell";
    case Err::ModelMismatch: return "ModelMismatch";
    case Err::ConventionFailure: return "ConventionFailure";
    case Err::NotInGroup: return "NotInGroup";
    case Err::NotInLevi: return "NotInLevi";
    case Err::NotUnipotent: return "NotUnipotent";
    case Err::NotTransverse: return "NotTransverse";
    case Err::NotInUstar: return "NotInUstar";
    case Err::InvalidTriangulation: return "InvalidTriangulation";
    case Err::UnsupportedSurface: return "UnsupportedSurface";
    case Err::NotFlippable: return "NotFlippable";
    case Err::NotAPath: return "NotAPath";
    case Err::NotInvariant: return "NotInvariant";
    case Err::IncompatibleFraming: return "IncompatibleFraming";
    case Err::RegimeViolation: return "RegimeViolation";
    case Err::InternalInconsistency: return "InternalInconsistency";
    case Err::NotNormalizer: return "NotNormalizer";
    case Err::ParseError: return "ParseError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------- parsing

TriSurface TriSurface::parse(const std::string& text) {
  static const std::regex re_punct(R"(^([A-Za-z_][A-Za-z0-9_']*)\s+(internal|external)$)");
  static const std::regex re_tri(
      R"(^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*\(\s*([A-Za-z_][A-Za-z0-9_']*)\s*,\s*([A-Za-z_][A-Za-z0-9_']*)\s*,\s*([A-Za-z_][A-Za-z0-9_']*)\s*\)$)");
  static const std::regex re_glue(
      R"(^glue\s+E\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*,\s*(\d+)\s*\)\s+E\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*,\s*(\d+)\s*\)\s+as\s+([A-Za-z_][A-Za-z0-9_]*)$)");

  std::vector<Puncture> punctures;
  std::vector<Triangle> tris;
  std::vector<Gluing> gluings;
  std::map<std::string, int> pidx, tidx;
  std::set<std::string> gnames;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw Error(Err::ParseError, "line " + std::to_string(lineno), "line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line == "punctures:" || line == "triangles:" || line == "gluings:") {
      section = line.substr(0, line.size() - 1);
      continue;
    }
    std::smatch m;
    if (section == "punctures") {
      if (!std::regex_match(line, m, re_punct)) fail("expected '<name> internal|external'");
      if (pidx.count(m[1])) fail("puncture '" + m[1].str() + "' declared twice");
      pidx[m[1]] = static_cast<int>(punctures.size());
      punctures.push_back({m[1], m[2] == "internal"});
    } else if (section == "triangles") {
      if (!std::regex_match(line, m, re_tri)) fail("expected 'T<i> = (<corner>,<corner>,<corner>)'");
      if (tidx.count(m[1])) fail("triangle '" + m[1].str() + "' declared twice");
      Triangle t;
      t.name = m[1];
      for (int k = 0; k < 3; ++k) {
        auto it = pidx.find(m[2 + k]);
        if (it == pidx.end()) fail("unknown puncture '" + m[2 + k].str() + "'");
        t.corner[k] = it->second;
      }
      tidx[t.name] = static_cast<int>(tris.size());
      tris.push_back(t);
    } else if (section == "gluings") {
      if (!std::regex_match(line, m, re_glue)) fail("expected 'glue E(<Ti>,<k>) E(<Tj>,<l>) as <gen>'");
      Gluing g;
      for (int e = 0; e < 2; ++e) {
        auto it = tidx.find(m[1 + 2 * e]);
        if (it == tidx.end()) fail("unknown triangle '" + m[1 + 2 * e].str() + "'");
        int side = std::stoi(m[2 + 2 * e]);
        if (side > 2) fail("side index must be 0, 1 or 2");
        (e ? g.b : g.a) = {it->second, side};
      }
      g.name = m[5];
      if (gnames.count(g.name)) fail("gluing name '" + g.name + "' used twice");
      gnames.insert(g.name);
      g.line = lineno;
      gluings.push_back(g);
    } else {
      fail("content outside of a section");
    }
  }
  return make(std::move(punctures), std::move(tris), std::move(gluings));
}

TriSurface TriSurface::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Err::ParseError, path, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

TriSurface TriSurface::make(std::vector<Puncture> punctures, std::vector<Triangle> tris, std::vector<Gluing> gluings) {
  TriSurface s;
  s.punctures_ = std::move(punctures);
  s.tris_ = std::move(tris);
  s.gluings_ = std::move(gluings);
  s.validate();
  return s;
}

std::string TriSurface::to_text() const {
  std::ostringstream o;
  o << "punctures:\n";
  for (auto& p : punctures_) o << "  " << p.name << (p.internal ? " internal\n" : " external\n");
  o << "triangles:\n";
  for (auto& t : tris_)
    o << "  " << t.name << " = (" << punctures_[t.corner[0]].name << ", " << punctures_[t.corner[1]].name << ", "
      << punctures_[t.corner[2]].name << ")\n";
  o << "gluings:\n";
  for (auto& g : gluings_) o << "  glue " << side_str(tris_, g.a) << " " << side_str(tris_, g.b) << " as " << g.name << "\n";
  return o.str();
}

SideRef TriSurface::partner(int tri, int side) const {
  int g = side_glue_[tri][side];
  if (g < 0) return {};
  const Gluing& gl = gluings_[g];
  return gl.a == SideRef{tri, side} ? gl.b : gl.a;
}

int TriSurface::gluing_by_name(const std::string& name) const {
  for (int i = 0; i < num_gluings(); ++i)
    if (gluings_[i].name == name) return i;
  return -1;
}

int TriSurface::triangle_by_name(const std::string& name) const {
  for (int i = 0; i < num_triangles(); ++i)
    if (tris_[i].name == name) return i;
  return -1;
}

// ---------------------------------------------------------------- validation

void TriSurface::validate() {
  auto invalid = [&](const std::string& witness, const std::string& msg) {
    throw Error(Err::InvalidTriangulation, witness, msg);
  };
  int T = num_triangles();
  if (T == 0) invalid("", "no triangles");
  side_glue_.assign(T, {-1, -1, -1});
  for (int i = 0; i < num_gluings(); ++i) {
    const Gluing& g = gluings_[i];
    for (const SideRef& sr : {g.a, g.b}) {
      if (sr.tri < 0 || sr.tri >= T || sr.side < 0 || sr.side > 2) invalid(g.name, "gluing " + g.name + " is out of range");
      if (side_glue_[sr.tri][sr.side] >= 0)
        invalid(side_str(tris_, sr), "edge " + side_str(tris_, sr) + " is glued twice");
      side_glue_[sr.tri][sr.side] = i;
    }
    if (g.a.tri == g.b.tri)
      invalid(g.name, "gluing " + g.name + " glues triangle " + tris_[g.a.tri].name + " to itself");
  }

  // corner classes: side k of (Ti) meets side l of (Tj) with c_k ~ d_{l+1}, c_{k+1} ~ d_l
  auto cid = [](int tri, int c) { return 3 * tri + c; };
  UnionFind uf(3 * T);
  for (auto& g : gluings_) {
    uf.unite(cid(g.a.tri, g.a.side), cid(g.b.tri, (g.b.side + 1) % 3));
    uf.unite(cid(g.a.tri, (g.a.side + 1) % 3), cid(g.b.tri, g.b.side));
  }
  for (auto& g : gluings_) {
    int a0 = tris_[g.a.tri].corner[g.a.side], a1 = tris_[g.a.tri].corner[(g.a.side + 1) % 3];
    int b0 = tris_[g.b.tri].corner[g.b.side], b1 = tris_[g.b.tri].corner[(g.b.side + 1) % 3];
    if (a0 != b1 || a1 != b0)
      invalid(g.name, "gluing " + g.name + " joins " + side_str(tris_, g.a) + " and " + side_str(tris_, g.b) +
                          " with mismatched endpoints (sides must be glued with opposite orientations)");
  }
  std::map<int, int> class_label;
  for (int t = 0; t < T; ++t)
    for (int c = 0; c < 3; ++c) {
      int r = uf.find(cid(t, c));
      class_label.emplace(r, tris_[t].corner[c]);
    }
  std::map<int, int> label_class;
  for (auto [r, lab] : class_label) {
    auto [it, fresh] = label_class.emplace(lab, r);
    if (!fresh)
      invalid(punctures_[lab].name, "puncture " + punctures_[lab].name + " labels two different vertices of the triangulation");
  }
  for (int p = 0; p < static_cast<int>(punctures_.size()); ++p)
    if (!label_class.count(p)) invalid(punctures_[p].name, "puncture " + punctures_[p].name + " is not used");

  // connectivity
  UnionFind tu(T);
  for (auto& g : gluings_) tu.unite(g.a.tri, g.b.tri);
  for (int t = 0; t < T; ++t)
    if (tu.find(t) != 0) invalid(tris_[t].name, "triangle " + tris_[t].name + " is not connected to the rest");

  // link of each vertex: a cycle for internal punctures, a path for external ones
  ext_edges_ = 0;
  std::vector<int> boundary_sides_at(punctures_.size(), 0);
  std::vector<SideRef> some_boundary(punctures_.size());
  for (int t = 0; t < T; ++t)
    for (int k = 0; k < 3; ++k)
      if (side_glue_[t][k] < 0) {
        ++ext_edges_;
        for (int c : {k, (k + 1) % 3}) {
          int p = tris_[t].corner[c];
          ++boundary_sides_at[p];
          some_boundary[p] = {t, k};
        }
      }
  p_i_ = p_e_ = 0;
  for (int p = 0; p < static_cast<int>(punctures_.size()); ++p) {
    bool on_boundary = boundary_sides_at[p] > 0;
    if (punctures_[p].internal && on_boundary)
      invalid(side_str(tris_, some_boundary[p]), "edge " + side_str(tris_, some_boundary[p]) +
                                                     " is not glued, so puncture " + punctures_[p].name +
                                                     " lies on the boundary but is declared internal");
    if (!punctures_[p].internal && !on_boundary)
      invalid(punctures_[p].name, "puncture " + punctures_[p].name + " is declared external but has no boundary edge");
    if (punctures_[p].internal)
      ++p_i_;
    else
      ++p_e_;
  }

  // boundary components: unglued sides connect their endpoint vertices
  UnionFind bu(static_cast<int>(punctures_.size()));
  for (int t = 0; t < T; ++t)
    for (int k = 0; k < 3; ++k)
      if (side_glue_[t][k] < 0) bu.unite(tris_[t].corner[k], tris_[t].corner[(k + 1) % 3]);
  std::set<int> comps;
  for (int p = 0; p < static_cast<int>(punctures_.size()); ++p)
    if (!punctures_[p].internal) comps.insert(bu.find(p));
  m_ = static_cast<int>(comps.size());

  int V = static_cast<int>(punctures_.size());
  int E = num_gluings() + ext_edges_;
  int chi_bar = V - E + T;
  if ((2 - m_ - chi_bar) % 2 != 0 || 2 - m_ - chi_bar < 0)
    invalid("", "inconsistent Euler characteristic");
  genus_ = (2 - m_ - chi_bar) / 2;
  chi_ = chi_bar - p_i_;
  if (expected_triangle_count() != T)
    invalid("", "triangle count " + std::to_string(T) + " differs from 4g-4+2p_i+2m+p_e = " +
                    std::to_string(expected_triangle_count()));
  bool disc = genus_ == 0 && m_ == 1 && p_i_ == 0 && p_e_ >= 3;
  if (!(chi_ < 0 || disc))
    throw Error(Err::UnsupportedSurface, "",
                "surface has Euler characteristic " + std::to_string(chi_) + " and is not a polygon with >= 3 punctures");
}

// ---------------------------------------------------------------- Gamma

GammaGraph build_gamma(const TriSurface& s) {
  GammaGraph g;
  int T = s.num_triangles();
  for (int t = 0; t < T; ++t) {
    bool any = false;
    for (int k = 0; k < 3; ++k)
      if (s.gluing_at(t, k) >= 0) {
        g.index[{t, k}] = static_cast<int>(g.verts.size());
        g.verts.push_back({t, k});
        g.is_virtual.push_back(false);
        any = true;
      }
    if (!any) {
      g.index[{t, 0}] = static_cast<int>(g.verts.size());
      g.verts.push_back({t, 0});
      g.is_virtual.push_back(true);
    }
  }
  g.v_tau.assign(T, -1);
  for (int t = 0; t < T; ++t) {
    int best = -1, best_g = 1 << 30;
    for (int k = 0; k < 3; ++k) {
      int gl = s.gluing_at(t, k);
      if (gl >= 0 && gl < best_g) {
        best_g = gl;
        best = k;
      }
    }
    g.v_tau[t] = g.index.at({t, best < 0 ? 0 : best});
  }
  for (int t = 0; t < T; ++t)
    for (int k = 0; k < 3; ++k) {
      auto it = g.index.find({t, k});
      if (it != g.index.end() && it->second != g.v_tau[t]) g.star_edges.push_back({g.v_tau[t], it->second});
    }
  for (auto& gl : s.gluings()) {
    SideRef lo = gl.a, hi = gl.b;
    if (hi.tri < lo.tri) std::swap(lo, hi);
    g.cross_edges.push_back({g.index.at(lo), g.index.at(hi)});
  }
  return g;
}

// ---------------------------------------------------------------- words

Word reduce_word(const Word& w) {
  Word out;
  for (auto& x : w) {
    if (!out.empty() && out.back().first == x.first && out.back().second == -x.second)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& x : out) x.second = -x.second;
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word w(a);
  w.insert(w.end(), b.begin(), b.end());
  return reduce_word(w);
}

std::string word_str(const TriSurface& s, const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (auto& [g, e] : w) {
    if (!out.empty()) out += " ";
    out += s.gluings()[g].name + (e < 0 ? "^-1" : "");
  }
  return out;
}

// ---------------------------------------------------------------- fundamental domain

int FundamentalDomain::pv_by_name(const std::string& name) const {
  for (int i = 0; i < num_pv(); ++i)
    if (pv_name[i] == name) return i;
  return -1;
}

Word FundamentalDomain::crossing(const TriSurface& s, int tri, int side) const {
  int g = s.gluing_at(tri, side);
  if (g < 0 || in_tree[g]) return {};
  const Gluing& gl = s.gluings()[g];
  return {{g, gl.a == SideRef{tri, side} ? 1 : -1}};
}

FundamentalDomain fundamental_domain_from_tree(const TriSurface& s, const std::vector<bool>& in_tree) {
  int T = s.num_triangles();
  FundamentalDomain fd;
  fd.base_tri = 0;
  fd.in_tree = in_tree;
  fd.parent_tri.assign(T, -1);
  fd.parent_gluing.assign(T, -1);
  std::vector<bool> seen(T, false);
  std::deque<int> q{0};
  seen[0] = true;
  while (!q.empty()) {
    int t = q.front();
    q.pop_front();
    fd.order.push_back(t);
    for (int k = 0; k < 3; ++k) {
      int g = s.gluing_at(t, k);
      if (g < 0 || !in_tree[g]) continue;
      int u = s.partner(t, k).tri;
      if (seen[u]) continue;
      seen[u] = true;
      fd.parent_tri[u] = t;
      fd.parent_gluing[u] = g;
      q.push_back(u);
    }
  }
  int tree_edges = 0;
  for (bool b : in_tree) tree_edges += b;
  if (static_cast<int>(fd.order.size()) != T || tree_edges != T - 1)
    throw Error(Err::InvalidTriangulation, "tree", "gluing set is not a spanning tree of the dual graph");
  for (int g = 0; g < s.num_gluings(); ++g)
    if (!in_tree[g]) fd.pairings.push_back(g);

  // polygon vertices: corners identified through tree gluings only
  UnionFind uf(3 * T);
  for (int g = 0; g < s.num_gluings(); ++g) {
    if (!in_tree[g]) continue;
    const Gluing& gl = s.gluings()[g];
    uf.unite(3 * gl.a.tri + gl.a.side, 3 * gl.b.tri + (gl.b.side + 1) % 3);
    uf.unite(3 * gl.a.tri + (gl.a.side + 1) % 3, 3 * gl.b.tri + gl.b.side);
  }
  std::map<int, int> root_pv;
  std::map<int, int> lifts;
  fd.corner_pv.assign(T, {-1, -1, -1});
  for (int t = 0; t < T; ++t)
    for (int c = 0; c < 3; ++c) {
      int r = uf.find(3 * t + c);
      auto it = root_pv.find(r);
      if (it == root_pv.end()) {
        int id = fd.num_pv();
        root_pv[r] = id;
        int p = s.triangles()[t].corner[c];
        fd.pv_puncture.push_back(p);
        fd.pv_corner.push_back({t, c});
        fd.pv_name.push_back("");
        ++lifts[p];
        it = root_pv.find(r);
      }
      fd.corner_pv[t][c] = it->second;
    }
  std::map<int, int> seen_lift;
  for (int i = 0; i < fd.num_pv(); ++i) {
    int p = fd.pv_puncture[i];
    const std::string& base = s.punctures()[p].name;
    fd.pv_name[i] = lifts[p] == 1 ? base : base + "#" + std::to_string(seen_lift[p]++);
  }
  return fd;
}

FundamentalDomain fundamental_domain(const TriSurface& s, const std::vector<int>& preferred) {
  int T = s.num_triangles();
  std::vector<bool> in_tree(s.num_gluings(), false);
  UnionFind uf(T);
  for (int g : preferred) {
    const Gluing& gl = s.gluings()[g];
    if (uf.unite(gl.a.tri, gl.b.tri)) in_tree[g] = true;
  }
  // BFS over the dual graph in input order
  std::vector<bool> seen(T, false);
  std::deque<int> q{0};
  seen[0] = true;
  while (!q.empty()) {
    int t = q.front();
    q.pop_front();
    for (int k = 0; k < 3; ++k) {
      int g = s.gluing_at(t, k);
      if (g < 0) continue;
      int u = s.partner(t, k).tri;
      if (seen[u]) continue;
      seen[u] = true;
      q.push_back(u);
      if (uf.unite(t, u)) in_tree[g] = true;
    }
  }
  // preferred edges may have left components only joined through other gluings
  for (int g = 0; g < s.num_gluings(); ++g) {
    const Gluing& gl = s.gluings()[g];
    if (uf.unite(gl.a.tri, gl.b.tri)) in_tree[g] = true;
  }
  return fundamental_domain_from_tree(s, in_tree);
}

// ---------------------------------------------------------------- peripheral words

PeripheralLoop peripheral_word(const TriSurface& s, const FundamentalDomain& fd, int puncture) {
  PeripheralLoop loop;
  loop.puncture = puncture;
  for (int t = 0; t < s.num_triangles() && loop.start.tri < 0; ++t)
    for (int c = 0; c < 3; ++c)
      if (s.triangles()[t].corner[c] == puncture) {
        loop.start = {t, c};
        break;
      }
  if (loop.start.tri < 0) throw Error(Err::InvalidTriangulation, "unknown puncture");
  if (!s.punctures()[puncture].internal) return loop;
  // at corner (t, m) cross side m; the corner continues as corner l+1 of the neighbour
  SideRef cur = loop.start;
  Word w;
  for (int guard = 0; guard <= 3 * s.num_triangles(); ++guard) {
    Word d = fd.crossing(s, cur.tri, cur.side);
    w.insert(w.end(), d.begin(), d.end());
    SideRef nb = s.partner(cur.tri, cur.side);
    cur = {nb.tri, (nb.side + 1) % 3};
    if (cur == loop.start) {
      loop.word = reduce_word(w);
      return loop;
    }
  }
  throw Error(Err::InternalInconsistency, s.punctures()[puncture].name, "corner walk did not close");
}

// ---------------------------------------------------------------- Gamma_0 traversal

Walk gamma0_walk(const TriSurface& s, const GammaGraph& g, const FundamentalDomain& fd) {
  Walk w;
  int V = static_cast<int>(g.verts.size());
  w.base = g.v_tau[fd.base_tri];
  w.twist.assign(V, 0);
  std::vector<bool> seen(V, false);
  std::deque<int> q{w.base};
  seen[w.base] = true;
  auto visit = [&](int from, int to, WalkStep::Kind kind, int sign) {
    if (seen[to]) return;
    seen[to] = true;
    w.steps.push_back({from, to, kind, sign});
    int d = kind == WalkStep::StarOut ? 1 : kind == WalkStep::StarIn ? -1 : sign;
    w.twist[to] = w.twist[from] + d;
    q.push_back(to);
  };
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    SideRef sv = g.verts[v];
    int vt = g.v_tau[sv.tri];
    if (v == vt) {
      for (int k = 1; k <= 2; ++k) {
        auto it = g.index.find({sv.tri, (sv.side + k) % 3});
        if (it != g.index.end()) visit(v, it->second, WalkStep::StarOut, 1);
      }
    } else {
      visit(v, vt, WalkStep::StarIn, 1);
    }
    if (g.is_virtual[v]) continue;
    int gl = s.gluing_at(sv.tri, sv.side);
    if (!fd.in_tree[gl]) continue;
    SideRef nb = s.partner(sv.tri, sv.side);
    visit(v, g.index.at(nb), WalkStep::Cross, nb.tri > sv.tri ? 1 : -1);
  }
  for (int v = 0; v < V; ++v)
    if (!seen[v]) throw Error(Err::InternalInconsistency, "Gamma_0 traversal missed a vertex");
  return w;
}

// ---------------------------------------------------------------- flips

FlipResult flip(const TriSurface& s, int gi) {
  if (gi < 0 || gi >= s.num_gluings()) throw Error(Err::NotFlippable, "", "no such internal edge");
  const Gluing& e = s.gluings()[gi];
  int ta = e.a.tri, tb = e.b.tri, sa = e.a.side, sb = e.b.side;
  if (ta == tb) throw Error(Err::NotFlippable, e.name, "edge " + e.name + " bounds a self-folded triangle");
  auto ca = s.triangles()[ta].corner, cb = s.triangles()[tb].corner;
  int A = ca[sa], B = ca[(sa + 1) % 3], C = ca[(sa + 2) % 3], D = cb[(sb + 2) % 3];
  std::vector<Triangle> tris = s.triangles();
  tris[ta].corner = {C, A, D};
  tris[tb].corner = {D, B, C};
  std::map<SideRef, SideRef> remap{
      {{ta, (sa + 2) % 3}, {ta, 0}},
      {{tb, (sb + 1) % 3}, {ta, 1}},
      {{tb, (sb + 2) % 3}, {tb, 0}},
      {{ta, (sa + 1) % 3}, {tb, 1}},
  };
  std::vector<Gluing> gl = s.gluings();
  for (int i = 0; i < static_cast<int>(gl.size()); ++i) {
    if (i == gi) {
      gl[i].a = {ta, 2};
      gl[i].b = {tb, 2};
      continue;
    }
    for (SideRef* sr : {&gl[i].a, &gl[i].b}) {
      auto it = remap.find(*sr);
      if (it != remap.end()) *sr = it->second;
    }
    if (gl[i].a.tri == gl[i].b.tri)
      throw Error(Err::NotFlippable, e.name, "flipping " + e.name + " would glue a triangle to itself");
  }
  FlipResult r{TriSurface::make(s.punctures(), tris, gl), {}};
  r.corner_source[{ta, 0}] = {ta, (sa + 2) % 3};
  r.corner_source[{ta, 1}] = {ta, sa};
  r.corner_source[{ta, 2}] = {tb, (sb + 2) % 3};
  r.corner_source[{tb, 0}] = {tb, (sb + 2) % 3};
  r.corner_source[{tb, 1}] = {ta, (sa + 1) % 3};
  r.corner_source[{tb, 2}] = {ta, (sa + 2) % 3};
  return r;
}

// ---------------------------------------------------------------- change of fundamental domain

Rebase rebase(const TriSurface& s, const FundamentalDomain& from, const FundamentalDomain& to) {
  Rebase r;
  int T = s.num_triangles();
  r.tri_word.assign(T, {});
  for (int t : to.order) {
    if (to.parent_tri[t] < 0) continue;
    int p = to.parent_tri[t], g = to.parent_gluing[t];
    const Gluing& gl = s.gluings()[g];
    SideRef ps = gl.a.tri == p ? gl.a : gl.b;
    r.tri_word[t] = concat(r.tri_word[p], from.crossing(s, ps.tri, ps.side));
  }
  for (int g : to.pairings) {
    const Gluing& gl = s.gluings()[g];
    Word w = concat(r.tri_word[gl.a.tri], from.crossing(s, gl.a.tri, gl.a.side));
    r.gen_word[g] = concat(w, inverse_word(r.tri_word[gl.b.tri]));
  }
  return r;
}

}  // namespace posrep
