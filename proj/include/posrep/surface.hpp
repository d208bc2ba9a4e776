#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "posrep/error.hpp"

namespace posrep {

// Side k of a triangle joins corner k to corner k+1 (mod 3); corners are
// listed counterclockwise.
struct SideRef {
  int tri = -1;
  int side = -1;
  bool operator==(const SideRef&) const = default;
  auto operator<=>(const SideRef&) const = default;
};

struct Gluing {
  SideRef a, b;
  std::string name;
  int line = 0;
};

struct Puncture {
  std::string name;
  bool internal = true;
};

struct Triangle {
  std::string name;
  std::array<int, 3> corner{};  // puncture indices
};

class TriSurface {
 public:
  static TriSurface parse(const std::string& text);
  static TriSurface load(const std::string& path);
  static TriSurface make(std::vector<Puncture> punctures, std::vector<Triangle> tris, std::vector<Gluing> gluings);

  std::string to_text() const;

  const std::vector<Puncture>& punctures() const { return punctures_; }
  const std::vector<Triangle>& triangles() const { return tris_; }
  const std::vector<Gluing>& gluings() const { return gluings_; }
  int num_triangles() const { return static_cast<int>(tris_.size()); }
  int num_gluings() const { return static_cast<int>(gluings_.size()); }

  int gluing_at(int tri, int side) const { return side_glue_[tri][side]; }
  // the side on the other end of the gluing through (tri, side)
  SideRef partner(int tri, int side) const;
  int gluing_by_name(const std::string& name) const;
  int triangle_by_name(const std::string& name) const;

  int euler_char() const { return chi_; }
  int genus() const { return genus_; }
  int boundary_count() const { return m_; }
  int internal_punctures() const { return p_i_; }
  int external_punctures() const { return p_e_; }
  int internal_edges() const { return num_gluings(); }
  int external_edges() const { return ext_edges_; }
  bool polygon_mode() const { return genus_ == 0 && m_ == 1 && p_i_ == 0; }
  int expected_triangle_count() const { return 4 * genus_ - 4 + 2 * p_i_ + 2 * m_ + p_e_; }

 private:
  void validate();

  std::vector<Puncture> punctures_;
  std::vector<Triangle> tris_;
  std::vector<Gluing> gluings_;
  std::vector<std::array<int, 3>> side_glue_;
  int chi_ = 0, genus_ = 0, m_ = 0, p_i_ = 0, p_e_ = 0, ext_edges_ = 0;
};

// Vertices of the Gamma graph: (triangle, glued side). A triangle with no glued
// side gets one virtual vertex at side 0.
struct GammaGraph {
  std::vector<SideRef> verts;
  std::map<SideRef, int> index;
  std::vector<int> v_tau;                         // distinguished vertex per triangle
  std::vector<std::pair<int, int>> star_edges;    // v_tau -> other vertex of the triangle
  std::vector<std::pair<int, int>> cross_edges;   // from the smaller triangle to the larger
  std::vector<bool> is_virtual;

  // corner indices carrying F^t, F^b, F^r
  static int top(const SideRef& v) { return v.side; }
  static int bottom(const SideRef& v) { return (v.side + 1) % 3; }
  static int right(const SideRef& v) { return (v.side + 2) % 3; }
};

GammaGraph build_gamma(const TriSurface& s);

// Free-group words in the pairing generators: (gluing index, +1 or -1).
using Word = std::vector<std::pair<int, int>>;
Word reduce_word(const Word& w);
Word inverse_word(const Word& w);
Word concat(const Word& a, const Word& b);
std::string word_str(const TriSurface& s, const Word& w);

struct FundamentalDomain {
  int base_tri = 0;
  std::vector<bool> in_tree;          // per gluing
  std::vector<int> pairings;          // non-tree gluings, in gluing order
  std::vector<int> parent_tri;        // -1 at the root
  std::vector<int> parent_gluing;
  std::vector<int> order;             // BFS order of triangles through the tree
  std::vector<std::array<int, 3>> corner_pv;  // polygon vertex of each corner
  std::vector<int> pv_puncture;
  std::vector<std::string> pv_name;
  std::vector<SideRef> pv_corner;     // one representative corner per polygon vertex

  int num_pv() const { return static_cast<int>(pv_puncture.size()); }
  int pv_by_name(const std::string& name) const;
  // Deck element reached by crossing side (tri, side): neighbour = delta * lift.
  Word crossing(const TriSurface& s, int tri, int side) const;
};

// BFS dual spanning tree from triangle 0. Gluings listed in `preferred` are put
// in the tree first when they do not close a cycle.
FundamentalDomain fundamental_domain(const TriSurface& s, const std::vector<int>& preferred = {});
FundamentalDomain fundamental_domain_from_tree(const TriSurface& s, const std::vector<bool>& in_tree);

struct PeripheralLoop {
  int puncture = -1;
  SideRef start;  // start corner (tri, corner index)
  Word word;
};

PeripheralLoop peripheral_word(const TriSurface& s, const FundamentalDomain& fd, int puncture);

// Traversal of Gamma_0 (star edges plus tree crossings) from the base vertex.
struct WalkStep {
  enum Kind { StarOut, StarIn, Cross };
  int from = -1, to = -1;
  Kind kind = StarOut;
  int sign = 1;  // crossing direction: +1 from smaller to larger triangle
};

struct Walk {
  int base = -1;
  std::vector<WalkStep> steps;
  std::vector<int> twist;  // signed count of transports from the base
};

Walk gamma0_walk(const TriSurface& s, const GammaGraph& g, const FundamentalDomain& fd);

struct FlipResult {
  TriSurface surface;
  // old corner (tri, corner) carrying the same ideal point, for each corner of
  // the two new triangles; other triangles are unchanged
  std::map<SideRef, SideRef> corner_source;
};

FlipResult flip(const TriSurface& s, int gluing);

// Change of fundamental domain: new lift of triangle t = tri_word[t] * old lift;
// the new generator of pairing g equals gen_word[g] in the old generators.
struct Rebase {
  std::vector<Word> tri_word;
  std::map<int, Word> gen_word;
};

Rebase rebase(const TriSurface& s, const FundamentalDomain& from, const FundamentalDomain& to);

}  // namespace posrep
