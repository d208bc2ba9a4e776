#pragma once

// Text formats for parameter sets and framed representations. Both writers are
// canonical (reduced p/q, single spaces), so reading and re-writing is stable.

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "posrep/rep.hpp"

namespace posrep {

namespace io {

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == ',' || c == '\r') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

template <class S>
std::vector<S> numbers(const std::vector<std::string>& toks, size_t from, const std::string& where) {
  std::vector<S> v;
  for (size_t i = from; i < toks.size(); ++i) {
    try {
      v.push_back(Sc<S>::parse(toks[i]));
    } catch (const Error&) {
      throw Error(Err::ParseError, where, where + ": bad number '" + toks[i] + "'");
    }
  }
  return v;
}

template <class S>
std::string join(const std::vector<S>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + Sc<S>::str(v[i]);
  return s;
}

template <class S>
Mat<S> square(const GroupModel<S>& m, const std::vector<S>& v, const std::string& where) {
  if (static_cast<int>(v.size()) != m.dim() * m.dim())
    throw Error(Err::ParseError, where, where + ": expected " + std::to_string(m.dim() * m.dim()) + " matrix entries");
  return Mat<S>::from_flat(m.dim(), v);
}

}  // namespace io

// Unipotent from a coordinate line. Prefixes: "w" SL word parameters,
// "m" full matrix; otherwise the model's file coordinates.
template <class S>
Mat<S> parse_unipotent(const GroupModel<S>& m, const std::vector<std::string>& toks, const std::string& where) {
  Mat<S> u;
  if (!toks.empty() && (toks[0] == "w" || toks[0] == "m")) {
    auto v = io::numbers<S>(toks, 1, where);
    if (toks[0] == "w") {
      if (m.family() != Family::SL) throw Error(Err::ParseError, where, where + ": word coordinates exist only for sl");
      if (static_cast<int>(v.size()) != m.n() * (m.n() - 1) / 2)
        throw Error(Err::ParseError, where, where + ": wrong number of word parameters");
      u = m.sl_from_word(v);
    } else {
      u = io::square(m, v, where);
    }
  } else {
    auto v = io::numbers<S>(toks, 0, where);
    if (static_cast<int>(v.size()) != m.coord_count())
      throw Error(Err::ParseError, where,
                  where + ": expected " + std::to_string(m.coord_count()) + " coordinates, got " + std::to_string(v.size()));
    u = m.from_coords(v);
  }
  if (!m.in_unipotent(u) || !m.in_group(u)) throw Error(Err::NotUnipotent, where, where + ": not in U+");
  return u;
}

template <class S>
std::string format_unipotent(const GroupModel<S>& m, const Mat<S>& u) {
  auto c = m.coords(u);
  if (c) return io::join(*c);
  return "m " + io::join(u.flat());
}

template <class S>
Mat<S> parse_levi(const GroupModel<S>& m, const std::vector<std::string>& toks, const std::string& where) {
  auto v = io::numbers<S>(toks, 0, where);
  if (static_cast<int>(v.size()) != m.levi_coord_count())
    throw Error(Err::ParseError, where,
                where + ": expected " + std::to_string(m.levi_coord_count()) + " Levi coordinates, got " +
                    std::to_string(v.size()));
  Mat<S> l;
  try {
    l = m.levi_from_coords(v);
  } catch (const Error& e) {
    throw Error(Err::NotInLevi, where, where + ": " + e.what());
  }
  if (!m.in_group(l)) throw Error(Err::NotInLevi, where, where + ": Levi element is not in the group");
  return l;
}

template <class S>
struct ParamFile {
  std::optional<std::string> model;
  ParamSet<S> params;
  std::optional<Mat<S>> gauge;
};

template <class S>
ParamFile<S> parse_params(const GroupModel<S>& m, const Complex& cx, const std::string& text) {
  ParamFile<S> out;
  std::vector<std::optional<Mat<S>>> u(cx.s.num_triangles());
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  auto where = [&] { return "line " + std::to_string(lineno); };
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    std::string line = io::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw Error(Err::ParseError, where(), where() + ": expected '<key>: <values>'");
    std::string head = io::trim(line.substr(0, colon));
    std::string rest = line.substr(colon + 1);
    auto toks = io::tokens(rest);
    if (head == "model") {
      out.model = io::trim(rest);
      if (*out.model != m.spec())
        throw Error(Err::ModelMismatch, where(), where() + ": file is for model " + *out.model + ", running " + m.spec());
    } else if (head == "gauge") {
      out.gauge = io::square(m, io::numbers<S>(toks, 0, where()), where());
      if (!m.in_group(*out.gauge)) throw Error(Err::NotInGroup, where(), where() + ": gauge is not in the group");
    } else if (head.rfind("triangle ", 0) == 0) {
      std::string name = io::trim(head.substr(9));
      int t = cx.s.triangle_by_name(name);
      if (t < 0) throw Error(Err::ParseError, where(), where() + ": unknown triangle '" + name + "'");
      if (u[t]) throw Error(Err::ParseError, where(), where() + ": triangle '" + name + "' given twice");
      u[t] = parse_unipotent(m, toks, where());
    } else if (head.rfind("pairing ", 0) == 0) {
      std::string name = io::trim(head.substr(8));
      int g = cx.s.gluing_by_name(name);
      if (g < 0) throw Error(Err::ParseError, where(), where() + ": unknown gluing '" + name + "'");
      if (cx.fd.in_tree[g])
        throw Error(Err::ParseError, where(), where() + ": gluing '" + name + "' is an edge of the spanning tree, not a pairing");
      if (out.params.l.count(g)) throw Error(Err::ParseError, where(), where() + ": pairing '" + name + "' given twice");
      out.params.l[g] = parse_levi(m, toks, where());
    } else {
      throw Error(Err::ParseError, where(), where() + ": unknown key '" + head + "'");
    }
  }
  for (int t = 0; t < cx.s.num_triangles(); ++t) {
    if (!u[t]) {
      const std::string& nm = cx.s.triangles()[t].name;
      throw Error(Err::ParseError, nm, "no parameter for triangle " + nm);
    }
    out.params.u.push_back(*u[t]);
  }
  for (int g : cx.fd.pairings)
    if (!out.params.l.count(g)) {
      const std::string& nm = cx.s.gluings()[g].name;
      throw Error(Err::ParseError, nm, "no parameter for pairing " + nm);
    }
  return out;
}

template <class S>
std::string format_params(const GroupModel<S>& m, const Complex& cx, const ParamSet<S>& p,
                          const std::optional<Mat<S>>& gauge = std::nullopt) {
  std::ostringstream o;
  o << "model: " << m.spec() << "\n";
  if (gauge && !gauge->is_identity()) o << "gauge: " << io::join(gauge->flat()) << "\n";
  for (int t = 0; t < cx.s.num_triangles(); ++t)
    o << "triangle " << cx.s.triangles()[t].name << ": " << format_unipotent(m, p.u[t]) << "\n";
  for (int g : cx.fd.pairings)
    o << "pairing " << cx.s.gluings()[g].name << ": " << io::join(m.levi_coords(p.l.at(g))) << "\n";
  return o.str();
}

// key=value block of a framed representation.
template <class S>
std::string format_rep(const GroupModel<S>& m, const Complex& cx, const FramedRep<S>& rep) {
  std::ostringstream o;
  o << "model=" << m.spec() << "\n";
  o << "gauge=" << io::join(rep.gauge.flat()) << "\n";
  for (int g : cx.fd.pairings) o << "rho." << cx.s.gluings()[g].name << "=" << io::join(rep.rho.at(g).flat()) << "\n";
  for (int i = 0; i < cx.fd.num_pv(); ++i)
    o << "flag." << cx.fd.pv_name[i] << "=" << io::join(canonical_form(m, rep.framing[i]).flat()) << "\n";
  return o.str();
}

template <class S>
FramedRep<S> parse_rep(const GroupModel<S>& m, const Complex& cx, const std::string& text) {
  FramedRep<S> rep;
  rep.gauge = m.identity();
  std::vector<std::optional<Flag<S>>> F(cx.fd.num_pv());
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = io::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    std::string where = "line " + std::to_string(lineno);
    auto toks = io::tokens(val);
    if (key == "model") {
      if (io::trim(val) != m.spec())
        throw Error(Err::ModelMismatch, where, where + ": representation is for model " + val + ", running " + m.spec());
    } else if (key == "gauge") {
      rep.gauge = io::square(m, io::numbers<S>(toks, 0, where), where);
    } else if (key.rfind("rho.", 0) == 0) {
      int g = cx.s.gluing_by_name(key.substr(4));
      if (g < 0 || cx.fd.in_tree[g]) throw Error(Err::ParseError, where, where + ": unknown pairing '" + key.substr(4) + "'");
      rep.rho[g] = io::square(m, io::numbers<S>(toks, 0, where), where);
      m.require_group(rep.rho[g], key);
    } else if (key.rfind("flag.", 0) == 0) {
      int i = cx.fd.pv_by_name(key.substr(5));
      if (i < 0) throw Error(Err::ParseError, where, where + ": unknown puncture lift '" + key.substr(5) + "'");
      Mat<S> f = io::square(m, io::numbers<S>(toks, 0, where), where);
      if (Sc<S>::is_zero(det(f))) throw Error(Err::ParseError, where, where + ": singular flag representative");
      try {
        F[i] = group_representative(m, Flag<S>{f});
      } catch (const Error&) {
        throw Error(Err::NotInGroup, where, where + ": flag is not a point of G/P+");
      }
    }
  }
  for (int g : cx.fd.pairings)
    if (!rep.rho.count(g)) throw Error(Err::ParseError, cx.s.gluings()[g].name, "missing rho." + cx.s.gluings()[g].name);
  for (int i = 0; i < cx.fd.num_pv(); ++i) {
    if (!F[i]) throw Error(Err::ParseError, cx.fd.pv_name[i], "missing flag." + cx.fd.pv_name[i]);
    rep.framing.push_back(*F[i]);
  }
  return rep;
}

}  // namespace posrep
