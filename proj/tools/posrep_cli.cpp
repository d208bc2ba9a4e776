#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "posrep/rep_io.hpp"

using namespace posrep;

namespace {

struct RunConfig {
  std::string model;
  std::string backend = "exact";
  double tol = 1e-9;
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string surface, params, rep, edge, t = "1/2";
  int samples = 2000;
  std::string format = "human";
  bool structured() const { return format == "structured"; }
};

constexpr int kPass = 0, kCheckFailed = 2, kInputError = 3, kInternal = 4;

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Err::ParseError, path, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Report lines: key=value in structured mode, "key: value" otherwise.
class Out {
 public:
  explicit Out(bool structured) : structured_(structured) {}
  void kv(const std::string& k, const std::string& v) {
    std::cout << k << (structured_ ? "=" : ": ") << v << "\n";
  }
  void raw(const std::string& s) { std::cout << s; }
  bool structured() const { return structured_; }

 private:
  bool structured_;
};

template <class S>
std::string pretty(const Mat<S>& m, const std::string& indent) {
  std::vector<std::string> cells(m.flat().size());
  size_t w = 0;
  for (size_t i = 0; i < cells.size(); ++i) {
    cells[i] = Sc<S>::str(m.flat()[i]);
    w = std::max(w, cells[i].size());
  }
  std::string s;
  for (int i = 0; i < m.n(); ++i) {
    s += indent + "[";
    for (int j = 0; j < m.n(); ++j) {
      const std::string& c = cells[static_cast<size_t>(i) * m.n() + j];
      s += std::string(w - c.size() + (j ? 1 : 0), ' ') + c;
    }
    s += "]\n";
  }
  return s;
}

std::string model_spec(const RunConfig& cfg) {
  if (!cfg.model.empty()) return cfg.model;
  // fall back to the model line of the parameter or representation file
  for (const std::string& path : {cfg.params, cfg.rep}) {
    if (path.empty()) continue;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
      for (const char* key : {"model:", "model="})
        if (line.rfind(key, 0) == 0) return io::trim(line.substr(6));
    }
  }
  throw Error(Err::ModelMismatch, "--model", "no model given (use --model or a 'model:' line)");
}

Complex load_complex(const RunConfig& cfg) {
  if (cfg.surface.empty()) throw Error(Err::ParseError, "--surface", "--surface is required");
  return Complex(TriSurface::load(cfg.surface));
}

int cmd_validate(const RunConfig& cfg, Out& out) {
  TriSurface s = TriSurface::load(cfg.surface);
  FundamentalDomain fd = fundamental_domain(s);
  int e0 = static_cast<int>(fd.pairings.size());
  bool count_ok = s.expected_triangle_count() == s.num_triangles();
  bool e0ok = e0 == 1 - s.euler_char();
  if (out.structured()) {
    out.kv("status", "ok");
    out.kv("chi", std::to_string(s.euler_char()));
    out.kv("genus", std::to_string(s.genus()));
    out.kv("boundary_components", std::to_string(s.boundary_count()));
    out.kv("internal_punctures", std::to_string(s.internal_punctures()));
    out.kv("external_punctures", std::to_string(s.external_punctures()));
    out.kv("triangles", std::to_string(s.num_triangles()));
    out.kv("internal_edges", std::to_string(s.internal_edges()));
    out.kv("external_edges", std::to_string(s.external_edges()));
    out.kv("pairings", std::to_string(e0));
    out.kv("triangle_count_formula", count_ok ? "ok" : "fail");
    out.kv("pairing_count_formula", e0ok ? "ok" : "fail");
    out.kv("polygon_mode", s.polygon_mode() ? "yes" : "no");
  } else {
    std::cout << "χ=" << s.euler_char() << " #T=" << s.num_triangles() << " #E_in=" << s.internal_edges()
              << " |E₀|=" << e0 << ((count_ok && e0ok) ? " OK" : " FAIL") << "\n";
    std::cout << "genus " << s.genus() << ", " << s.boundary_count() << " boundary component(s), "
              << s.internal_punctures() << " internal and " << s.external_punctures() << " external puncture(s)\n";
    std::cout << "#T = 4g-4+2p_i+2m+p_e = " << s.expected_triangle_count() << (count_ok ? " (holds)" : " (fails)") << "\n";
    if (s.polygon_mode()) std::cout << "polygon mode: disc with boundary punctures only, no pairings\n";
  }
  return count_ok && e0ok ? kPass : kCheckFailed;
}

template <class S>
void print_params(Out& out, const GroupModel<S>& m, const Complex& cx, const ParamSet<S>& p, const std::string& prefix) {
  for (int t = 0; t < cx.s.num_triangles(); ++t)
    out.kv(prefix + "triangle." + cx.s.triangles()[t].name, format_unipotent(m, p.u[t]));
  for (int g : cx.fd.pairings) out.kv(prefix + "pairing." + cx.s.gluings()[g].name, io::join(m.levi_coords(p.l.at(g))));
}

template <class S>
int run(const std::string& cmd, const RunConfig& cfg, Out& out) {
  GroupModel<S> m = GroupModel<S>::parse(model_spec(cfg));
  Complex cx = load_complex(cfg);
  auto load_params = [&] {
    if (cfg.params.empty()) throw Error(Err::ParseError, "--params", "--params is required");
    return parse_params(m, cx, read_file(cfg.params));
  };

  if (cmd == "build") {
    ParamFile<S> pf = load_params();
    FramedRep<S> rep = build_rep(m, cx, pf.params, Regime::Transverse, pf.gauge);
    Verdict v = check_positive_rep(m, cx, rep);
    if (out.structured()) {
      out.kv("status", "ok");
      out.raw(format_rep(m, cx, rep));
      out.kv("positive", v.ok ? "yes" : "no");
      if (!v.ok) out.kv("witness", v.witness);
    } else {
      std::cout << "model " << m.spec() << ", " << cx.fd.pairings.size() << " holonomy generator(s)\n";
      for (int g : cx.fd.pairings) std::cout << "rho(" << cx.s.gluings()[g].name << ") =\n" << pretty(rep.rho.at(g), "  ");
      for (int i = 0; i < cx.fd.num_pv(); ++i)
        std::cout << "flag " << cx.fd.pv_name[i] << " =\n" << pretty(canonical_form(m, rep.framing[i]), "  ");
      std::cout << "positive: " << (v.ok ? "yes" : "no") << (v.ok ? "" : " (" + v.message + ")") << "\n";
    }
    return kPass;
  }
  if (cmd == "extract") {
    if (cfg.rep.empty()) throw Error(Err::ParseError, "--rep", "--rep is required");
    FramedRep<S> rep = parse_rep(m, cx, read_file(cfg.rep));
    ParamSet<S> p = extract_params(m, cx, rep);
    out.raw(format_params(m, cx, p, std::optional<Mat<S>>(rep.gauge)));
    return kPass;
  }
  if (cmd == "check") {
    FramedRep<S> rep;
    if (!cfg.rep.empty()) {
      rep = parse_rep(m, cx, read_file(cfg.rep));
      if (auto bad = verify_framing(m, cx, rep)) throw Error(Err::IncompatibleFraming, "", *bad);
    } else {
      ParamFile<S> pf = load_params();
      rep = build_rep(m, cx, pf.params, Regime::Transverse, pf.gauge);
    }
    Verdict v = check_positive_rep(m, cx, rep);
    if (out.structured()) {
      out.kv("status", "ok");
      out.kv("positive", v.ok ? "yes" : "no");
      if (!v.ok) out.kv("witness", v.witness);
    } else {
      std::cout << "positive: " << (v.ok ? "yes" : "no") << (v.ok ? "" : " (" + v.message + ")") << "\n";
    }
    return v.ok ? kPass : kCheckFailed;
  }
  if (cmd == "flip") {
    ParamFile<S> pf = load_params();
    int g = cx.s.gluing_by_name(cfg.edge);
    if (g < 0) throw Error(Err::NotFlippable, cfg.edge, "no internal edge named '" + cfg.edge + "'");
    FlipReport<S> r = flip_invariance_test(m, cx, pf.params, g);
    if (out.structured()) {
      out.kv("status", "ok");
      out.kv("flip", flip_outcome_name(r.outcome));
      if (!r.witness.empty()) out.kv("witness", r.witness);
      if (r.params) print_params(out, m, *r.flipped, *r.params, "flipped.");
    } else {
      std::cout << "flip " << cfg.edge << ": " << flip_outcome_name(r.outcome)
                << (r.witness.empty() ? "" : " (witness " + r.witness + ")") << "\n";
      std::cout << "flipped triangulation:\n" << r.flipped->s.to_text();
      if (r.params) std::cout << "parameters after the flip:\n" << format_params(m, *r.flipped, *r.params);
    }
    return r.outcome == FlipOutcome::NotPositive ? kCheckFailed : kPass;
  }
  if (cmd == "retract") {
    ParamFile<S> pf = load_params();
    S t = Sc<S>::parse(cfg.t);
    ParamSet<S> q = retraction_path(m, cx, pf.params, t);
    bool pos = is_positive_params(m, cx, q);
    if (out.structured()) {
      out.kv("status", "ok");
      out.kv("t", Sc<S>::str(t));
      print_params(out, m, cx, q, "");
      out.kv("positive", pos ? "yes" : "no");
    } else {
      std::cout << format_params(m, cx, q);
      std::cout << "# positive: " << (pos ? "yes" : "no") << "\n";
    }
    return pos ? kPass : kCheckFailed;
  }
  if (cmd == "census") {
    if (!cfg.seed_given) throw Error(Err::ParseError, "--seed", "census needs an explicit --seed");
    auto hist = component_census(m, cx, cfg.samples, cfg.seed);
    auto label = [](const std::vector<int>& l) {
      std::string s;
      for (size_t i = 0; i < l.size(); ++i) s += (i ? "," : "") + std::string(l[i] > 0 ? "+" : "-");
      return s.empty() ? std::string("()") : s;
    };
    if (out.structured()) {
      out.kv("status", "ok");
      out.kv("samples", std::to_string(cfg.samples));
      out.kv("labels", std::to_string(hist.size()));
      for (auto& [l, c] : hist) out.kv("label." + label(l), std::to_string(c));
    } else {
      std::cout << m.spec() << ": " << hist.size() << " distinct label(s) in " << cfg.samples << " samples\n";
      size_t width = 50;
      for (auto& [l, c] : hist) {
        size_t bar = static_cast<size_t>(c) * width / std::max(1, cfg.samples);
        std::cout << "  " << label(l) << "  " << std::string(std::max<size_t>(bar, 1), '#') << " " << c << "\n";
      }
    }
    return kPass;
  }
  throw Error(Err::ParseError, cmd, "unknown command " + cmd);
}

int exit_code(Err e) {
  return e == Err::InternalInconsistency || e == Err::ConventionFailure ? kInternal : kInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Framed and positive representations of punctured surface groups"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto common = [&](CLI::App* sc) {
    sc->add_option("--model", cfg.model, "group model: sl:N, sl:N:full, sp:N, so:P,N");
    sc->add_option("--backend", cfg.backend, "exact or float")->check(CLI::IsMember({"exact", "float"}));
    sc->add_option("--tol", cfg.tol, "float backend tolerance");
    sc->add_option("--seed", cfg.seed, "random seed")->each([&](const std::string&) { cfg.seed_given = true; });
    sc->add_option("--format", cfg.format, "human or structured")->check(CLI::IsMember({"human", "structured"}));
    sc->add_option("--surface", cfg.surface, "surface file")->required();
  };
  auto* validate = app.add_subcommand("validate", "check a surface file and print its counts");
  validate->add_option("--format", cfg.format)->check(CLI::IsMember({"human", "structured"}));
  validate->add_option("surface,--surface", cfg.surface, "surface file");

  auto* build = app.add_subcommand("build", "parameters to framed representation");
  common(build);
  build->add_option("--params", cfg.params)->required();
  auto* extract = app.add_subcommand("extract", "framed representation to parameters");
  common(extract);
  extract->add_option("--rep", cfg.rep, "output of build --format structured")->required();
  auto* check = app.add_subcommand("check", "positivity of a representation");
  common(check);
  check->add_option("--params", cfg.params);
  check->add_option("--rep", cfg.rep);
  auto* flipc = app.add_subcommand("flip", "flip an internal edge and re-test positivity");
  common(flipc);
  flipc->add_option("--params", cfg.params)->required();
  flipc->add_option("--edge", cfg.edge, "gluing name")->required();
  auto* retract = app.add_subcommand("retract", "point of the retraction path");
  common(retract);
  retract->add_option("--params", cfg.params)->required();
  retract->add_option("--t", cfg.t, "path parameter in [0,1]");
  auto* census = app.add_subcommand("census", "count Levi component labels on random positive parameters");
  common(census);
  census->add_option("--samples", cfg.samples);

  CLI11_PARSE(app, argc, argv);
  std::string cmd = app.get_subcommands().front()->get_name();
  Out out(cfg.structured());
  tolerance() = cfg.tol;
  try {
    if (cmd == "validate") {
      if (cfg.surface.empty()) throw Error(Err::ParseError, "--surface", "a surface file is required");
      return cmd_validate(cfg, out);
    }
    return cfg.backend == "float" ? run<double>(cmd, cfg, out) : run<Rat>(cmd, cfg, out);
  } catch (const Error& e) {
    int code = exit_code(e.code());
    if (out.structured()) {
      out.kv("status", "error");
      out.kv("code", err_name(e.code()));
      out.kv("witness", e.witness());
      out.kv("message", e.what());
    } else {
      std::cerr << "error [" << err_name(e.code()) << "]: " << e.what();
      if (!e.witness().empty()) std::cerr << " (at " << e.witness() << ")";
      std::cerr << "\n";
    }
    return code;
  }
}
