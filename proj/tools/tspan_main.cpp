// Command-line front end: ingestion, one subcommand per pipeline, the
// reproduction suite, and the randomized experiment harness.
//
// Exit codes: 0 success, 1 input validation failure, 2 theorem/acceptance
// violation, 3 parse or internal error.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tspan/tspan.hpp"

namespace {

using namespace tspan;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FormatTag infer_format(const std::string& path) {
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "csv") return FormatTag::Csv;
  if (ext == "phy" || ext == "phylip" || ext == "dist") return FormatTag::Phylip;
  if (ext == "json") return FormatTag::Json;
  if (ext == "nwk" || ext == "newick" || ext == "tree") return FormatTag::Newick;
  if (ext == "dot") return FormatTag::Dot;
  throw parse_error("cannot infer format from '" + path + "'; pass --format");
}

// Input arguments are file paths, or @name for a built-in space.
FiniteMetricSpace load_space(const std::string& arg, const std::string& fmt, double tol) {
  if (!arg.empty() && arg[0] == '@') return fixture(arg.substr(1));
  FormatTag f = fmt.empty() ? infer_format(arg) : format_from_string(fmt);
  std::string text = slurp(arg);
  if (f == FormatTag::Newick) return labeled_space(parse_newick(text));
  return parse_distance_matrix(text, f, tol);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + out_path);
  out << text;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string multiset_str(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += detail::fmt_double(v[i]);
  }
  return s + "}";
}

std::vector<double> vertex_distance_multiset(const TightSpanComplex& c) {
  std::vector<double> out;
  for (std::size_t i = 0; i < c.vertices.size(); ++i)
    for (std::size_t j = i + 1; j < c.vertices.size(); ++j)
      out.push_back(sup_dist(c.vertices[i], c.vertices[j]));
  return out;
}

std::vector<double> edge_length_multiset(const TightSpanComplex& c) {
  std::vector<double> out;
  for (const auto& e : c.edges) out.push_back(e.length);
  return out;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}

// ----------------------------------------------------------------- validate

int cmd_validate(const std::string& input, const std::string& fmt, double tol, bool as_json,
                 const std::string& out_path) {
  FiniteMetricSpace m = load_space(input, fmt, tol);
  FourPointReport fp = four_point_check(m, tol);
  std::string text;
  if (as_json) {
    nlohmann::json j;
    j["points"] = m.size();
    j["labels"] = m.labels();
    j["diameter"] = diameter(m);
    j["four_point"] = fp.ok;
    if (!fp.ok) j["four_point_gap"] = fp.gap;
    j["ok"] = true;
    text = j.dump(2) + "\n";
  } else {
    text = "points: " + std::to_string(m.size()) + "\n";
    text += "diameter: " + detail::fmt_double(diameter(m)) + "\n";
    text += "four_point: " + yes_no(fp.ok);
    if (!fp.ok) {
      text += " (worst gap " + detail::fmt_double(fp.gap) + " at " + m.label(fp.i) + "," +
              m.label(fp.j) + "," + m.label(fp.k) + "," + m.label(fp.l) + ")";
    }
    text += "\nok: metric axioms hold\n";
  }
  emit(text, out_path);
  return 0;
}

// --------------------------------------------------------------------- span

int cmd_span(const std::string& input, const std::string& fmt, double tol, double mesh,
             bool as_json, const std::string& out_path, std::uint64_t budget) {
  FiniteMetricSpace m = load_space(input, fmt, tol);
  TightSpanComplex c = tight_span_complex(m, budget);

  std::string text;
  bool want_dot = false;
  if (!out_path.empty()) {
    auto dot = out_path.rfind('.');
    want_dot = dot != std::string::npos && out_path.substr(dot + 1) == "dot";
  }
  if (want_dot) {
    text = export_dot(c);
  } else if (as_json) {
    text = serialize_complex(c);
  } else {
    text = "points: " + std::to_string(m.size()) + "\n";
    text += "vertices: " + std::to_string(c.vertices.size()) + "\n";
    text += "edges: " + std::to_string(c.edges.size()) + "\n";
    text += "two_cells: " + std::to_string(c.cells2.size()) + "\n";
    text += "higher_cells: " + yes_no(c.higher_dim_present) + "\n";
    double total = 0;
    for (const auto& e : c.edges) total += e.length;
    text += "edge_length_total: " + detail::fmt_double(total) + "\n";
    if (mesh > 0) {
      NetSample net = sample_net(c, mesh);
      text += "net_points(h=" + detail::fmt_double(mesh) + "): " +
              std::to_string(net.points.size()) + "\n";
    }
  }
  emit(text, out_path);
  return 0;
}

// --------------------------------------------------------------------- tree

int cmd_tree(const std::string& input, const std::string& fmt, double tol, bool as_json,
             const std::string& out_path) {
  FiniteMetricSpace m = load_space(input, fmt, tol);
  MetricTree t = tree_from_metric(m, tol);
  std::string newick = serialize_newick(t);

  std::vector<double> lens;
  for (std::size_t e = 0; e < t.edge_count(); ++e) lens.push_back(t.edge(e).length);

  std::string text;
  bool want_dot = false;
  bool want_newick = false;
  if (!out_path.empty()) {
    auto dot = out_path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : out_path.substr(dot + 1);
    want_dot = ext == "dot";
    want_newick = ext == "nwk" || ext == "newick" || ext == "tree";
  }
  if (want_dot) {
    text = export_dot(t);
  } else if (want_newick) {
    text = newick + "\n";
  } else if (as_json) {
    nlohmann::json j;
    j["newick"] = newick;
    j["nodes"] = t.node_count();
    j["edges"] = t.edge_count();
    j["total_length"] = t.total_length();
    j["edge_lengths"] = lens;
    text = j.dump(2) + "\n";
  } else {
    text = newick + "\n";
    text += "nodes: " + std::to_string(t.node_count()) + "\n";
    text += "edges: " + std::to_string(t.edge_count()) + "\n";
    text += "total_length: " + detail::fmt_double(t.total_length()) + "\n";
    text += "edge_lengths: " + multiset_str(lens) + "\n";
  }
  emit(text, out_path);
  return 0;
}

// ----------------------------------------------------------------------- gh

int cmd_gh(const std::string& in_a, const std::string& in_b, const std::string& fmt, double tol,
           bool as_json, const std::string& out_path, std::uint64_t budget) {
  FiniteMetricSpace a = load_space(in_a, fmt, tol);
  FiniteMetricSpace b = load_space(in_b, fmt, tol);
  GHResult r = min_distortion_correspondence(a, b, budget);
  double lb = gh_lower_bound_diam(a, b);

  std::string text;
  if (as_json) {
    nlohmann::json j;
    j["dis"] = r.dis;
    j["gh"] = r.gh();
    j["optimal"] = r.optimal;
    j["nodes"] = r.nodes;
    j["pairs"] = r.pairs.size();
    j["lower_bound_diam"] = lb;
    text = j.dump(2) + "\n";
  } else {
    text = "dis: " + detail::fmt_double(r.dis) + "\n";
    text += "gh: " + detail::fmt_double(r.gh()) + "\n";
    text += "optimal: " + yes_no(r.optimal) + "\n";
    text += "nodes: " + std::to_string(r.nodes) + "\n";
    text += "pairs: " + std::to_string(r.pairs.size()) + "\n";
    text += "lower_bound_diam: " + detail::fmt_double(lb) + "\n";
  }
  emit(text, out_path);
  return 0;
}

// --------------------------------------------------------- extend / certify

int cmd_certify(const std::string& in_a, const std::string& in_b, const std::string& fmt,
                double tol, double mesh, bool as_json, const std::string& out_path,
                bool print_chain) {
  FiniteMetricSpace a = load_space(in_a, fmt, tol);
  FiniteMetricSpace b = load_space(in_b, fmt, tol);
  StabilityCertificate cert = stability_certificate(a, b, mesh, tol);

  std::string text;
  if (as_json) {
    text = certificate_to_json(cert).dump(2) + "\n";
  } else {
    text = "theorem: " + cert.theorem + "\n";
    text += "dis0: " + detail::fmt_double(cert.dis0) + "\n";
    text += "dis_final: " + detail::fmt_double(cert.dis_final) + "\n";
    text += "alpha: " + detail::fmt_double(cert.alpha) + "\n";
    text += "mesh: " + detail::fmt_double(cert.mesh) + "\n";
    text += "bound: " + detail::fmt_double(cert.bound) + "\n";
    text += "optimal_base: " + yes_no(cert.optimal) + "\n";
    text += std::string("pass: ") + (cert.pass ? "true" : "false") + "\n";
    if (print_chain)
      for (const auto& line : cert.bound_chain) text += "  " + line + "\n";
  }
  emit(text, out_path);
  return cert.pass ? 0 : 2;
}

// -------------------------------------------------------------------- paper

struct ReproRow {
  std::string quantity;
  std::string expected;
  std::string computed;
  bool ok = false;
};

int cmd_paper(bool as_json, const std::string& out_path) {
  std::vector<ReproRow> rows;
  auto close = [](double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol; };
  auto add = [&](const std::string& q, const std::string& e, const std::string& c, bool ok) {
    rows.push_back({q, e, c, ok});
  };
  auto addv = [&](const std::string& q, double expect, double got, double tol = 1e-9) {
    add(q, detail::fmt_double(expect), detail::fmt_double(got), close(expect, got, tol));
  };

  // Four-point intro spaces and their vertex-set extensions.
  {
    GHResult r = min_distortion_correspondence(intro_a(), intro_b());
    addv("d_GH(A,B)", 1.0, r.gh(), 1e-12);
  }
  {
    GHResult r = min_distortion_correspondence(intro_a_plus(), intro_b_plus());
    addv("d_GH(V_X,V_Y)", 2.0, r.gh(), 1e-12);
  }

  // Tree pipeline bracket at h = 0.25.
  {
    const double h = 0.25;
    StabilityCertificate cert = stability_certificate(intro_a(), intro_b(), h);
    add("tree route used", "3.2", cert.theorem, cert.theorem == "3.2");
    addv("tree dis preserved (h=0.25)", 2.0, cert.dis_final);
    addv("d_GH(X,Y) lower (diam)", 1.0, gh_lower_bound_diam(intro_a(), intro_b()), 1e-12);
    addv("d_GH(X,Y) upper (h=0.25)", 1.5, cert.dis_final / 2 + 2 * h);
  }

  // Rectangle vs. long-edge hulls at N = 40.
  {
    TightSpanComplex ca = tight_span_complex(rect_a(40));
    add("hull A(40) vertices", "4", std::to_string(ca.vertices.size()),
        ca.vertices.size() == 4);
    add("hull A(40) edges", "4", std::to_string(ca.edges.size()), ca.edges.size() == 4);
    add("hull A(40) two-cells", "1", std::to_string(ca.cells2.size()), ca.cells2.size() == 1);
    std::string want = "{4,4,40,40,44,44}";
    std::string got = multiset_str(vertex_distance_multiset(ca));
    add("hull A(40) vertex distances", want, got, got == want);

    TightSpanComplex cb = tight_span_complex(rect_b(40));
    add("hull B(40) vertices", "6", std::to_string(cb.vertices.size()),
        cb.vertices.size() == 6);
    add("hull B(40) edges", "5", std::to_string(cb.edges.size()), cb.edges.size() == 5);
    std::string wantb = "{1,1,1,1,40}";
    std::string gotb = multiset_str(edge_length_multiset(cb));
    add("hull B(40) edge lengths", wantb, gotb, gotb == wantb);

    GHResult r = min_distortion_correspondence(rect_a(40), rect_b(40));
    addv("dis(A(40),B(40))", 2.0, r.dis, 1e-12);
  }

  // Line-embedding distortion for the zigzag sets.
  {
    addv("line lower bound Z_1", 8.0 / 3.0, line_distortion_lower_bound(z_n_set(1)), 1e-12);
    addv("line lower bound Z_2", 16.0 / 5.0, line_distortion_lower_bound(z_n_set(2)), 1e-12);
    addv("line lower bound Z_3", 24.0 / 7.0, line_distortion_lower_bound(z_n_set(3)), 1e-12);
    LineMapResult m1 = min_distortion_map_to_line(z_n_set(1));
    addv("min line distortion Z_1", 8.0 / 3.0, m1.eps);
    LineMapResult m2 = min_distortion_map_to_line(z_n_set(2));
    add("min line distortion Z_2", ">= 3.2", detail::fmt_double(m2.eps),
        m2.eps >= 16.0 / 5.0 - 1e-9);
  }

  bool all_ok = true;
  for (const auto& r : rows) all_ok = all_ok && r.ok;

  std::string text;
  if (as_json) {
    nlohmann::json j;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows)
      j["rows"].push_back({{"quantity", r.quantity},
                           {"expected", r.expected},
                           {"computed", r.computed},
                           {"pass", r.ok}});
    j["pass"] = all_ok;
    text = j.dump(2) + "\n";
  } else {
    for (const auto& r : rows)
      text += r.quantity + " | " + r.expected + " | " + r.computed + " | " +
              (r.ok ? "pass" : "FAIL") + "\n";
    text += std::string("overall: ") + (all_ok ? "pass" : "FAIL") + "\n";
  }
  emit(text, out_path);
  return all_ok ? 0 : 2;
}

// --------------------------------------------------------------- experiment

struct ExperimentCfg {
  std::string kind = "tree";  // "tree" or "general"
  std::uint64_t seed = 1;
  std::size_t count = 10;
  double mesh = 0.25;
  double tol = kDefaultTol;
  double noise = 0.5;
  std::size_t min_size = 0;  // 0: kind default
  std::size_t max_size = 0;
};

int cmd_experiment(const ExperimentCfg& cfg, bool as_json, const std::string& out_path) {
  if (cfg.kind != "tree" && cfg.kind != "general")
    throw std::invalid_argument("--kind must be 'tree' or 'general'");
  if (cfg.count < 1) throw std::invalid_argument("--count must be at least 1");
  if (!(cfg.mesh > 0)) throw std::invalid_argument("--mesh must be positive");
  const bool tree_kind = cfg.kind == "tree";
  std::size_t lo = cfg.min_size ? cfg.min_size : (tree_kind ? 4 : 3);
  std::size_t hi = cfg.max_size ? cfg.max_size : (tree_kind ? 7 : 5);
  if (lo < 2 || hi < lo || hi > 8)
    throw std::invalid_argument("size range must satisfy 2 <= min <= max <= 8");

  struct Row {
    std::size_t idx;
    double dis0, dis_final;
    bool pass;
  };
  std::vector<Row> rows;
  double max_ratio = 0;
  std::size_t violations = 0;

  for (std::size_t i = 0; i < cfg.count; ++i) {
    Rng rng(cfg.seed + i);
    FiniteMetricSpace a =
        tree_kind ? FiniteMetricSpace{} : random_metric(rng, lo + rng.index(hi - lo + 1), 3.0, "a");
    FiniteMetricSpace b;
    if (tree_kind) {
      MetricTree t = random_tree(rng, lo + rng.index(hi - lo + 1));
      a = labeled_space(t);
      b = labeled_space(perturb_edge_lengths(t, rng, cfg.noise));
    } else {
      b = random_metric(rng, lo + rng.index(hi - lo + 1), 3.0, "b");
    }
    StabilityCertificate cert = stability_certificate(a, b, cfg.mesh, cfg.tol);
    if (!cert.pass) ++violations;
    double ratio = cert.dis0 > 1e-15 ? cert.dis_final / cert.dis0 : 1.0;
    max_ratio = std::max(max_ratio, ratio);
    rows.push_back({i, cert.dis0, cert.dis_final, cert.pass});
  }

  std::string text;
  if (as_json) {
    nlohmann::json j;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows)
      j["rows"].push_back({{"idx", r.idx},
                           {"dis0", r.dis0},
                           {"dis_final", r.dis_final},
                           {"mesh", cfg.mesh},
                           {"pass", r.pass}});
    j["summary"] = {{"instances", cfg.count},
                    {"violations", violations},
                    {"max_ratio", max_ratio},
                    {"kind", cfg.kind},
                    {"seed", cfg.seed}};
    text = j.dump(2) + "\n";
  } else {
    text = "idx,dis0,dis_final,mesh,pass\n";
    for (const auto& r : rows)
      text += std::to_string(r.idx) + "," + detail::fmt_double(r.dis0) + "," +
              detail::fmt_double(r.dis_final) + "," + detail::fmt_double(cfg.mesh) + "," +
              (r.pass ? "true" : "false") + "\n";
    text += "summary: instances=" + std::to_string(cfg.count) +
            " violations=" + std::to_string(violations) +
            " max_ratio=" + detail::fmt_double(max_ratio) + "\n";
  }
  emit(text, out_path);
  return violations == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "tspan: injective hulls, metric trees, and Gromov-Hausdorff "
      "certificates for finite metric spaces"};
  app.require_subcommand(1);

  std::string input, input_b, fmt, out_path;
  double tol = kDefaultTol;
  double mesh = 0.25;
  bool as_json = false;
  std::uint64_t budget = 50'000'000;
  std::uint64_t enum_budget = 80'000'000;
  ExperimentCfg ecfg;

  std::string fixture_help = "input: a file (csv/phylip/json matrix or newick tree) or @name "
                             "for a built-in space (";
  {
    bool first = true;
    for (const auto& n : fixture_names()) {
      if (!first) fixture_help += ", ";
      fixture_help += n;
      first = false;
    }
    fixture_help += ")";
  }

  auto add_common = [&](CLI::App* sub, bool two_inputs) {
    sub->add_option("input", input, fixture_help)->required();
    if (two_inputs) sub->add_option("input_b", input_b, "second input")->required();
    sub->add_option("--format", fmt, "input format: csv, phylip, json, newick");
    sub->add_option("--tol", tol, "numeric tolerance");
    sub->add_flag("--json", as_json, "emit json instead of text");
    sub->add_option("--out", out_path, "write output to this file instead of stdout");
  };

  int rc = 0;

  CLI::App* validate = app.add_subcommand("validate", "check metric axioms and report shape");
  add_common(validate, false);
  validate->callback(
      [&] { rc = guarded([&] { return cmd_validate(input, fmt, tol, as_json, out_path); }); });

  CLI::App* span = app.add_subcommand("span", "build the injective hull complex");
  add_common(span, false);
  span->add_option("--mesh", mesh, "also report net size at this spacing")->default_val(0.0);
  span->add_option("--budget", enum_budget, "vertex enumeration work budget");
  span->callback([&] {
    rc = guarded(
        [&] { return cmd_span(input, fmt, tol, mesh, as_json, out_path, enum_budget); });
  });

  CLI::App* tree = app.add_subcommand("tree", "reconstruct the minimal spanning metric tree");
  add_common(tree, false);
  tree->callback(
      [&] { rc = guarded([&] { return cmd_tree(input, fmt, tol, as_json, out_path); }); });

  CLI::App* gh = app.add_subcommand("gh", "exact Gromov-Hausdorff distance via correspondences");
  add_common(gh, true);
  gh->add_option("--budget", budget, "branch-and-bound node budget");
  gh->callback([&] {
    rc = guarded([&] { return cmd_gh(input, input_b, fmt, tol, as_json, out_path, budget); });
  });

  CLI::App* extend = app.add_subcommand("extend", "extend an optimal relation over nets");
  add_common(extend, true);
  extend->add_option("--mesh", mesh, "net spacing");
  extend->callback([&] {
    rc = guarded(
        [&] { return cmd_certify(input, input_b, fmt, tol, mesh, as_json, out_path, true); });
  });

  CLI::App* certify = app.add_subcommand("certify", "stability certificate for a pair of spaces");
  add_common(certify, true);
  certify->add_option("--mesh", mesh, "net spacing");
  certify->callback([&] {
    rc = guarded(
        [&] { return cmd_certify(input, input_b, fmt, tol, mesh, as_json, out_path, false); });
  });

  CLI::App* paper = app.add_subcommand("paper", "run the reproduction table");
  paper->add_flag("--json", as_json, "emit json instead of text");
  paper->add_option("--out", out_path, "write output to this file instead of stdout");
  paper->callback([&] { rc = guarded([&] { return cmd_paper(as_json, out_path); }); });

  CLI::App* experiment = app.add_subcommand("experiment", "randomized stability runs");
  experiment->add_option("--kind", ecfg.kind, "tree or general");
  experiment->add_option("--seed", ecfg.seed, "base seed; instance i uses seed+i");
  experiment->add_option("--count", ecfg.count, "number of instances");
  experiment->add_option("--mesh", ecfg.mesh, "net spacing");
  experiment->add_option("--tol", ecfg.tol, "numeric tolerance");
  experiment->add_option("--noise", ecfg.noise, "edge-length noise magnitude (tree kind)");
  experiment->add_option("--min-size", ecfg.min_size, "smallest instance size");
  experiment->add_option("--max-size", ecfg.max_size, "largest instance size");
  experiment->add_flag("--json", as_json, "emit json instead of text");
  experiment->add_option("--out", out_path, "write output to this file instead of stdout");
  experiment->callback(
      [&] { rc = guarded([&] { return cmd_experiment(ecfg, as_json, out_path); }); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  return rc;
}
