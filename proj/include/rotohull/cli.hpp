#ifndef ROTOHULL_CLI_HPP
#define ROTOHULL_CLI_HPP

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rotohull/point_group.hpp"
#include "rotohull/resolution.hpp"
#include "rotohull/rot_cohomology.hpp"
#include "rotohull/space_groups.hpp"
#include "rotohull/tiling_models.hpp"

namespace rotohull::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitAmbiguous = 4;

/// Parsed command line.
struct RunConfig {
  std::string command;
  std::string subcommand;
  std::string model = "cube-lattice";
  std::string group = "2O";
  std::string module = "trivial";
  std::string system = "sturmian-cube";
  std::string spec = "sturmian-cube";
  std::string cover = "2O";
  std::string target = "C_2";
  std::string ring = "Z";
  std::size_t n_max = 0;
  std::size_t depth = 5;
  std::uint64_t budget = kDefaultHomBudget;
  std::string format = "markdown";
  bool strict = false;
  bool primary = false;
  bool force = false;
  bool show_invariants = false;
  std::vector<std::string> files;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// "trivial", "standard", "wedge-K" or a JSON module file.
inline GModule resolve_module(const std::string& selector, const GroupPtr& G) {
  if (selector == "trivial") return GModule::trivial(G, 1);
  if (selector == "standard") return GModule::standard(G);
  if (selector.rfind("wedge-", 0) == 0) {
    std::size_t k = 0;
    try {
      k = std::stoul(selector.substr(6));
    } catch (...) {
      throw ValidationError("bad module selector " + selector);
    }
    return exterior_power(GModule::standard(G), k);
  }
  return gmodule_from_json(nlohmann::json::parse(read_file(selector)), G);
}

inline std::vector<std::string> builtin_space_group_names() {
  return {"sturmian-cube", "cube-lattice", "codim1-d2", "codim1-d3"};
}

/// Built-in extension names, "codim1-dN", a JSON ExtensionSpec, or a presentation text file.
inline GroupPresentation resolve_presentation(const std::string& selector) {
  if (selector == "sturmian-cube") return extension_presentation(sturmian_cube_extension());
  if (selector == "cube-lattice") return extension_presentation(lattice_extension(shared_group("O")));
  if (selector.rfind("codim1-d", 0) == 0) {
    std::size_t d = 0;
    try {
      d = std::stoul(selector.substr(8));
    } catch (...) {
      throw ValidationError("bad space-group selector " + selector);
    }
    if (d < 2) throw ValidationError("codim1 family needs d >= 2");
    return codim1_space_group(d);
  }
  const std::string text = read_file(selector);
  if (ends_with(selector, ".json")) return extension_presentation(extension_from_json(nlohmann::json::parse(text)));
  return parse_presentation(text);
}

inline nlohmann::json presentation_to_json(const GroupPresentation& P) {
  nlohmann::json rels = nlohmann::json::array();
  for (const auto& r : P.relators) rels.push_back(P.word_to_string(r));
  nlohmann::json out{{"generators", P.generators}, {"relators", rels}, {"metadata", P.metadata}};
  if (P.quotient) {
    nlohmann::json images = nlohmann::json::object();
    for (std::size_t i = 0; i < P.generators.size(); ++i)
      images[P.generators[i]] = P.quotient->labels[static_cast<std::size_t>(P.quotient_images[i])];
    out["quotient"] = {{"group", P.quotient->name}, {"images", images}};
  }
  return out;
}

inline nlohmann::json column_to_json(const CohomologyColumn& c) {
  nlohmann::json degrees = nlohmann::json::array();
  for (std::size_t n = 0; n < c.size(); ++n) {
    nlohmann::json d{{"n", n}};
    if (c.ring.is_field())
      d["dimension"] = c.dimensions[n];
    else
      d["group"] = group_to_json(c.integral[n]);
    degrees.push_back(std::move(d));
  }
  return {{"group", c.group}, {"ring", c.ring.name()}, {"degrees", degrees}};
}

inline std::string column_to_markdown(const CohomologyColumn& c, const std::string& module, bool primary) {
  std::ostringstream os;
  os << "Cohomology of " << c.group << " with coefficients " << module << " over " << c.ring.name() << "\n\n| n | H^n |\n|---|---|\n";
  for (std::size_t n = 0; n < c.size(); ++n)
    os << "| " << n << " | " << (c.ring.is_field() ? std::to_string(c.dimensions[n]) : c.integral[n].to_string(primary)) << " |\n";
  return os.str();
}

inline std::string render_vector(const IntVector& v, const std::vector<std::string>& labels) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    const bool neg = v[i] < 0;
    const Int mag = neg ? Int(-v[i]) : v[i];
    if (out.empty())
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    if (mag != 1) out += mag.get_str() + "*";
    out += i < labels.size() ? labels[i] : "e" + std::to_string(i + 1);
  }
  return out.empty() ? "0" : out;
}

// Each command writes to `out` and returns an exit status.

inline int cmd_group_cohomology(const RunConfig& c, std::ostream& out) {
  const GroupPtr G = shared_group(c.group);
  const GModule M = resolve_module(c.module, G);
  const std::size_t top = c.n_max ? c.n_max : 4;
  const auto col = group_cohomology(M, top, Ring::parse(c.ring));
  if (c.format == "json") {
    auto j = column_to_json(col);
    j["module"] = c.module;
    out << j.dump(2) << '\n';
  } else {
    out << column_to_markdown(col, c.module, c.primary);
  }
  return kExitOk;
}

inline int cmd_spaceform(const RunConfig& c, std::ostream& out) {
  const GroupPtr G = shared_group(c.group);
  const GModule M = resolve_module(c.module, G);
  const auto col = spaceform_cohomology(M, Ring::parse(c.ring));
  if (c.format == "json") {
    auto j = column_to_json(col);
    j["module"] = c.module;
    j["space"] = "S^3/" + G->name;
    out << j.dump(2) << '\n';
  } else {
    out << column_to_markdown(col, c.module, c.primary);
  }
  return kExitOk;
}

inline int cmd_e2(const RunConfig& c, std::ostream& out, bool borel) {
  const TilingModel model = resolve_model(c.model);
  const Ring ring = Ring::parse(c.ring);
  const E2Page page = borel ? borel_e2_page(model, c.n_max ? c.n_max : 4, ring) : e2_page_3d(model, ring);
  if (c.format == "json")
    out << to_json(page).dump(2) << '\n';
  else
    out << render_markdown(page, c.primary);
  return kExitOk;
}

inline int finish_table(const RunConfig& c, const CohomologyTable& t, std::ostream& out) {
  if (c.format == "json")
    out << to_json(t).dump(2) << '\n';
  else
    out << render_markdown(t, c.primary);
  return c.strict && !t.certified() ? kExitAmbiguous : kExitOk;
}

inline int cmd_assemble(const RunConfig& c, std::ostream& out) {
  return finish_table(c, assemble_3d(resolve_model(c.model), c.force), out);
}

inline int cmd_planar(const RunConfig& c, std::ostream& out) { return finish_table(c, planar_cohomology(resolve_model(c.model)), out); }

inline int cmd_rational(const RunConfig& c, std::ostream& out) {
  const TilingModel model = resolve_model(c.model);
  const auto ranks = rational_cohomology(model);
  std::vector<IntMatrix> bases;
  for (const auto& M : model.cohomology.degrees) bases.push_back(invariants(M).basis);
  auto labels = [&](std::size_t k) {
    return model.name == "sturmian-cube" ? wedge_basis_labels(k) : std::vector<std::string>{};
  };
  if (c.format == "json") {
    nlohmann::json inv = nlohmann::json::array();
    for (std::size_t k = 0; k < bases.size(); ++k) {
      nlohmann::json vecs = nlohmann::json::array();
      for (std::size_t j = 0; j < bases[k].cols(); ++j) vecs.push_back(render_vector(bases[k].column(j), labels(k)));
      inv.push_back({{"k", k}, {"rank", bases[k].cols()}, {"basis", vecs}});
    }
    out << nlohmann::json{{"model", model.name}, {"ring", "Q"}, {"ranks", ranks}, {"invariants", inv}}.dump(2) << '\n';
    return kExitOk;
  }
  out << "Rational cohomology of the rotational hull of " << model.name << "\n\n| n | dim H^n(Q) |\n|---|---|\n";
  for (std::size_t n = 0; n < ranks.size(); ++n) out << "| " << n << " | " << ranks[n] << " |\n";
  if (c.show_invariants) {
    out << '\n';
    for (std::size_t k = 0; k < bases.size(); ++k) {
      out << "invariants in degree " << k << " (rank " << bases[k].cols() << ")\n";
      for (std::size_t j = 0; j < bases[k].cols(); ++j) out << "  " << render_vector(bases[k].column(j), labels(k)) << '\n';
    }
  }
  return kExitOk;
}

inline int cmd_point_group(const RunConfig& c, std::ostream& out) {
  const auto report = point_group_scan(resolve_patch_system(c.system), c.n_max ? c.n_max : 8);
  if (c.format == "json")
    out << to_json(report).dump(2) << '\n';
  else
    out << render_markdown(report);
  return c.strict && report.verdict == PointGroupReport::Verdict::Inconclusive ? kExitAmbiguous : kExitOk;
}

inline int cmd_space_group(const RunConfig& c, std::ostream& out) {
  GroupPresentation P = resolve_presentation(c.spec);
  if (c.subcommand == "pullback") P = central_pullback(P, shared_group(c.cover));
  if (c.subcommand == "present" || c.subcommand == "pullback") {
    if (c.format == "json")
      out << presentation_to_json(P).dump(2) << '\n';
    else
      out << P.to_text();
    return kExitOk;
  }
  if (c.subcommand == "abelianize") {
    const auto ab = abelianization(P);
    if (c.format == "json")
      out << nlohmann::json{{"spec", c.spec}, {"abelianization", group_to_json(ab)}}.dump(2) << '\n';
    else
      out << "abelianization of " << c.spec << ": " << ab.to_string(c.primary) << '\n';
    return kExitOk;
  }
  const GroupPtr S = shared_group(c.target);
  const auto count = count_homs(P, *S, c.budget);
  if (c.format == "json")
    out << nlohmann::json{{"spec", c.spec}, {"target", S->name}, {"homomorphisms", count}}.dump(2) << '\n';
  else
    out << "homomorphisms " << c.spec << " -> " << S->name << ": " << count << '\n';
  return kExitOk;
}

inline int cmd_certify_resolution(const RunConfig& c, std::ostream& out) {
  const GroupPtr G = shared_group(c.group);
  const FreeResolution& R = cached_resolution(G, c.depth);
  if (c.format == "json") {
    out << nlohmann::json{{"group", G->name},
                          {"depth", R.max_degree()},
                          {"ranks", R.ranks},
                          {"passed", R.certificate.passed},
                          {"message", R.certificate.message}}
               .dump(2)
        << '\n';
  } else {
    out << "resolution of " << G->name << " to depth " << R.max_degree() << "\nranks:";
    for (auto r : R.ranks) out << ' ' << r;
    out << "\ncertificate: " << (R.certificate.passed ? "passed" : "FAILED") << " (" << R.certificate.message << ")\n";
  }
  return R.certificate.passed ? kExitOk : kExitValidation;
}

}  // namespace detail

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

namespace detail {

/// First path where `actual` departs from `expected`; object keys absent from `expected` are ignored.
inline std::optional<std::string> golden_mismatch(const nlohmann::json& expected, const nlohmann::json& actual, const std::string& path = "") {
  if (expected.is_object()) {
    if (!actual.is_object()) return path + ": expected an object";
    for (const auto& [key, value] : expected.items()) {
      if (!actual.contains(key)) return path + "/" + key + ": missing";
      if (auto m = golden_mismatch(value, actual.at(key), path + "/" + key)) return m;
    }
    return std::nullopt;
  }
  if (expected.is_array()) {
    if (!actual.is_array() || actual.size() != expected.size()) return path + ": expected an array of length " + std::to_string(expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
      if (auto m = golden_mismatch(expected[i], actual[i], path + "/" + std::to_string(i))) return m;
    return std::nullopt;
  }
  if (expected != actual) return path + ": expected " + expected.dump() + ", got " + actual.dump();
  return std::nullopt;
}

/// Golden file: {"args": [...], "expected": <subset of the command's JSON output>}.
inline int cmd_compare_golden(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.files.empty()) throw ValidationError("compare-golden: no golden files given");
  int status = kExitOk;
  for (const auto& file : c.files) {
    const auto golden = nlohmann::json::parse(read_file(file));
    auto args = golden.at("args").get<std::vector<std::string>>();
    args.push_back("--format");
    args.push_back("json");
    std::ostringstream produced, errors;
    const int code = run(args, produced, errors);
    if (code != kExitOk) {
      out << "FAIL " << file << ": exit " << code << ' ' << errors.str();
      status = kExitFailure;
      continue;
    }
    const auto actual = nlohmann::json::parse(produced.str());
    if (const auto mismatch = golden_mismatch(golden.at("expected"), actual); !mismatch) {
      out << "PASS " << file << '\n';
    } else {
      out << "FAIL " << file << ": " << *mismatch << '\n';
      status = kExitFailure;
    }
  }
  (void)err;
  return status;
}

}  // namespace detail

/// Parses `args` (without the program name), runs the command, and returns the exit status.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cohomology and space groups of rotational tiling hulls", "rotohull"};
  app.require_subcommand(1);
  RunConfig c;
  const std::vector<std::string> formats{"markdown", "json"};

  auto common = [&](CLI::App* s) {
    s->add_option("--format", c.format, "Output format")->check(CLI::IsMember(formats));
    s->add_flag("--primary-decomposition", c.primary, "Render torsion per prime");
    s->add_flag("--strict", c.strict, "Exit 4 when the result is only ambiguous");
  };
  auto* gc = app.add_subcommand("group-cohomology", "H^n(G; M) from a certified free resolution");
  auto* sf = app.add_subcommand("spaceform", "H^n(S^3/G; M) for a quaternionic G");
  for (auto* s : {gc, sf}) {
    s->add_option("--group", c.group, "Built-in group name");
    s->add_option("--module", c.module, "trivial, standard, wedge-K or a JSON module file");
    s->add_option("--ring", c.ring, "Z, Q or F<p>");
    common(s);
  }
  gc->add_option("--n-max", c.n_max, "Top degree (default 4)");
  auto* e2 = app.add_subcommand("e2", "E2 page over the space form S^3/G");
  auto* be2 = app.add_subcommand("borel-e2", "E2 page of the Borel construction");
  auto* as = app.add_subcommand("assemble", "Integral cohomology of the rotational hull (d = 3)");
  auto* ra = app.add_subcommand("rational", "Rational cohomology of the rotational hull");
  auto* pl = app.add_subcommand("planar", "Integral cohomology of the rotational hull (d = 2)");
  for (auto* s : {e2, be2, as, ra, pl}) {
    s->add_option("--model", c.model, "Built-in model name or JSON model file");
    common(s);
  }
  e2->add_option("--ring", c.ring, "Z, Q or F<p>");
  be2->add_option("--ring", c.ring, "Z, Q or F<p>");
  be2->add_option("--n-max", c.n_max, "Top column (default 4)");
  as->add_flag("--force", c.force, "Assemble even without an invariant skeleton");
  ra->add_flag("--show-invariants", c.show_invariants, "List the invariant basis in each degree");
  auto* pg = app.add_subcommand("point-group", "Empirical point group of a patch system");
  pg->add_option("--system", c.system, "Built-in system name or JSON descriptor");
  pg->add_option("--n-max", c.n_max, "Largest patch radius (default 8)");
  common(pg);
  auto* sg = app.add_subcommand("space-group", "Presentations of topological space groups");
  sg->require_subcommand(1);
  for (const std::string name : {"present", "pullback", "abelianize", "count-homs"}) {
    auto* s = sg->add_subcommand(name);
    s->add_option("--spec", c.spec, "Built-in name, JSON extension spec or presentation file");
    common(s);
    if (name == "pullback") s->add_option("--cover", c.cover, "Double cover of the quotient");
    if (name == "count-homs") {
      s->add_option("--target", c.target, "Finite target group");
      s->add_option("--budget", c.budget, "Maximal number of generator assignments");
    }
  }
  auto* cr = app.add_subcommand("certify-resolution", "Build and certify a free resolution");
  cr->add_option("--group", c.group, "Built-in group name");
  cr->add_option("--depth", c.depth, "Resolution length (default 5)");
  common(cr);
  auto* cg = app.add_subcommand("compare-golden", "Compare command output against golden JSON files");
  cg->add_option("files", c.files, "Golden files")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  for (auto* s : app.get_subcommands()) {
    c.command = s->get_name();
    for (auto* sub : s->get_subcommands()) c.subcommand = sub->get_name();
  }

  try {
    if (c.command == "group-cohomology") return detail::cmd_group_cohomology(c, out);
    if (c.command == "spaceform") return detail::cmd_spaceform(c, out);
    if (c.command == "e2") return detail::cmd_e2(c, out, false);
    if (c.command == "borel-e2") return detail::cmd_e2(c, out, true);
    if (c.command == "assemble") return detail::cmd_assemble(c, out);
    if (c.command == "rational") return detail::cmd_rational(c, out);
    if (c.command == "planar") return detail::cmd_planar(c, out);
    if (c.command == "point-group") return detail::cmd_point_group(c, out);
    if (c.command == "space-group") return detail::cmd_space_group(c, out);
    if (c.command == "certify-resolution") return detail::cmd_certify_resolution(c, out);
    if (c.command == "compare-golden") return detail::cmd_compare_golden(c, out, err);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  err << "usage error: unknown command\n";
  return kExitUsage;
}

}  // namespace rotohull::cli

#endif  // ROTOHULL_CLI_HPP
