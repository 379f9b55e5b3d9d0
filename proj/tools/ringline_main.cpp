// Command line interface: materializes projective lines over finite rings
// given textual ring specifications, exports their relation graphs, and runs
// the map-classification machinery and named verification suites.
//
// Exit codes: 0 success (for `verify`: overall report pass), 1 failed
// verification report, 2 usage/parse/cap/file errors, 3 theorem violation,
// 4 unexpected internal error.  All output is buffered and emitted once, to
// stdout or to the --output file.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ringline/errors.hpp"
#include "ringline/morphisms.hpp"
#include "ringline/projline.hpp"
#include "ringline/ring.hpp"
#include "ringline/ringspec.hpp"
#include "ringline/serialize.hpp"
#include "ringline/verify.hpp"

namespace {

using namespace ringline;

struct CommonOpts {
  std::string format = "text";
  std::string output;
  std::size_t cap = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o,
                const std::vector<std::string>& formats = {"text", "json"}) {
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
  cmd->add_option("--output", o.output, "write output to this file instead of stdout");
  cmd->add_option("--cap", o.cap, "override the ring order cap for this invocation");
}

void apply_cap(const CommonOpts& o) {
  if (o.cap > 0) set_max_ring_order(o.cap);
}

void emit(const CommonOpts& o, const std::string& text) {
  if (o.output.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + o.output);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::invalid_argument("cannot write output file: " + o.output);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::size_t> load_map_file(const std::string& path, const LinePtr& src,
                                       const LinePtr& tgt, bool require_bijection) {
  std::vector<std::size_t> table = parse_index_array_json(read_file(path));
  if (table.size() != src->size())
    throw std::invalid_argument(
        "invalid map file: expected " + std::to_string(src->size()) +
        " entries over the canonical point order, got " + std::to_string(table.size()));
  std::vector<char> seen(tgt->size(), 0);
  bool bijective = table.size() == tgt->size();
  for (std::size_t v : table) {
    if (v >= tgt->size())
      throw std::invalid_argument("invalid map file: index " + std::to_string(v) +
                                  " out of range (target has " +
                                  std::to_string(tgt->size()) + " points)");
    if (seen[v]) bijective = false;
    seen[v] = 1;
  }
  if (require_bijection && !bijective)
    throw std::invalid_argument("invalid map file: not a bijection");
  return table;
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

// --- enumerate -------------------------------------------------------------

int cmd_enumerate(const CommonOpts& o, const std::string& spec) {
  apply_cap(o);
  LinePtr L = ProjectiveLine::enumerate_points(ring_from_spec(spec));
  if (o.format == "json") {
    emit(o, line_to_json(*L));
    return 0;
  }
  const auto& classes = L->parallel_classes();
  std::size_t mn = L->size(), mx = 0;
  for (const auto& c : classes) {
    mn = std::min(mn, c.size());
    mx = std::max(mx, c.size());
  }
  std::string sizes = mn == mx ? "size " + std::to_string(mn)
                               : "sizes " + std::to_string(mn) + ".." + std::to_string(mx);
  emit(o, std::to_string(L->size()) + " points, " + std::to_string(classes.size()) +
              " parallel classes of " + sizes + "\n");
  return 0;
}

// --- relations ---------------------------------------------------------------

int cmd_relations(const CommonOpts& o, const std::string& spec) {
  apply_cap(o);
  LinePtr L = ProjectiveLine::enumerate_points(ring_from_spec(spec));
  const BitMatrix& D = L->distant_matrix();
  const BitMatrix& A = L->adjacency_matrix();
  std::size_t dmin = L->size(), dmax = 0, amin = L->size(), amax = 0;
  for (std::size_t i = 0; i < L->size(); ++i) {
    std::size_t dd = D.row_count_ones(i), ad = A.row_count_ones(i);
    dmin = std::min(dmin, dd);
    dmax = std::max(dmax, dd);
    amin = std::min(amin, ad);
    amax = std::max(amax, ad);
  }
  auto degree = [](std::size_t mn, std::size_t mx) {
    return mn == mx ? std::to_string(mn)
                    : std::to_string(mn) + ".." + std::to_string(mx);
  };
  if (o.format == "json") {
    nlohmann::json j;
    j["format"] = kSerializationFormat;
    j["ring"] = nlohmann::json::parse(ring_metadata_json(L->ring()));
    j["points"] = L->size();
    j["distant_degree"] = dmax;
    j["adjacency_degree"] = amax;
    j["parallel_class_count"] = L->parallel_classes().size();
    j["degrees_uniform"] = (dmin == dmax && amin == amax);
    emit(o, j.dump(2) + "\n");
    return 0;
  }
  emit(o, std::to_string(L->size()) + " points, distant degree " +
              degree(dmin, dmax) + ", adjacency degree " + degree(amin, amax) + "\n");
  return 0;
}

// --- export-graph ------------------------------------------------------------

int cmd_export_graph(const CommonOpts& o, const std::string& spec,
                     const std::string& which) {
  apply_cap(o);
  LinePtr L = ProjectiveLine::enumerate_points(ring_from_spec(spec));
  GraphRelation rel =
      which == "adjacency" ? GraphRelation::Adjacency : GraphRelation::Distant;
  emit(o, o.format == "json" ? graph_to_json(*L, rel) : graph_to_dot(*L, rel));
  return 0;
}

// --- aut ---------------------------------------------------------------------

int cmd_aut(const CommonOpts& o, const std::string& spec) {
  apply_cap(o);
  LinePtr L = ProjectiveLine::enumerate_points(ring_from_spec(spec));
  std::uint64_t count = count_dis_automorphisms(L);
  if (o.format == "json") {
    nlohmann::json j;
    j["format"] = kSerializationFormat;
    j["ring"] = nlohmann::json::parse(ring_metadata_json(L->ring()));
    j["count"] = count;
    j["method"] = "exhaustive backtracking";
    emit(o, j.dump(2) + "\n");
    return 0;
  }
  emit(o, std::to_string(count) + " dis-automorphisms of P(" + L->ring().tag() +
              ") (method: exhaustive backtracking)\n");
  return 0;
}

// --- check-map -----------------------------------------------------------------

int cmd_check_map(const CommonOpts& o, const std::string& spec,
                  const std::string& spec2, const std::string& map_path) {
  apply_cap(o);
  LinePtr src = ProjectiveLine::enumerate_points(ring_from_spec(spec));
  LinePtr tgt = ProjectiveLine::enumerate_points(ring_from_spec(spec2));
  PointMap f = raw_point_map(src, tgt, load_map_file(map_path, src, tgt, false));
  bool dis = is_dis_morphism(f);
  bool dis_iso = is_dis_isomorphism(f);
  bool par_iso = is_par_isomorphism(f);
  bool adj_iso = is_adj_isomorphism(f);
  if (o.format == "json") {
    nlohmann::json j;
    j["format"] = kSerializationFormat;
    j["source"] = nlohmann::json::parse(ring_metadata_json(src->ring()));
    j["target"] = nlohmann::json::parse(ring_metadata_json(tgt->ring()));
    j["dis_morphism"] = dis;
    j["dis_isomorphism"] = dis_iso;
    j["parallel_isomorphism"] = par_iso;
    j["adjacency_isomorphism"] = adj_iso;
    emit(o, j.dump(2) + "\n");
    return 0;
  }
  emit(o, "dis-morphism: " + yesno(dis) + "\ndis-isomorphism: " + yesno(dis_iso) +
              "\nparallel-isomorphism: " + yesno(par_iso) +
              "\nadjacency-isomorphism: " + yesno(adj_iso) + "\n");
  return 0;
}

// --- factorize -----------------------------------------------------------------

int cmd_factorize(const CommonOpts& o, const std::string& spec,
                  const std::string& map_path) {
  apply_cap(o);
  LinePtr L = ProjectiveLine::enumerate_points(ring_from_spec(spec));
  PointMap f = raw_point_map(L, L, load_map_file(map_path, L, L, true));
  DecompositionCertificate cert = factorize_dis_automorphism(f);
  bool exact = certificate_point_map(cert, L, L).table == f.table;
  if (!exact)
    throw TheoremViolation("factorize: certificate does not recompose to the input");
  if (o.format == "json") {
    emit(o, certificate_to_json(cert));
    return 0;
  }
  const FiniteRing& R = cert.gamma.ring;
  std::string out = "kind: " + to_string(cert.kind) + "\n";
  out += "alpha: " + to_string(cert.alpha.kind) + " " + cert.alpha.source.tag() +
         " -> " + cert.alpha.target.tag() + "\n";
  out += "gamma: [[" + element_literal(R, cert.gamma.a) + ", " +
         element_literal(R, cert.gamma.b) + "], [" + element_literal(R, cert.gamma.c) +
         ", " + element_literal(R, cert.gamma.d) + "]]\n";
  out += "recomposition: exact\n";
  emit(o, out);
  return 0;
}

// --- decompose-product ------------------------------------------------------

int cmd_decompose_product(const CommonOpts& o, const std::string& spec,
                          const std::string& map_path) {
  apply_cap(o);
  LinePtr L = ProjectiveLine::enumerate_points(ring_from_spec(spec));
  PointMap f = raw_point_map(L, L, load_map_file(map_path, L, L, true));
  ProductDecomposition dec = decompose_product_dis_iso(f);
  if (o.format == "json") {
    emit(o, product_decomposition_to_json(dec));
    return 0;
  }
  std::string out = "sigma:";
  for (std::size_t s : dec.sigma) out += " " + std::to_string(s);
  out += "\n";
  for (std::size_t k = 0; k < dec.components.size(); ++k) {
    const PointMap& c = dec.components[k];
    out += "component " + std::to_string(k) + ": P(" + c.source->ring().tag() +
           ") -> P(" + c.target->ring().tag() + "), table [";
    for (std::size_t i = 0; i < c.table.size(); ++i) {
      if (i) out += ", ";
      out += std::to_string(c.table[i]);
    }
    out += "]\n";
  }
  emit(o, out);
  return 0;
}

// --- jordan --------------------------------------------------------------------

int cmd_jordan(const CommonOpts& o, const std::string& spec,
               const std::string& spec2) {
  apply_cap(o);
  FiniteRing R = ring_from_spec(spec);
  FiniteRing S = spec2.empty() ? R : ring_from_spec(spec2);
  std::vector<RingMapTable> maps = enumerate_jordan_isomorphisms(R, S);
  if (o.format == "json") {
    nlohmann::json j;
    j["format"] = kSerializationFormat;
    j["source"] = nlohmann::json::parse(ring_metadata_json(R));
    j["target"] = nlohmann::json::parse(ring_metadata_json(S));
    j["count"] = maps.size();
    nlohmann::json list = nlohmann::json::array();
    for (const RingMapTable& w : maps) {
      nlohmann::json entry;
      entry["kind"] = to_string(w.kind);
      entry["table"] = w.table;
      try {
        entry["certificate"] =
            nlohmann::json::parse(jordan_certificate_to_json(classify_jordan(w), S));
      } catch (const std::invalid_argument&) {
        entry["certificate"] = nullptr;
      }
      list.push_back(entry);
    }
    j["maps"] = list;
    emit(o, j.dump(2) + "\n");
    return 0;
  }
  std::string out = std::to_string(maps.size()) + " jordan isomorphisms from " +
                    R.tag() + " to " + S.tag() + "\n";
  for (std::size_t i = 0; i < maps.size(); ++i) {
    out += "map " + std::to_string(i) + ": " + to_string(maps[i].kind);
    try {
      JordanCertificate cert = classify_jordan(maps[i]);
      if (cert.sigma.empty()) {
        out += ", conjugation form with g = " + element_literal(S, cert.g);
      } else {
        out += ", factor permutation (";
        for (std::size_t k = 0; k < cert.sigma.size(); ++k) {
          if (k) out += " ";
          out += std::to_string(cert.sigma[k]);
        }
        out += ")";
      }
    } catch (const std::invalid_argument&) {
      out += ", no classification for this ring family";
    }
    out += "\n";
  }
  emit(o, out);
  return 0;
}

// --- verify --------------------------------------------------------------------

int cmd_verify(const CommonOpts& o, const std::string& suite, std::uint64_t seed,
               bool seed_given) {
  apply_cap(o);
  VerifyOptions options;
  if (seed_given) options.seed = seed;
  Report rep = run_verify_suite(suite, options);
  emit(o, o.format == "json" ? report_to_json(rep) : report_to_text(rep));
  return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projective lines over finite rings: enumeration, relations, "
               "morphism classification, and verification suites"};
  app.require_subcommand(1);

  CommonOpts o_enum, o_rel, o_export, o_aut, o_check, o_fact, o_dec, o_jordan,
      o_verify;
  std::string spec, spec2, which = "distant", map_path, suite;
  std::uint64_t seed = 0;

  CLI::App* c_enum = app.add_subcommand("enumerate", "point count and parallel classes");
  c_enum->add_option("spec", spec, "ring specification, e.g. \"M(2,GF(2)) x Z4\"")->required();
  add_common(c_enum, o_enum);

  CLI::App* c_rel = app.add_subcommand("relations", "distant/adjacency degree summary");
  c_rel->add_option("spec", spec, "ring specification")->required();
  add_common(c_rel, o_rel);

  CLI::App* c_export = app.add_subcommand("export-graph", "write a relation graph");
  c_export->add_option("spec", spec, "ring specification")->required();
  c_export->add_option("--which", which, "relation to export")
      ->check(CLI::IsMember({"distant", "adjacency"}))
      ->capture_default_str();
  o_export.format = "dot";
  add_common(c_export, o_export, {"dot", "json"});

  CLI::App* c_aut = app.add_subcommand("aut", "count dis-automorphisms");
  c_aut->add_option("spec", spec, "ring specification")->required();
  add_common(c_aut, o_aut);

  CLI::App* c_check = app.add_subcommand("check-map", "relation-preservation verdicts for a point map");
  c_check->add_option("spec", spec, "source ring specification")->required();
  c_check->add_option("spec2", spec2, "target ring specification")->required();
  c_check->add_option("map", map_path, "map file (JSON array of target indices)")->required();
  add_common(c_check, o_check);

  CLI::App* c_fact = app.add_subcommand("factorize", "certificate (kind, alpha, gamma) for a dis-automorphism");
  c_fact->add_option("spec", spec, "ring specification (matrix ring over a field)")->required();
  c_fact->add_option("map", map_path, "map file (JSON array of target indices)")->required();
  add_common(c_fact, o_fact);

  CLI::App* c_dec = app.add_subcommand("decompose-product", "factor permutation and components of a dis-automorphism");
  c_dec->add_option("spec", spec, "ring specification (product ring)")->required();
  c_dec->add_option("map", map_path, "map file (JSON array of target indices)")->required();
  add_common(c_dec, o_dec);

  CLI::App* c_jordan = app.add_subcommand("jordan", "enumerate and classify jordan isomorphisms");
  c_jordan->add_option("spec", spec, "source ring specification")->required();
  c_jordan->add_option("spec2", spec2, "target ring specification (defaults to the source)");
  add_common(c_jordan, o_jordan);

  CLI::App* c_verify = app.add_subcommand("verify", "run a named verification suite");
  c_verify->add_option("suite", suite, "suite name (or \"all\")")->required();
  CLI::Option* seed_opt =
      c_verify->add_option("--seed", seed, "seed for the randomized suites");
  add_common(c_verify, o_verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_enum->parsed()) return cmd_enumerate(o_enum, spec);
    if (c_rel->parsed()) return cmd_relations(o_rel, spec);
    if (c_export->parsed()) return cmd_export_graph(o_export, spec, which);
    if (c_aut->parsed()) return cmd_aut(o_aut, spec);
    if (c_check->parsed()) return cmd_check_map(o_check, spec, spec2, map_path);
    if (c_fact->parsed()) return cmd_factorize(o_fact, spec, map_path);
    if (c_dec->parsed()) return cmd_decompose_product(o_dec, spec, map_path);
    if (c_jordan->parsed()) return cmd_jordan(o_jordan, spec, spec2);
    if (c_verify->parsed())
      return cmd_verify(o_verify, suite, seed, seed_opt->count() > 0);
    std::fprintf(stderr, "error: no subcommand selected\n");
    return 2;
  } catch (const SpecParseError& e) {
    std::fprintf(stderr, "spec error: %s\n", e.what());
    return 2;
  } catch (const TheoremViolation& e) {
    std::fprintf(stderr, "theorem violation: %s\n", e.what());
    return 3;
  } catch (const CapExceeded& e) {
    std::fprintf(stderr, "cap exceeded: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 4;
  }
}
