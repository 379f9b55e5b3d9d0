#include "ringline/serialize.hpp"

#include <stdexcept>

#include "json.hpp"

namespace ringline {
namespace {

using nlohmann::json;

std::string dot_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

// Polynomial rendering c_{k-1} x^{k-1} + ... + c_1 x + c_0 for a proper
// field extension element encoded as sum c_i p^i.
std::string gf_poly_literal(unsigned p, unsigned k, Elem a) {
  std::vector<unsigned> digits(k, 0);
  for (unsigned i = 0; i < k; ++i) {
    digits[i] = a % p;
    a /= p;
  }
  std::string out;
  for (unsigned i = k; i-- > 0;) {
    unsigned c = digits[i];
    if (c == 0) continue;
    if (!out.empty()) out += '+';
    if (i == 0) {
      out += std::to_string(c);
    } else {
      if (c != 1) out += std::to_string(c);
      out += 'x';
      if (i > 1) {
        out += '^';
        out += std::to_string(i);
      }
    }
  }
  return out.empty() ? "0" : out;
}

json ring_metadata(const FiniteRing& R) {
  json j;
  j["order"] = R.order();
  j["structure_tag"] = R.tag();
  if (R.kind() == RingKind::GaloisField) {
    json mod = json::array();
    for (Elem c : R.gf_modulus()) mod.push_back(c);
    j["modulus_poly"] = mod;
  }
  if (R.kind() == RingKind::Product) {
    json fs = json::array();
    for (const FiniteRing& f : R.factors()) fs.push_back(ring_metadata(f));
    j["factors"] = fs;
  }
  return j;
}

json edge_list(const BitMatrix& m) {
  json edges = json::array();
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j)
      if (m.get(i, j)) edges.push_back(json::array({i, j}));
  return edges;
}

json point_list(const ProjectiveLine& L) {
  json pts = json::array();
  for (const ProjPoint& p : L.points())
    pts.push_back(json{{"rep_a", p.a}, {"rep_b", p.b}});
  return pts;
}

const BitMatrix& relation_matrix(const ProjectiveLine& L, GraphRelation which) {
  return which == GraphRelation::Distant ? L.distant_matrix()
                                         : L.adjacency_matrix();
}

json point_map_body(const PointMap& f) {
  json j;
  j["source"] = ring_metadata(f.source->ring());
  j["target"] = ring_metadata(f.target->ring());
  j["provenance"] = to_string(f.provenance);
  j["table"] = f.table;
  return j;
}

json ring_map_body(const RingMapTable& f) {
  json j;
  j["source"] = ring_metadata(f.source);
  j["target"] = ring_metadata(f.target);
  j["kind"] = to_string(f.kind);
  j["reverses_products_too"] = f.anti_too;
  j["table"] = f.table;
  return j;
}

json mat2_body(const RingMat2& m) {
  return json::array({json::array({m.a, m.b}), json::array({m.c, m.d})});
}

json mat2_literals(const RingMat2& m) {
  return json::array(
      {json::array({element_literal(m.ring, m.a), element_literal(m.ring, m.b)}),
       json::array({element_literal(m.ring, m.c), element_literal(m.ring, m.d)})});
}

json certificate_body(const DecompositionCertificate& cert) {
  json j;
  j["kind"] = to_string(cert.kind);
  j["alpha"] = ring_map_body(cert.alpha);
  j["gamma"] = mat2_body(cert.gamma);
  j["gamma_literal"] = mat2_literals(cert.gamma);
  j["sigma"] = cert.sigma;
  json comps = json::array();
  for (const DecompositionCertificate& c : cert.component_certs)
    comps.push_back(certificate_body(c));
  j["components"] = comps;
  return j;
}

std::string dump_document(json j) {
  j["format"] = kSerializationFormat;
  return j.dump(2) + "\n";
}

}  // namespace

std::string to_string(GraphRelation which) {
  return which == GraphRelation::Distant ? "distant" : "adjacency";
}

std::string element_literal(const FiniteRing& R, Elem a) {
  if (!R.valid()) throw std::invalid_argument("element_literal: invalid ring");
  if (a >= R.order()) throw std::invalid_argument("element_literal: out of range");
  switch (R.kind()) {
    case RingKind::GaloisField:
      if (R.gf_k() > 1) return gf_poly_literal(R.gf_p(), R.gf_k(), a);
      return std::to_string(a);
    case RingKind::Matrix: {
      FiniteRing K = R.matrix_base();
      unsigned n = R.matrix_dim();
      std::string out = "[";
      for (unsigned r = 0; r < n; ++r) {
        if (r) out += ',';
        out += '[';
        for (unsigned c = 0; c < n; ++c) {
          if (c) out += ',';
          out += element_literal(K, R.matrix_entry(a, r, c));
        }
        out += ']';
      }
      out += ']';
      return out;
    }
    case RingKind::Dual: {
      FiniteRing K = R.dual_base();
      Elem lo = a % K.order();
      Elem hi = a / K.order();
      if (hi == 0) return element_literal(K, lo);
      std::string eps;
      if (hi == K.one()) {
        eps = "e";
      } else {
        std::string coeff = element_literal(K, hi);
        eps = (coeff.find('+') != std::string::npos ? "(" + coeff + ")" : coeff) + "e";
      }
      if (lo == 0) return eps;
      return element_literal(K, lo) + "+" + eps;
    }
    case RingKind::Product: {
      std::vector<Elem> comps = R.product_decode(a);
      const std::vector<FiniteRing>& fs = R.factors();
      std::string out = "(";
      for (std::size_t i = 0; i < comps.size(); ++i) {
        if (i) out += ", ";
        out += element_literal(fs[i], comps[i]);
      }
      out += ')';
      return out;
    }
    default:
      return std::to_string(a);
  }
}

std::string point_literal(const ProjPoint& p) {
  return "R(" + element_literal(p.ring, p.a) + ", " + element_literal(p.ring, p.b) + ")";
}

std::string ring_metadata_json(const FiniteRing& R) {
  return ring_metadata(R).dump(2) + "\n";
}

std::string ring_to_json(const FiniteRing& R) {
  return dump_document(json{{"ring", ring_metadata(R)}});
}

std::string line_to_json(const ProjectiveLine& L) {
  json j;
  j["ring"] = ring_metadata(L.ring());
  j["points"] = point_list(L);
  j["distant_edges"] = edge_list(L.distant_matrix());
  j["parallel_classes"] = L.parallel_classes();
  j["adjacency_edges"] = edge_list(L.adjacency_matrix());
  return dump_document(std::move(j));
}

std::string graph_to_dot(const ProjectiveLine& L, GraphRelation which) {
  const BitMatrix& m = relation_matrix(L, which);
  std::string out = "graph " + to_string(which) + " {\n";
  out += "  graph [label=\"" + dot_escape(L.ring().tag()) + ", " +
         to_string(which) + "\"];\n";
  for (std::size_t i = 0; i < L.size(); ++i)
    out += "  p" + std::to_string(i) + " [label=\"" +
           dot_escape(point_literal(L.point(i))) + "\"];\n";
  for (std::size_t i = 0; i < L.size(); ++i)
    for (std::size_t j = i + 1; j < L.size(); ++j)
      if (m.get(i, j))
        out += "  p" + std::to_string(i) + " -- p" + std::to_string(j) + ";\n";
  out += "}\n";
  return out;
}

std::string graph_to_json(const ProjectiveLine& L, GraphRelation which) {
  json j;
  j["ring"] = ring_metadata(L.ring());
  j["relation"] = to_string(which);
  json pts = json::array();
  for (std::size_t i = 0; i < L.size(); ++i) {
    const ProjPoint& p = L.point(i);
    pts.push_back(json{{"index", i},
                       {"rep_a", p.a},
                       {"rep_b", p.b},
                       {"label", point_literal(p)}});
  }
  j["points"] = pts;
  j["edges"] = edge_list(relation_matrix(L, which));
  return dump_document(std::move(j));
}

std::string subspace_to_json(const Subspace& X) {
  json rows = json::array();
  for (std::size_t r = 0; r < X.basis().rows; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < X.basis().cols; ++c)
      row.push_back(X.basis().at(r, c));
    rows.push_back(row);
  }
  json j;
  j["q"] = X.table() ? X.table()->q() : 0;
  j["ambient_dim"] = X.ambient();
  j["basis"] = rows;
  return j.dump(2) + "\n";
}

std::string space_to_json(const PartialLinearSpace& S) {
  json j;
  j["points"] = S.num_points;
  j["lines"] = S.lines;
  return j.dump(2) + "\n";
}

std::string point_map_to_json(const PointMap& f) {
  return dump_document(point_map_body(f));
}

std::string ring_map_to_json(const RingMapTable& f) {
  return dump_document(ring_map_body(f));
}

std::string certificate_to_json(const DecompositionCertificate& cert) {
  return dump_document(certificate_body(cert));
}

std::string product_decomposition_to_json(const ProductDecomposition& dec) {
  json j;
  j["sigma"] = dec.sigma;
  json comps = json::array();
  for (const PointMap& f : dec.components) comps.push_back(point_map_body(f));
  j["components"] = comps;
  return dump_document(std::move(j));
}

std::string jordan_certificate_to_json(const JordanCertificate& cert,
                                       const FiniteRing& target) {
  json j;
  j["kind"] = to_string(cert.kind);
  if (!cert.beta.table.empty())
    j["beta"] = ring_map_body(cert.beta);
  else
    j["beta"] = nullptr;
  if (cert.sigma.empty() && target.valid()) {
    j["g"] = cert.g;
    j["g_literal"] = element_literal(target, cert.g);
  }
  j["sigma"] = cert.sigma;
  json kinds = json::array();
  for (MapKind k : cert.component_kinds) kinds.push_back(to_string(k));
  j["component_kinds"] = kinds;
  return dump_document(std::move(j));
}

std::vector<std::size_t> parse_index_array_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("invalid map file: ") + e.what());
  }
  if (!j.is_array())
    throw std::invalid_argument("invalid map file: expected a JSON array");
  std::vector<std::size_t> out;
  out.reserve(j.size());
  for (const json& v : j) {
    if (!v.is_number_unsigned())
      throw std::invalid_argument(
          "invalid map file: entries must be non-negative integers");
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

std::string index_array_to_json(const std::vector<std::size_t>& table) {
  return json(table).dump() + "\n";
}

}  // namespace ringline
