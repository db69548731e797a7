#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "symreeb/error.hpp"
#include "symreeb/mesh.hpp"

namespace symreeb {

namespace {

using nlohmann::json;

void check_indices(const TriMeshField& m) {
  const int n = static_cast<int>(m.vertices.size());
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    for (int v : m.triangles[t]) {
      if (v < 0 || v >= n) {
        throw Error(ErrorCode::Index, "triangle " + std::to_string(t) + " references vertex " +
                                          std::to_string(v) + " of " + std::to_string(n));
      }
    }
  }
  if (m.cochain) {
    for (const auto& e : m.cochain->edges) {
      if (e[0] < 0 || e[0] >= n || e[1] < 0 || e[1] >= n) {
        throw Error(ErrorCode::Index, "cochain edge references a missing vertex");
      }
    }
  }
}

TriMeshField parse_json(const std::string& bytes) {
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  TriMeshField m;
  try {
    if (!j.is_object()) throw Error(ErrorCode::Parse, "top level is not an object");
    for (const auto& p : j.at("vertices")) {
      if (p.size() != 3) throw Error(ErrorCode::Parse, "vertex is not a 3-vector");
      m.vertices.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
    }
    for (const auto& t : j.at("triangles")) {
      if (t.size() != 3) throw Error(ErrorCode::Parse, "triangle is not a triple");
      m.triangles.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
    }
    m.field = j.at("field").get<std::vector<double>>();
    if (j.contains("area_override") && !j["area_override"].is_null()) {
      m.areaOverride = j["area_override"].get<std::vector<double>>();
    }
    if (j.contains("cochain") && !j["cochain"].is_null()) {
      Cochain c;
      for (const auto& e : j["cochain"].at("edges")) {
        if (e.size() != 2) throw Error(ErrorCode::Parse, "cochain edge is not a pair");
        c.edges.push_back({e[0].get<int>(), e[1].get<int>()});
      }
      c.values = j["cochain"].at("values").get<std::vector<double>>();
      if (c.values.size() != c.edges.size()) {
        throw Error(ErrorCode::Parse, "cochain edges/values length mismatch");
      }
      m.cochain = std::move(c);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  if (m.field.size() != m.vertices.size()) {
    throw Error(ErrorCode::Parse, "field length does not match vertex count");
  }
  if (m.areaOverride && m.areaOverride->size() != m.triangles.size()) {
    throw Error(ErrorCode::Parse, "area_override length does not match triangle count");
  }
  check_indices(m);
  return m;
}

TriMeshField parse_off(const std::string& bytes) {
  std::istringstream in(bytes);
  std::string line;
  std::vector<std::string> body;  // non-comment lines
  std::vector<std::string> fieldLines;
  bool inField = false;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      if (line.find("FIELD", first) != std::string::npos) inField = true;
      continue;
    }
    (inField ? fieldLines : body).push_back(line);
  }
  if (body.empty()) throw Error(ErrorCode::Parse, "empty OFF input");
  std::istringstream hdr(body[0]);
  std::string magic;
  hdr >> magic;
  std::size_t cursor = 1;
  long nv = 0, nf = 0, ne = 0;
  if (magic != "OFF") {
    if (magic.rfind("OFF", 0) == 0) throw Error(ErrorCode::Parse, "unsupported OFF variant " + magic);
    // header may omit the magic word
    std::istringstream counts(body[0]);
    if (!(counts >> nv >> nf)) throw Error(ErrorCode::Parse, "missing OFF header");
  } else {
    if (!(hdr >> nv >> nf)) {
      if (body.size() < 2) throw Error(ErrorCode::Parse, "missing OFF counts");
      std::istringstream counts(body[cursor++]);
      if (!(counts >> nv >> nf)) throw Error(ErrorCode::Parse, "bad OFF counts");
    }
  }
  (void)ne;
  if (nv < 0 || nf < 0) throw Error(ErrorCode::Parse, "negative OFF counts");
  if (body.size() < cursor + static_cast<std::size_t>(nv + nf)) {
    throw Error(ErrorCode::Parse, "OFF body shorter than declared counts");
  }
  TriMeshField m;
  for (long i = 0; i < nv; ++i) {
    std::istringstream ls(body[cursor++]);
    Vec3 p{};
    if (!(ls >> p[0] >> p[1] >> p[2])) throw Error(ErrorCode::Parse, "bad OFF vertex line");
    m.vertices.push_back(p);
  }
  for (long i = 0; i < nf; ++i) {
    std::istringstream ls(body[cursor++]);
    int k = 0;
    Tri t{};
    if (!(ls >> k) || k != 3) throw Error(ErrorCode::Parse, "OFF face is not a triangle");
    if (!(ls >> t[0] >> t[1] >> t[2])) throw Error(ErrorCode::Parse, "bad OFF face line");
    m.triangles.push_back(t);
  }
  if (cursor != body.size()) throw Error(ErrorCode::Parse, "trailing data after OFF faces");
  for (const auto& fl : fieldLines) {
    std::istringstream ls(fl);
    double v = 0.0;
    while (ls >> v) m.field.push_back(v);
    if (!ls.eof()) throw Error(ErrorCode::Parse, "bad field value line");
  }
  if (m.field.size() != m.vertices.size()) {
    throw Error(ErrorCode::Parse, "field block has " + std::to_string(m.field.size()) +
                                      " values for " + std::to_string(m.vertices.size()) +
                                      " vertices");
  }
  check_indices(m);
  return m;
}

}  // namespace

TriMeshField load_mesh(const std::string& bytes, InputFormat format) {
  return format == InputFormat::Json ? parse_json(bytes) : parse_off(bytes);
}

TriMeshField load_mesh_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const bool off = path.size() >= 4 && path.compare(path.size() - 4, 4, ".off") == 0;
  return load_mesh(ss.str(), off ? InputFormat::Off : InputFormat::Json);
}

std::string mesh_to_json(const TriMeshField& mesh) {
  json j;
  j["vertices"] = json::array();
  for (const auto& p : mesh.vertices) j["vertices"].push_back({p[0], p[1], p[2]});
  j["triangles"] = json::array();
  for (const auto& t : mesh.triangles) j["triangles"].push_back({t[0], t[1], t[2]});
  j["field"] = mesh.field;
  if (mesh.areaOverride) j["area_override"] = *mesh.areaOverride;
  if (mesh.cochain) {
    json c;
    c["edges"] = json::array();
    for (const auto& e : mesh.cochain->edges) c["edges"].push_back({e[0], e[1]});
    c["values"] = mesh.cochain->values;
    j["cochain"] = c;
  }
  return j.dump();
}

std::string mesh_to_off(const TriMeshField& mesh) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.triangles.size() << " 0\n";
  for (const auto& p : mesh.vertices) out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "# FIELD\n";
  for (double f : mesh.field) out << f << '\n';
  return out.str();
}

}  // namespace symreeb
