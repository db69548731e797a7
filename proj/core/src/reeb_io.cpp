#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "symreeb/error.hpp"
#include "symreeb/reeb.hpp"

namespace symreeb {

using nlohmann::json;

std::string graph_to_json(const MeasuredReebGraph& g) {
  json j;
  j["vertices"] = json::array();
  for (const auto& v : g.vertices) {
    j["vertices"].push_back({{"id", v.id}, {"f", v.f}, {"kind", to_string(v.kind)}});
  }
  j["edges"] = json::array();
  for (const auto& e : g.edges) {
    json prof = json::array();
    for (std::size_t i = 0; i < e.profile.size(); ++i) {
      prof.push_back({e.profile.z[i], e.profile.mu[i]});
    }
    json je = {{"id", e.id}, {"src", e.src}, {"dst", e.dst}, {"mass", e.profile.mass},
               {"profile", prof}};
    if (!e.moments.empty()) je["moments"] = e.moments;
    j["edges"].push_back(je);
  }
  j["total_mass"] = g.totalMass;
  return j.dump();
}

MeasuredReebGraph graph_from_json(const std::string& text) {
  MeasuredReebGraph g;
  try {
    const json j = json::parse(text);
    for (const auto& jv : j.at("vertices")) {
      ReebVertex v;
      v.id = jv.at("id").get<int>();
      v.f = jv.at("f").get<double>();
      const std::string k = jv.at("kind").get<std::string>();
      if (k == "minimum") v.kind = CriticalKind::Minimum;
      else if (k == "maximum") v.kind = CriticalKind::Maximum;
      else if (k == "saddle") v.kind = CriticalKind::Saddle;
      else throw Error(ErrorCode::Parse, "unknown vertex kind " + k);
      g.vertices.push_back(v);
    }
    for (const auto& je : j.at("edges")) {
      ReebEdge e;
      e.id = je.at("id").get<int>();
      e.src = je.at("src").get<int>();
      e.dst = je.at("dst").get<int>();
      for (const auto& s : je.at("profile")) {
        e.profile.z.push_back(s.at(0).get<double>());
        e.profile.mu.push_back(s.at(1).get<double>());
      }
      e.profile.mass = je.contains("mass") ? je["mass"].get<double>()
                                           : (e.profile.mu.empty() ? 0.0 : e.profile.mu.back());
      if (je.contains("moments")) e.moments = je["moments"].get<std::vector<double>>();
      g.edges.push_back(std::move(e));
    }
    g.totalMass = j.at("total_mass").get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  const int nv = static_cast<int>(g.vertices.size());
  for (int i = 0; i < nv; ++i) {
    if (g.vertices[i].id != i) throw Error(ErrorCode::Parse, "vertex ids must be 0..n-1 in order");
  }
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (e.id != static_cast<int>(i)) throw Error(ErrorCode::Parse, "edge ids must be 0..m-1 in order");
    if (e.src < 0 || e.src >= nv || e.dst < 0 || e.dst >= nv) {
      throw Error(ErrorCode::Index, "edge " + std::to_string(e.id) + " references a missing vertex");
    }
    if (e.profile.size() < 2) throw Error(ErrorCode::Parse, "profile needs at least two samples");
  }
  return g;
}

std::string graph_to_dot(const MeasuredReebGraph& g) {
  std::ostringstream out;
  out.precision(10);
  out << "digraph reeb {\n";
  for (const auto& v : g.vertices) {
    out << "  v" << v.id << " [label=\"" << to_string(v.kind) << "@" << v.f << "\"];\n";
  }
  std::vector<int> order(g.edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& x = g.edges[a];
    const auto& y = g.edges[b];
    const double xs = g.vertices[x.src].f, ys = g.vertices[y.src].f;
    if (xs != ys) return xs < ys;
    const double xd = g.vertices[x.dst].f, yd = g.vertices[y.dst].f;
    if (xd != yd) return xd < yd;
    return x.id < y.id;
  });
  for (int i : order) {
    const auto& e = g.edges[i];
    out << "  v" << e.src << " -> v" << e.dst << " [label=\"" << e.profile.mass << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace symreeb
