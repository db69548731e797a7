#include "symreeb/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "symreeb/error.hpp"
#include "symreeb/pl_measure.hpp"

namespace symreeb {

namespace {

double interp(const std::vector<double>& z, const std::vector<double>& y, double x) {
  if (x <= z.front()) return y.front();
  if (x >= z.back()) return y.back();
  const auto it = std::upper_bound(z.begin(), z.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - z.begin());
  const double t = (x - z[i - 1]) / (z[i] - z[i - 1]);
  return y[i - 1] + t * (y[i] - y[i - 1]);
}

}  // namespace

std::vector<double> edge_moments(const MeasuredReebGraph& g, int edge, int lmax) {
  if (lmax < 0 || lmax > kMaxMomentOrder) {
    throw Error(ErrorCode::OutOfRange, "moment order must lie in 0..16");
  }
  const ReebEdge& e = g.edges.at(edge);
  std::vector<double> out(lmax + 1, 0.0);
  if (static_cast<int>(e.moments.size()) > lmax) {
    std::copy(e.moments.begin(), e.moments.begin() + lmax + 1, out.begin());
  } else {
    const auto& P = e.profile;
    for (std::size_t i = 1; i < P.size(); ++i) {
      const double mid = 0.5 * (P.z[i - 1] + P.z[i]);
      double w = P.mu[i] - P.mu[i - 1];
      for (int l = 0; l <= lmax; ++l) {
        out[l] += w;
        w *= mid;
      }
    }
  }
  out[0] = e.profile.mass;
  return out;
}

double global_moment(const MeasuredReebGraph& g, int l) {
  double sum = 0.0;
  for (const auto& e : g.edges) sum += edge_moments(g, e.id, l)[l];
  return sum;
}

double period_function(const MeasuredReebGraph& g, int edge, double z) {
  if (edge < 0 || edge >= static_cast<int>(g.edges.size())) {
    throw Error(ErrorCode::OutOfRange, "edge " + std::to_string(edge) + " does not exist");
  }
  const auto& P = g.edges[edge].profile;
  if (!(z > P.z.front() && z < P.z.back())) {
    throw Error(ErrorCode::OutOfRange, "level " + std::to_string(z) + " is not interior to edge " +
                                           std::to_string(edge));
  }
  const auto it = std::upper_bound(P.z.begin(), P.z.end(), z);
  const std::size_t i = static_cast<std::size_t>(it - P.z.begin());
  double h = 0.5 * (P.z[i] - P.z[i - 1]);
  h = std::min({h, z - P.z.front(), P.z.back() - z});
  return (interp(P.z, P.mu, z + h) - interp(P.z, P.mu, z - h)) / (2.0 * h);
}

SaddleFit fit_saddle(const MeasuredReebGraph& g, int vertex, const FitOptions& opts) {
  if (vertex < 0 || vertex >= static_cast<int>(g.vertices.size()) ||
      g.vertices[vertex].kind != CriticalKind::Saddle) {
    throw Error(ErrorCode::OutOfRange, "vertex " + std::to_string(vertex) + " is not a saddle");
  }
  const auto in = g.in_edges(vertex);
  const auto out = g.out_edges(vertex);
  SaddleFit fit;
  fit.vertexId = vertex;
  if (in.size() == 1 && out.size() == 2) {
    fit.edges = {in[0], out[0], out[1]};
  } else if (in.size() == 2 && out.size() == 1) {
    fit.edges = {out[0], in[0], in[1]};
  } else {
    throw Error(ErrorCode::OutOfRange, "vertex " + std::to_string(vertex) + " is not 3-valent");
  }
  const double fv = g.vertices[vertex].f;
  double radius = opts.radius;
  if (radius <= 0.0) {
    double shortest = std::numeric_limits<double>::infinity();
    for (int e : fit.edges) {
      const auto& E = g.edges[e];
      shortest = std::min(shortest, g.vertices[E.dst].f - g.vertices[E.src].f);
    }
    radius = 0.25 * shortest;
  }
  const double cutoff = opts.innerCutoff >= 0.0 ? opts.innerCutoff
                                                : 8.0 * g.vertices[vertex].ringSpread;

  for (int side = 0; side < 3; ++side) {
    const ReebEdge& E = g.edges[fit.edges[side]];
    const bool fromSrc = E.src == vertex;
    std::vector<double> ts, ys;
    for (std::size_t i = 0; i < E.profile.size(); ++i) {
      const double t = E.profile.z[i] - fv;
      const double at = std::abs(t);
      if (at == 0.0 || at > radius || at < cutoff) continue;
      ts.push_back(t);
      ys.push_back(fromSrc ? E.profile.mu[i] : E.profile.mass - E.profile.mu[i]);
    }
    fit.samples[side] = static_cast<int>(ts.size());
    if (static_cast<int>(ts.size()) < opts.minSamples) {
      throw Error(ErrorCode::InsufficientSamples,
                  "edge " + std::to_string(E.id) + " has " + std::to_string(ts.size()) +
                      " samples within the fit window");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(ts.size());
    const int cols = opts.secondOrder ? 5 : 3;
    Eigen::MatrixXd A(n, cols);
    Eigen::VectorXd y(n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const double t = ts[r];
      const double lg = std::log(std::abs(t));
      A(r, 0) = t * lg;
      A(r, 1) = 1.0;
      A(r, 2) = t;
      if (opts.secondOrder) {
        A(r, 3) = t * t * lg;
        A(r, 4) = t * t;
      }
      y(r) = ys[r];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double cond = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1)
                                              : std::numeric_limits<double>::infinity();
    fit.conditionNumber = std::max(fit.conditionNumber, cond);
    if (!(cond <= opts.maxCondition)) {
      throw Error(ErrorCode::IllConditionedFit,
                  "condition number " + std::to_string(cond) + " on edge " + std::to_string(E.id));
    }
    const Eigen::VectorXd coef = svd.solve(y);
    fit.logCoefficients[side] = coef(0);
    fit.etaValues[side] = coef(1);
    fit.etaSlopes[side] = coef(2);
  }
  fit.psiPrime0 = 0.5 * fit.logCoefficients[0];
  const double eps[3] = {2.0, -1.0, -1.0};
  const double lp = std::log(std::abs(fit.psiPrime0));
  for (int i = 0; i < 3; ++i) {
    fit.zetaFirstOrder[i] = -eps[i] * lp + fit.etaSlopes[i] / fit.psiPrime0;
  }
  return fit;
}

double profile_deviation(const MeasuredReebGraph& g1, int e1, const MeasuredReebGraph& g2, int e2) {
  const ReebEdge& A = g1.edges[e1];
  const ReebEdge& B = g2.edges[e2];
  const double a0 = g1.vertices[A.src].f, a1 = g1.vertices[A.dst].f;
  const double b0 = g2.vertices[B.src].f, b1 = g2.vertices[B.dst].f;
  const bool same = a0 == b0 && a1 == b1;
  auto toB = [&](double z) { return same ? z : b0 + (z - a0) / (a1 - a0) * (b1 - b0); };
  auto toA = [&](double z) { return same ? z : a0 + (z - b0) / (b1 - b0) * (a1 - a0); };
  double dev = 0.0;
  for (std::size_t i = 0; i < A.profile.size(); ++i) {
    const double other = interp(B.profile.z, B.profile.mu, toB(A.profile.z[i]));
    dev = std::max(dev, std::abs(A.profile.mu[i] - other));
  }
  for (std::size_t i = 0; i < B.profile.size(); ++i) {
    const double other = interp(A.profile.z, A.profile.mu, toA(B.profile.z[i]));
    dev = std::max(dev, std::abs(B.profile.mu[i] - other));
  }
  return dev;
}

namespace {

struct BundleChoice {
  std::vector<int> target;  // G2 edge for each G1 edge of the bundle
  double cost = 0.0;
  double massDev = 0.0;
  double profDev = 0.0;
};

}  // namespace

std::vector<IsoCertificate> enumerate_isomorphisms(const MeasuredReebGraph& g1,
                                                   const MeasuredReebGraph& g2, double tolF,
                                                   double tolMass, double tolProfile,
                                                   std::size_t limit) {
  std::vector<IsoCertificate> result;
  const int nv = static_cast<int>(g1.vertices.size());
  const int ne = static_cast<int>(g1.edges.size());
  if (nv != static_cast<int>(g2.vertices.size()) || ne != static_cast<int>(g2.edges.size())) {
    return result;
  }
  auto byF = [](const MeasuredReebGraph& g) {
    std::vector<int> order(g.vertices.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return g.vertices[a].f < g.vertices[b].f; });
    return order;
  };
  const auto o1 = byF(g1), o2 = byF(g2);
  IsoCertificate base;
  base.vertexMap.assign(nv, -1);
  base.edgeMap.assign(ne, -1);
  for (int i = 0; i < nv; ++i) {
    const auto& v1 = g1.vertices[o1[i]];
    const auto& v2 = g2.vertices[o2[i]];
    if (v1.kind != v2.kind) return result;
    const double df = std::abs(v1.f - v2.f);
    if (!(df <= tolF)) return result;
    base.maxFDeviation = std::max(base.maxFDeviation, df);
    base.vertexMap[o1[i]] = o2[i];
  }

  std::map<std::pair<int, int>, std::vector<int>> b1, b2;
  for (const auto& e : g1.edges) b1[{base.vertexMap[e.src], base.vertexMap[e.dst]}].push_back(e.id);
  for (const auto& e : g2.edges) b2[{e.src, e.dst}].push_back(e.id);
  if (b1.size() != b2.size()) return result;

  std::vector<std::vector<BundleChoice>> options;
  std::vector<const std::vector<int>*> sources;
  for (const auto& [key, edges1] : b1) {
    const auto it = b2.find(key);
    if (it == b2.end() || it->second.size() != edges1.size()) return result;
    std::vector<int> perm = it->second;
    std::sort(perm.begin(), perm.end());
    std::vector<BundleChoice> choices;
    do {
      BundleChoice ch;
      bool ok = true;
      for (std::size_t k = 0; k < edges1.size() && ok; ++k) {
        const double dm = std::abs(g1.edges[edges1[k]].profile.mass - g2.edges[perm[k]].profile.mass);
        if (!(dm <= tolMass)) {
          ok = false;
          break;
        }
        const double dp = profile_deviation(g1, edges1[k], g2, perm[k]);
        if (!(dp <= tolProfile)) {
          ok = false;
          break;
        }
        ch.massDev = std::max(ch.massDev, dm);
        ch.profDev = std::max(ch.profDev, dp);
        ch.cost += dp;
      }
      if (ok) {
        ch.target = perm;
        choices.push_back(std::move(ch));
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (choices.empty()) return result;
    std::stable_sort(choices.begin(), choices.end(),
                     [](const BundleChoice& a, const BundleChoice& b) { return a.cost < b.cost; });
    options.push_back(std::move(choices));
    sources.push_back(&edges1);
  }

  // cartesian product, odometer order (best choice of each bundle first)
  std::vector<std::size_t> idx(options.size(), 0);
  std::vector<std::pair<double, IsoCertificate>> all;
  while (true) {
    IsoCertificate cert = base;
    double cost = 0.0;
    for (std::size_t b = 0; b < options.size(); ++b) {
      const BundleChoice& ch = options[b][idx[b]];
      for (std::size_t k = 0; k < sources[b]->size(); ++k) cert.edgeMap[(*sources[b])[k]] = ch.target[k];
      cert.maxMassDeviation = std::max(cert.maxMassDeviation, ch.massDev);
      cert.maxProfileDeviation = std::max(cert.maxProfileDeviation, ch.profDev);
      cost += ch.cost;
    }
    all.emplace_back(cost, std::move(cert));
    if (all.size() >= limit) break;
    std::size_t b = 0;
    while (b < idx.size() && ++idx[b] == options[b].size()) idx[b++] = 0;
    if (b == idx.size()) break;
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& p : all) result.push_back(std::move(p.second));
  return result;
}

std::optional<IsoCertificate> graphs_isomorphic(const MeasuredReebGraph& g1,
                                                const MeasuredReebGraph& g2, double tolF,
                                                double tolMass, double tolProfile) {
  auto all = enumerate_isomorphisms(g1, g2, tolF, tolMass, tolProfile, 1 << 12);
  if (all.empty()) return std::nullopt;
  return std::move(all.front());
}

bool compatible(const MeasuredReebGraph& g, int genus, double area, double tol) {
  return g.betti1() == genus && std::abs(g.totalMass - area) <= tol * area;
}

std::string invariants_csv(const MeasuredReebGraph& g, int lmax, const std::vector<SaddleFit>& fits) {
  std::ostringstream out;
  out.precision(17);
  out << "edgeId,src,dst,fSrc,fDst,mass";
  for (int l = 0; l <= lmax; ++l) out << ",I" << l;
  out << '\n';
  for (const auto& e : g.edges) {
    out << e.id << ',' << e.src << ',' << e.dst << ',' << g.vertices[e.src].f << ','
        << g.vertices[e.dst].f << ',' << e.profile.mass;
    for (double m : edge_moments(g, e.id, lmax)) out << ',' << m;
    out << '\n';
  }
  if (!fits.empty()) {
    out << "saddleId,trunk,branch1,branch2,psiPrime0,c0,c1,c2,eta0,eta1,eta2,zeta0,zeta1,zeta2\n";
    for (const auto& s : fits) {
      out << s.vertexId << ',' << s.edges[0] << ',' << s.edges[1] << ',' << s.edges[2] << ','
          << s.psiPrime0;
      for (double c : s.logCoefficients) out << ',' << c;
      for (double c : s.etaValues) out << ',' << c;
      for (double c : s.zetaFirstOrder) out << ',' << c;
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace symreeb
