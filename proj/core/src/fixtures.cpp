#include "symreeb/fixtures.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

namespace symreeb::fixtures {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int wrap(int i, int n) { return ((i % n) + n) % n; }

}  // namespace

TriMeshField tetrahedron() {
  TriMeshField m;
  m.vertices = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  m.triangles = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  m.field = {0, 1, 2, 3};
  return m;
}

TriMeshField octahedron() {
  TriMeshField m;
  m.vertices = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  m.triangles = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                 {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  for (const auto& p : m.vertices) m.field.push_back(p[2]);
  return m;
}

TriMeshField sphere(int n) {
  TriMeshField m;
  std::map<std::array<int, 3>, int> index;
  auto vertex = [&](const std::array<int, 3>& key) {
    auto [it, fresh] = index.try_emplace(key, static_cast<int>(m.vertices.size()));
    if (fresh) {
      const double x = key[0], y = key[1], z = key[2];
      const double r = std::sqrt(x * x + y * y + z * z);
      m.vertices.push_back({x / r, y / r, z / r});
    }
    return it->second;
  };
  for (int sx : {1, -1}) {
    for (int sy : {1, -1}) {
      for (int sz : {1, -1}) {
        const bool ccw = sx * sy * sz > 0;
        auto P = [&](int i, int j) { return vertex({sx * i, sy * j, sz * (n - i - j)}); };
        auto add = [&](int a, int b, int c) {
          if (ccw) m.triangles.push_back({a, b, c});
          else m.triangles.push_back({a, c, b});
        };
        for (int i = 0; i < n; ++i) {
          for (int j = 0; i + j < n; ++j) {
            add(P(i, j), P(i + 1, j), P(i, j + 1));
            if (i + j < n - 1) add(P(i + 1, j), P(i + 1, j + 1), P(i, j + 1));
          }
        }
      }
    }
  }
  for (const auto& p : m.vertices) m.field.push_back(p[2]);
  return m;
}

TriMeshField torus(int nu, int nv, double R, double r, double tilt) {
  TriMeshField m;
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      const double th = kTwoPi * i / nu, ph = kTwoPi * j / nv;
      const double w = R + r * std::cos(ph);
      m.vertices.push_back({w * std::cos(th), r * std::sin(ph), w * std::sin(th)});
    }
  }
  auto id = [&](int i, int j) { return wrap(i, nu) + nu * wrap(j, nv); };
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      // (theta, phi)-counterclockwise faces point inward, so reverse them
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i + 1, j)});
      m.triangles.push_back({id(i, j), id(i, j + 1), id(i + 1, j + 1)});
    }
  }
  for (const auto& p : m.vertices) m.field.push_back(p[2] + tilt * p[0] + 0.37 * tilt * p[1]);
  return m;
}

TriMeshField flat_torus(int n, GridPattern pattern, const std::function<double(double, double)>& f) {
  TriMeshField m;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m.vertices.push_back({double(i) / n, double(j) / n, 0.0});
  auto id = [&](int i, int j) { return wrap(i, n) + n * wrap(j, n); };
  if (pattern == GridPattern::Diagonal) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
        m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      }
    }
    m.areaOverride = std::vector<double>(m.triangles.size(), 0.5 / (double(n) * n));
  } else {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) m.vertices.push_back({(i + 0.5) / n, (j + 0.5) / n, 0.0});
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const int c = n * n + i + n * j;
        m.triangles.push_back({id(i, j), id(i + 1, j), c});
        m.triangles.push_back({id(i + 1, j), id(i + 1, j + 1), c});
        m.triangles.push_back({id(i + 1, j + 1), id(i, j + 1), c});
        m.triangles.push_back({id(i, j + 1), id(i, j), c});
      }
    }
    m.areaOverride = std::vector<double>(m.triangles.size(), 0.25 / (double(n) * n));
  }
  resample(m, f);
  return m;
}

void resample(TriMeshField& mesh, const std::function<double(double, double)>& f) {
  mesh.field.resize(mesh.vertices.size());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    mesh.field[v] = f(mesh.vertices[v][0], mesh.vertices[v][1]);
  }
}

double wave_field(double x, double y) {
  return std::cos(kTwoPi * y) + 0.1 * std::cos(kTwoPi * x);
}

double two_maxima_field(double x, double y) {
  const double bump = 0.5 * (1.0 + std::cos(kTwoPi * y));
  return std::cos(kTwoPi * y) + 0.1 * std::cos(kTwoPi * x) +
         0.3 * bump * std::cos(2.0 * kTwoPi * x) + 0.05 * std::sin(kTwoPi * x) * bump;
}

TriMeshField slab(int W, int H, int D, const std::vector<Box>& holes, double a, double b) {
  auto solid = [&](int x, int y, int z) {
    if (x < 0 || y < 0 || z < 0 || x >= W || y >= H || z >= D) return false;
    for (const auto& h : holes)
      if (x >= h.x0 && x < h.x1 && y >= h.y0 && y < h.y1) return false;
    return true;
  };
  TriMeshField m;
  std::map<std::array<int, 3>, int> index;
  auto vertex = [&](std::array<int, 3> p) {
    auto [it, fresh] = index.try_emplace(p, static_cast<int>(m.vertices.size()));
    if (fresh) m.vertices.push_back({double(p[0]), double(p[1]), double(p[2])});
    return it->second;
  };
  for (int x = 0; x < W; ++x) {
    for (int y = 0; y < H; ++y) {
      for (int z = 0; z < D; ++z) {
        if (!solid(x, y, z)) continue;
        const std::array<int, 3> cell{x, y, z};
        for (int d = 0; d < 3; ++d) {
          for (int s : {1, -1}) {
            std::array<int, 3> nb = cell;
            nb[d] += s;
            if (solid(nb[0], nb[1], nb[2])) continue;
            const int u = (d + 1) % 3, v = (d + 2) % 3;
            std::array<int, 3> base = cell;
            if (s > 0) base[d] += 1;
            std::array<std::array<int, 3>, 4> q;
            const int du[4] = {0, 1, 1, 0}, dv[4] = {0, 0, 1, 1};
            for (int k = 0; k < 4; ++k) {
              q[k] = base;
              q[k][u] += du[k];
              q[k][v] += dv[k];
            }
            int id[4];
            for (int k = 0; k < 4; ++k) id[k] = vertex(q[k]);
            // split along the diagonal through the even corners
            const int r = (q[0][0] + q[0][1] + q[0][2]) % 2 == 0 ? 0 : 1;
            const int c0 = id[r], c1 = id[r + 1], c2 = id[(r + 2) % 4], c3 = id[(r + 3) % 4];
            if (s > 0) {
              m.triangles.push_back({c0, c1, c2});
              m.triangles.push_back({c0, c2, c3});
            } else {
              m.triangles.push_back({c0, c2, c1});
              m.triangles.push_back({c0, c3, c2});
            }
          }
        }
      }
    }
  }
  for (const auto& p : m.vertices) m.field.push_back(p[0] + a * p[1] + b * p[2]);
  return m;
}

namespace {
constexpr int kDumbW = 11, kDumbH = 5, kDumbD = 3;
}

TriMeshField pretzel_dumbbell() {
  return slab(kDumbW, kDumbH, kDumbD, {{2, 5, 1, 4}, {6, 9, 1, 4}}, 0.1234567, 0.0345678);
}

TriMeshField pretzel_theta() {
  return slab(11, 7, 3, {{2, 9, 1, 3}, {4, 7, 4, 6}}, 0.1234567, 0.0345678);
}

std::vector<int> pretzel_dumbbell_half_turn() {
  const TriMeshField m = pretzel_dumbbell();
  std::map<std::array<long, 3>, int> index;
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    const auto& p = m.vertices[v];
    index[{std::lround(p[0]), std::lround(p[1]), std::lround(p[2])}] = static_cast<int>(v);
  }
  std::vector<int> perm(m.vertices.size());
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    const auto& p = m.vertices[v];
    perm[v] = index.at({std::lround(p[0]), kDumbH - std::lround(p[1]), kDumbD - std::lround(p[2])});
  }
  return perm;
}

std::vector<int> flat_torus_quarter_turn(int n) {
  // grid vertex (i, j) -> (-j, i); centre (i + 1/2, j + 1/2) -> (-j - 1/2, i + 1/2)
  std::vector<int> perm(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      perm[i + n * j] = wrap(-j, n) + n * wrap(i, n);
      perm[n * n + i + n * j] = n * n + wrap(-j - 1, n) + n * wrap(i, n);
    }
  }
  return perm;
}

std::vector<int> flat_torus_shift_y(int n, GridPattern pattern, int k) {
  const int blocks = pattern == GridPattern::Crossed ? 2 : 1;
  std::vector<int> perm(blocks * n * n);
  for (int b = 0; b < blocks; ++b)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) perm[b * n * n + i + n * j] = b * n * n + i + n * wrap(j + k, n);
  return perm;
}

}  // namespace symreeb::fixtures
