#include "fcv/voronoi.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "fcv/error.hpp"

namespace fcv {

namespace {

rvec torus_weights_1d(const NodeSet& nodes) {
  const std::size_t n = nodes.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return nodes.coords(a)[0] < nodes.coords(b)[0]; });
  rvec w(n, 0.0);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double x = nodes.coords(order[i])[0];
    const double prev = nodes.coords(order[(i + n - 1) % n])[0];
    const double next = nodes.coords(order[(i + 1) % n])[0];
    const double gap_left = (i == 0) ? x - prev + 1.0 : x - prev;
    const double gap_right = (i == n - 1) ? next - x + 1.0 : next - x;
    w[order[i]] = 0.5 * (gap_left + gap_right);
  }
  return w;
}

struct Vec2 {
  double x, y;
};

// intersection of a convex polygon with the half-plane {p : dot(p,nrm) <= c}
void clip_halfplane(std::vector<Vec2>& poly, Vec2 nrm, double c) {
  if (poly.empty()) return;
  std::vector<Vec2> out;
  out.reserve(poly.size() + 1);
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    const double da = a.x * nrm.x + a.y * nrm.y - c;
    const double db = b.x * nrm.x + b.y * nrm.y - c;
    if (da <= 0.0) out.push_back(a);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
      const double t = da / (da - db);
      out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  poly = std::move(out);
}

double shoelace_area(const std::vector<Vec2>& poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    s += a.x * b.y - a.y * b.x;
  }
  return 0.5 * std::abs(s);
}

rvec torus_weights_2d(const NodeSet& nodes) {
  const std::size_t n = nodes.size();

  // all 3x3 periodic copies, sorted once by distance rings around each query
  // through a coarse bucket grid
  struct Pt {
    double x, y;
  };
  std::vector<Pt> tiled;
  tiled.reserve(9 * n);
  std::vector<std::size_t> owner;
  owner.reserve(9 * n);
  for (int tx = -1; tx <= 1; ++tx)
    for (int ty = -1; ty <= 1; ++ty)
      for (std::size_t i = 0; i < n; ++i) {
        auto c = nodes.coords(i);
        tiled.push_back({c[0] + tx, c[1] + ty});
        owner.push_back(i);
      }

  rvec w(n, 0.0);
  std::vector<std::pair<double, std::size_t>> cand;
  cand.reserve(tiled.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto c = nodes.coords(i);
    const Vec2 site{c[0], c[1]};

    cand.clear();
    for (std::size_t t = 0; t < tiled.size(); ++t) {
      if (owner[t] == i && tiled[t].x == site.x && tiled[t].y == site.y) continue;
      const double dx = tiled[t].x - site.x, dy = tiled[t].y - site.y;
      cand.emplace_back(dx * dx + dy * dy, t);
    }
    // nearest candidates almost always finish the cell; the tail is sorted
    // only when the security-radius cutoff is not reached early
    const std::size_t head = std::min<std::size_t>(64, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + head, cand.end());
    bool tail_sorted = head == cand.size();

    // start from a generous box; any valid periodic cell fits inside it
    std::vector<Vec2> poly = {{site.x - 1.0, site.y - 1.0},
                              {site.x + 1.0, site.y - 1.0},
                              {site.x + 1.0, site.y + 1.0},
                              {site.x - 1.0, site.y + 1.0}};
    for (std::size_t k = 0; k < cand.size(); ++k) {
      if (k == head && !tail_sorted) {
        std::sort(cand.begin() + head, cand.end());
        tail_sorted = true;
      }
      double rmax2 = 0.0;
      for (const Vec2& v : poly) {
        const double dx = v.x - site.x, dy = v.y - site.y;
        rmax2 = std::max(rmax2, dx * dx + dy * dy);
      }
      // a neighbor farther than twice the current cell radius cannot cut
      if (cand[k].first > 4.0 * rmax2) break;
      const Vec2 nb{tiled[cand[k].second].x, tiled[cand[k].second].y};
      const Vec2 nrm{nb.x - site.x, nb.y - site.y};
      const double cvalue = 0.5 * (nb.x * nb.x + nb.y * nb.y - site.x * site.x - site.y * site.y);
      clip_halfplane(poly, nrm, cvalue);
      if (poly.size() < 3)
        fail_numeric("degenerate Voronoi cell at node " + std::to_string(i));
    }

    double diam2 = 0.0;
    for (const Vec2& a : poly)
      for (const Vec2& b : poly)
        diam2 = std::max(diam2, (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y));
    if (diam2 >= 1.0)
      fail_numeric("Voronoi cell of node " + std::to_string(i) +
                   " has diameter >= 1; the 3x3 tiling construction needs denser nodes");
    w[i] = shoelace_area(poly);
  }
  return w;
}

}  // namespace

rvec voronoi_weights_torus(const NodeSet& nodes) {
  if (nodes.domain().kind != DomainKind::Torus)
    fail_validation("voronoi_weights_torus needs torus nodes");
  const int d = nodes.domain().dim;
  if (d == 1) return torus_weights_1d(nodes);
  if (d == 2) return torus_weights_2d(nodes);
  fail_validation("torus Voronoi weights are implemented for d = 1 and 2 only");
}

rvec voronoi_weights_interval(const NodeSet& nodes) {
  if (nodes.domain().kind != DomainKind::Interval)
    fail_validation("voronoi_weights_interval needs interval nodes");
  const std::size_t n = nodes.size();
  std::vector<std::pair<double, std::size_t>> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = {std::acos(nodes.coords(i)[0]), i};
  std::sort(ys.begin(), ys.end());
  for (std::size_t i = 1; i < n; ++i)
    if (ys[i].first == ys[i - 1].first)
      fail_numeric("duplicate arccos values at nodes " + std::to_string(ys[i - 1].second) + " and " +
                   std::to_string(ys[i].second));
  rvec w(n, 0.0);
  if (n == 1) {
    w[0] = kPi;
    return w;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double wi;
    if (i == 0)
      wi = 0.5 * (ys[0].first + ys[1].first);
    else if (i == n - 1)
      wi = kPi - 0.5 * (ys[n - 2].first + ys[n - 1].first);
    else
      wi = 0.5 * (ys[i + 1].first - ys[i - 1].first);
    w[ys[i].second] = wi;
  }
  return w;
}

namespace {

using Vec3 = std::array<double, 3>;

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// signed volume of the tetrahedron (a,b,c,p) in extended precision; positive
// when p lies on the outward side of the ccw face (a,b,c)
double orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& p) {
  const long double adx = a[0] - p[0], ady = a[1] - p[1], adz = a[2] - p[2];
  const long double bdx = b[0] - p[0], bdy = b[1] - p[1], bdz = b[2] - p[2];
  const long double cdx = c[0] - p[0], cdy = c[1] - p[1], cdz = c[2] - p[2];
  const long double det = adx * (bdy * cdz - bdz * cdy) - ady * (bdx * cdz - bdz * cdx) +
                          adz * (bdx * cdy - bdy * cdx);
  return static_cast<double>(det);
}

struct HullFace {
  int a, b, c;  // vertex indices, oriented outward
};

// incremental convex hull of points on the unit sphere; every input point is
// extreme, so each insertion must see at least one face
std::vector<HullFace> convex_hull(const std::vector<Vec3>& pts) {
  const int n = static_cast<int>(pts.size());
  if (n < 4) fail_validation("spherical Voronoi needs at least 4 nodes");

  // initial non-degenerate tetrahedron
  int i1 = 1;
  while (i1 < n && norm(sub(pts[i1], pts[0])) < 1e-12) ++i1;
  if (i1 == n) fail_numeric("all sphere nodes coincide");
  int i2 = i1 + 1;
  while (i2 < n && norm(cross(sub(pts[i1], pts[0]), sub(pts[i2], pts[0]))) < 1e-12) ++i2;
  if (i2 == n) fail_numeric("all sphere nodes are collinear");
  int i3 = -1;
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = std::abs(orient3d(pts[0], pts[i1], pts[i2], pts[i]));
    if (v > best) {
      best = v;
      i3 = i;
    }
  }
  if (i3 < 0 || best < 1e-12)
    fail_numeric("sphere nodes are coplanar (all on a common great circle)");

  std::vector<HullFace> faces;
  const Vec3 centroid{(pts[0][0] + pts[i1][0] + pts[i2][0] + pts[i3][0]) / 4.0,
                      (pts[0][1] + pts[i1][1] + pts[i2][1] + pts[i3][1]) / 4.0,
                      (pts[0][2] + pts[i1][2] + pts[i2][2] + pts[i3][2]) / 4.0};
  // orient3d(a,b,c,p) is positive when p lies on the anti-normal side of the
  // ccw triangle (a,b,c); outward faces therefore give positive values at
  // the interior centroid
  auto add_face = [&](int a, int b, int c) {
    if (orient3d(pts[a], pts[b], pts[c], centroid) < 0.0) std::swap(b, c);
    faces.push_back({a, b, c});
  };
  add_face(0, i1, i2);
  add_face(0, i1, i3);
  add_face(0, i2, i3);
  add_face(i1, i2, i3);

  for (int p = 0; p < n; ++p) {
    if (p == 0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<char> visible(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const double o = orient3d(pts[faces[f].a], pts[faces[f].b], pts[faces[f].c], pts[p]);
      if (o < -1e-15) {  // p on the outward side: face visible
        visible[f] = 1;
        any = true;
      }
    }
    if (!any)
      fail_numeric("sphere node " + std::to_string(p) +
                   " is not extreme on the hull (duplicate or degenerate configuration)");

    // horizon = edges of visible faces that are not shared by two visible ones
    std::vector<std::pair<int, int>> horizon;
    auto edge_key = [](int u, int v) { return std::pair<int, int>(std::min(u, v), std::max(u, v)); };
    std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> edges;  // key -> directed
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      const int vs[3] = {faces[f].a, faces[f].b, faces[f].c};
      for (int e = 0; e < 3; ++e) {
        const int u = vs[e], v = vs[(e + 1) % 3];
        const auto key = edge_key(u, v);
        auto it = std::find_if(edges.begin(), edges.end(), [&](const auto& q) { return q.first == key; });
        if (it == edges.end())
          edges.push_back({key, {u, v}});
        else
          it->second = {-1, -1};  // interior edge, seen twice
      }
    }
    for (const auto& [key, dir] : edges)
      if (dir.first >= 0) horizon.push_back(dir);

    std::vector<HullFace> next;
    next.reserve(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (!visible[f]) next.push_back(faces[f]);
    for (const auto& [u, v] : horizon) next.push_back({u, v, p});
    faces = std::move(next);
  }
  return faces;
}

// spherical triangle excess through the triple product,
//   E = 2 atan2(|a . (b x c)|, 1 + a.b + b.c + c.a).
// Equivalent to L'Huilier's half-side form but without its catastrophic
// cancellation on the sliver triangles that cocircular node rings produce.
double triangle_excess(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double triple = dot(a, cross(b, c));
  const double d = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
  return std::abs(2.0 * std::atan2(std::abs(triple), d));
}

}  // namespace

rvec voronoi_weights_sphere(const NodeSet& nodes) {
  if (nodes.domain().kind != DomainKind::Sphere2)
    fail_validation("voronoi_weights_sphere needs sphere nodes");
  const std::size_t n = nodes.size();
  std::vector<Vec3> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto c = nodes.coords(i);
    pts[i] = {c[0], c[1], c[2]};
  }
  const std::vector<HullFace> faces = convex_hull(pts);

  // Voronoi vertex of each Delaunay triangle: outward facet normal direction.
  // Sliver facets from cocircular node rings cancel badly, so the cross
  // product runs in extended precision.
  std::vector<Vec3> vverts(faces.size());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const Vec3 &a = pts[faces[f].a], &b = pts[faces[f].b], &c = pts[faces[f].c];
    const long double ux = (long double)b[0] - a[0], uy = (long double)b[1] - a[1],
                      uz = (long double)b[2] - a[2];
    const long double vx = (long double)c[0] - a[0], vy = (long double)c[1] - a[1],
                      vz = (long double)c[2] - a[2];
    const long double nx = uy * vz - uz * vy;
    const long double ny = uz * vx - ux * vz;
    const long double nz = ux * vy - uy * vx;
    const long double len = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (!(len > 1e-300L)) fail_numeric("degenerate hull facet");
    vverts[f] = {static_cast<double>(nx / len), static_cast<double>(ny / len),
                 static_cast<double>(nz / len)};
  }

  std::vector<std::vector<std::size_t>> incident(n);
  for (std::size_t f = 0; f < faces.size(); ++f) {
    incident[faces[f].a].push_back(f);
    incident[faces[f].b].push_back(f);
    incident[faces[f].c].push_back(f);
  }

  rvec w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& fs = incident[i];
    if (fs.size() < 3) fail_numeric("node " + std::to_string(i) + " has a degenerate Voronoi cell");
    // order cell vertices around the node axis
    const Vec3 x = pts[i];
    Vec3 ref = std::abs(x[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    Vec3 e1 = cross(x, ref);
    const double e1n = norm(e1);
    e1 = {e1[0] / e1n, e1[1] / e1n, e1[2] / e1n};
    const Vec3 e2 = cross(x, e1);
    std::sort(fs.begin(), fs.end(), [&](std::size_t fa, std::size_t fb) {
      const Vec3& va = vverts[fa];
      const Vec3& vb = vverts[fb];
      return std::atan2(dot(va, e2), dot(va, e1)) < std::atan2(dot(vb, e2), dot(vb, e1));
    });
    double area = 0.0;
    for (std::size_t k = 0; k < fs.size(); ++k)
      area += triangle_excess(x, vverts[fs[k]], vverts[fs[(k + 1) % fs.size()]]);
    w[i] = area;
  }
  return w;
}

rvec voronoi_weights(const NodeSet& nodes) {
  switch (nodes.domain().kind) {
    case DomainKind::Torus: return voronoi_weights_torus(nodes);
    case DomainKind::Interval: return voronoi_weights_interval(nodes);
    case DomainKind::Sphere2: return voronoi_weights_sphere(nodes);
  }
  fail_validation("voronoi_weights: unsupported domain");
}

}  // namespace fcv
