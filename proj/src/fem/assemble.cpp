#include "robin/fem.hpp"

namespace robin {

AssembledForms assemble(const TriMesh& mesh) {
  const auto n = static_cast<Eigen::Index>(mesh.nodes.size());
  std::vector<Eigen::Triplet<double>> tk, tm, tb;
  tk.reserve(9 * mesh.triangles.size());
  tm.reserve(9 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const Point2 p[3] = {mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]};
    const double a = 0.5 * orient(p[0], p[1], p[2]);
    // Gradient of the barycentric coordinate of vertex i is perp(opposite edge) / 2a.
    Point2 g[3];
    for (int i = 0; i < 3; ++i) {
      const Point2 e = p[(i + 2) % 3] - p[(i + 1) % 3];
      g[i] = Point2{-e.y, e.x} * (1.0 / (2.0 * a));
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        tk.emplace_back(t[i], t[j], a * dot(g[i], g[j]));
        tm.emplace_back(t[i], t[j], a / 12.0 * (i == j ? 2.0 : 1.0));
      }
    }
  }
  for (const auto& e : mesh.boundary_edges) {
    const double len = distance(mesh.nodes[e.nodes[0]], mesh.nodes[e.nodes[1]]);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) tb.emplace_back(e.nodes[i], e.nodes[j], len / 6.0 * (i == j ? 2.0 : 1.0));
  }
  AssembledForms f;
  f.K.resize(n, n);
  f.M.resize(n, n);
  f.B.resize(n, n);
  f.K.setFromTriplets(tk.begin(), tk.end());
  f.M.setFromTriplets(tm.begin(), tm.end());
  f.B.setFromTriplets(tb.begin(), tb.end());
  f.mesh_h = mesh.h_target;
  return f;
}

}  // namespace robin
