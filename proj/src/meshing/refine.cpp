#include <map>
#include <numeric>

#include "edge_key.hpp"
#include "robin/mesh.hpp"

namespace robin {

TriMesh refine(const TriMesh& mesh) {
  TriMesh out;
  out.nodes = mesh.nodes;
  out.h_target = 0.5 * mesh.h_target;
  out.seam_pairs = mesh.seam_pairs;

  std::map<std::pair<int, int>, int> mid;
  const auto midpoint = [&](int a, int b) {
    const auto key = detail::edge_key(a, b);
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    const int id = static_cast<int>(out.nodes.size());
    out.nodes.push_back(0.5 * (mesh.nodes[a] + mesh.nodes[b]));
    mid.emplace(key, id);
    return id;
  };
  for (const auto& t : mesh.triangles) {
    const int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
    out.triangles.push_back({t[0], ab, ca});
    out.triangles.push_back({ab, t[1], bc});
    out.triangles.push_back({ca, bc, t[2]});
    out.triangles.push_back({ab, bc, ca});
  }
  for (const auto& e : mesh.boundary_edges) {
    const int m = midpoint(e.nodes[0], e.nodes[1]);
    out.boundary_edges.push_back({{e.nodes[0], m}, e.tag});
    out.boundary_edges.push_back({{m, e.nodes[1]}, e.tag});
  }

  // Crack sides whose endpoints are seam copies of each other get seam
  // linked midpoints.
  std::vector<int> cls(mesh.nodes.size());
  std::iota(cls.begin(), cls.end(), 0);
  const auto find = [&](int x) {
    while (cls[x] != x) x = cls[x] = cls[cls[x]];
    return x;
  };
  for (const auto& [a, b] : mesh.seam_pairs) cls[find(a)] = find(b);
  std::map<std::pair<int, int>, std::vector<int>> groups;
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag != BoundaryEdge::Tag::CrackSide) continue;
    const auto key = detail::edge_key(find(e.nodes[0]), find(e.nodes[1]));
    groups[key].push_back(mid.at(detail::edge_key(e.nodes[0], e.nodes[1])));
  }
  for (const auto& [key, ms] : groups)
    for (std::size_t k = 1; k < ms.size(); ++k) out.seam_pairs.emplace_back(ms[0], ms[k]);
  return out;
}

}  // namespace robin
