#include <cmath>

#include "robin/error.hpp"
#include "robin/harness.hpp"

namespace robin {

Family family_from_string(const std::string& name) {
  if (name == "pacman") return Family::Pacman;
  if (name == "mountains") return Family::Mountains;
  if (name == "shrinking_slit" || name == "shrinking-slit") return Family::ShrinkingSlit;
  throw Error(ErrorKind::InvalidParameter, "unknown family '" + name + "'");
}

std::string to_string(Family f) {
  switch (f) {
    case Family::Pacman: return "pacman";
    case Family::Mountains: return "mountains";
    case Family::ShrinkingSlit: return "shrinking_slit";
  }
  return "family";
}

double family_parameter(Family f, int n) {
  if (n < 0) throw Error(ErrorKind::InvalidParameter, "family index must be non-negative");
  switch (f) {
    case Family::Pacman: return 0.25 * std::ldexp(1.0, -n);
    case Family::Mountains: return 0.5 * std::ldexp(1.0, -n);
    case Family::ShrinkingSlit: return 0.4 * std::ldexp(1.0, -2 * n);
  }
  return 0.0;
}

namespace {

GeneralizedPolygon square_with_slit(double length, int budget, const std::string& name) {
  std::vector<Component> cs(1);
  cs[0].walk = SimplePolygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  cs[0].cracks = {Crack{{{0.0, 0.5}, {length, 0.5}}}};
  return GeneralizedPolygon(std::move(cs), budget, name);
}

}  // namespace

GeneralizedPolygon family_member(Family f, int n) {
  const double t = family_parameter(f, n);
  const std::string name = to_string(f) + "_" + std::to_string(n);
  switch (f) {
    case Family::Pacman: {
      std::vector<Component> cs(1);
      cs[0].walk = SimplePolygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0.5 + t}, {0.5, 0.5}, {0, 0.5 - t}});
      return GeneralizedPolygon(std::move(cs), 7, name);
    }
    case Family::Mountains:
      return GeneralizedPolygon::from_simple(SimplePolygon({{0, 0}, {2, 0}, {1.5, 1}, {1, t}, {0.5, 1}}), 5, name);
    case Family::ShrinkingSlit: return square_with_slit(t, 6, name);
  }
  throw Error(ErrorKind::InvalidParameter, "unknown family");
}

GeneralizedPolygon family_limit(Family f) {
  switch (f) {
    case Family::Pacman: return square_with_slit(0.5, 7, "pacman_limit");
    case Family::Mountains: {
      std::vector<Component> cs(2);
      cs[0].walk = SimplePolygon({{0, 0}, {1, 0}, {0.5, 1}});
      cs[1].walk = SimplePolygon({{1, 0}, {2, 0}, {1.5, 1}});
      return GeneralizedPolygon(std::move(cs), 5, "mountains_limit");
    }
    case Family::ShrinkingSlit: return unit_square(6);
  }
  throw Error(ErrorKind::InvalidParameter, "unknown family");
}

}  // namespace robin
