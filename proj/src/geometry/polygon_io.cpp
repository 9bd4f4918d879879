#include <algorithm>
#include <fstream>
#include <sstream>

#include "robin/error.hpp"
#include "robin/polygon_io.hpp"

namespace robin {

namespace {

Point2 point_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorKind::ParseError, where + ": expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Point2> points_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, where + ": expected an array of points");
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < j.size(); ++i) pts.push_back(point_from_json(j[i], where + ", vertex " + std::to_string(i)));
  return pts;
}

nlohmann::json points_to_json(const std::vector<Point2>& pts) {
  auto arr = nlohmann::json::array();
  for (const auto& p : pts) arr.push_back({p.x, p.y});
  return arr;
}

}  // namespace

GeneralizedPolygon polygon_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("components") || !j["components"].is_array())
    throw Error(ErrorKind::ParseError, "polygon JSON needs a \"components\" array");
  const std::string name = j.value("name", std::string{});
  const int budget = j.value("side_budget", 0);
  std::vector<Component> comps;
  const auto& cj = j["components"];
  for (std::size_t c = 0; c < cj.size(); ++c) {
    const std::string where = "component " + std::to_string(c);
    if (!cj[c].contains("walk")) throw Error(ErrorKind::ParseError, where + ": missing \"walk\"");
    auto walk_pts = points_from_json(cj[c]["walk"], where);
    if (auto why = simple_polygon_violation(walk_pts)) throw Error(ErrorKind::InvalidPolygon, where + ": " + *why);
    Component comp{SimplePolygon(std::move(walk_pts)), {}};
    if (cj[c].contains("cracks")) {
      const auto& kj = cj[c]["cracks"];
      for (std::size_t k = 0; k < kj.size(); ++k) {
        if (!kj[k].contains("polyline"))
          throw Error(ErrorKind::ParseError, where + ", crack " + std::to_string(k) + ": missing \"polyline\"");
        comp.cracks.push_back(Crack{points_from_json(kj[k]["polyline"], where + ", crack " + std::to_string(k))});
      }
    }
    comps.push_back(std::move(comp));
  }
  return GeneralizedPolygon(std::move(comps), budget, name);
}

nlohmann::json polygon_to_json(const GeneralizedPolygon& P) {
  nlohmann::json j;
  j["name"] = P.name();
  j["side_budget"] = P.side_budget();
  auto comps = nlohmann::json::array();
  for (const auto& c : P.components()) {
    nlohmann::json cj;
    cj["walk"] = points_to_json(c.walk.vertices());
    auto cracks = nlohmann::json::array();
    for (const auto& k : c.cracks) cracks.push_back({{"polyline", points_to_json(k.polyline)}});
    cj["cracks"] = cracks;
    comps.push_back(cj);
  }
  j["components"] = comps;
  return j;
}

GeneralizedPolygon parse_polygon(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t upto = std::min(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + e.what());
  }
  return polygon_from_json(j);
}

GeneralizedPolygon load_polygon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_polygon(ss.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void save_polygon(const std::filesystem::path& path, const GeneralizedPolygon& P) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path.string());
  out << polygon_to_json(P).dump(2) << '\n';
}

}  // namespace robin
