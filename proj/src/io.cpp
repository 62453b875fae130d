#include "hofer/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "hofer/error.hpp"

namespace hofer {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const Json& member(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) parse_error(std::string("missing key '") + key + "'");
  return doc.at(key);
}

double number(const Json& value, const std::string& what) {
  if (!value.is_number()) parse_error(what + " must be a number");
  return value.get<double>();
}

long long integer(const Json& value, const std::string& what) {
  if (!value.is_number_integer()) parse_error(what + " must be an integer");
  return value.get<long long>();
}

Eigen::Vector2d pair(const Json& value, const std::string& what) {
  if (!value.is_array() || value.size() != 2) parse_error(what + " must be a pair of numbers");
  return {number(value[0], what), number(value[1], what)};
}

Json loop_ids(const std::optional<MeshLoop>& loop, const SurfaceMesh& mesh) {
  Json out = Json::array();
  if (loop)
    for (int v : loop->vertices()) out.push_back(mesh.vertex_ids()[v]);
  return out;
}

}  // namespace

double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", x);
  return std::strtod(buffer, nullptr);
}

Json mesh_to_json(const SurfaceMesh& mesh) {
  Json doc;
  const auto& ids = mesh.vertex_ids();
  doc["name"] = mesh.name();
  doc["vertices"] = ids;
  Json faces = Json::array();
  for (const auto& face : mesh.faces()) {
    Json f = Json::array();
    for (int v : face) f.push_back(ids[v]);
    faces.push_back(f);
  }
  doc["faces"] = faces;
  Json areas = Json::array();
  for (int f = 0; f < mesh.face_count(); ++f) areas.push_back(mesh.face_area(f));
  doc["face_area"] = areas;
  Json ends = Json::array();
  for (const auto& end : mesh.ends()) {
    Json e = Json::array();
    for (int v : end) e.push_back(ids[v]);
    ends.push_back(e);
  }
  doc["ends"] = ends;
  if (mesh.has_coords()) {
    Json coords = Json::array();
    for (const auto& x : mesh.coords()) coords.push_back({x.x(), x.y()});
    doc["coords"] = coords;
  }
  if (mesh.period()) doc["period"] = *mesh.period();
  return doc;
}

SurfaceMesh mesh_from_json(const Json& doc) {
  const Json& vertices = member(doc, "vertices");
  const Json& faces = member(doc, "faces");
  const Json& areas = member(doc, "face_area");
  const Json& ends = member(doc, "ends");
  if (!vertices.is_array() || !faces.is_array() || !areas.is_array() || !ends.is_array())
    parse_error("vertices, faces, face_area and ends must be arrays");
  std::unordered_map<long long, int> index;
  std::vector<long long> ids;
  for (const auto& v : vertices) {
    long long id = integer(v, "vertex id");
    if (!index.emplace(id, static_cast<int>(ids.size())).second) parse_error("duplicate vertex id " + std::to_string(id));
    ids.push_back(id);
  }
  auto cycle = [&](const Json& list, const std::string& what) {
    if (!list.is_array()) parse_error(what + " must be an array of vertex ids");
    std::vector<int> out;
    for (const auto& v : list) {
      auto it = index.find(integer(v, what));
      if (it == index.end()) parse_error(what + " references unknown vertex " + v.dump());
      out.push_back(it->second);
    }
    return out;
  };
  std::vector<std::vector<int>> face_list;
  for (const auto& f : faces) face_list.push_back(cycle(f, "face"));
  std::vector<std::vector<int>> end_list;
  for (const auto& e : ends) end_list.push_back(cycle(e, "end"));
  Eigen::VectorXd area(static_cast<Eigen::Index>(areas.size()));
  for (std::size_t i = 0; i < areas.size(); ++i) area[static_cast<Eigen::Index>(i)] = number(areas[i], "face_area");

  SurfaceMesh mesh(static_cast<int>(ids.size()), std::move(face_list), std::move(area), std::move(end_list));
  mesh.set_vertex_ids(ids);
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) parse_error("name must be a string");
    mesh.set_name(doc["name"].get<std::string>());
  }
  if (doc.contains("coords")) {
    const Json& coords = doc["coords"];
    if (!coords.is_array() || coords.size() != ids.size()) parse_error("coords must hold one pair per vertex");
    std::vector<Eigen::Vector2d> xs;
    for (const auto& c : coords) xs.push_back(pair(c, "coordinate"));
    mesh.set_coords(std::move(xs));
  }
  if (doc.contains("period")) {
    double period = number(doc["period"], "period");
    if (!(period > 0.0)) parse_error("period must be positive");
    mesh.set_period(period);
  }
  auto diagnostics = validate_mesh(mesh);
  if (!diagnostics.empty()) {
    std::ostringstream msg;
    msg << "mesh '" << mesh.name() << "' fails validation:";
    for (const auto& d : diagnostics) {
      msg << ' ' << to_string(d.kind) << '(';
      for (std::size_t i = 0; i < d.elements.size(); ++i) msg << (i ? "," : "") << d.elements[i];
      msg << ')';
    }
    throw Error(ErrorCode::InvalidMesh, msg.str());
  }
  return mesh;
}

Json preset_to_json(const FieldPreset& preset) {
  Json params = Json::object();
  params["height"] = preset.height;
  if (preset.kind == PresetKind::plateau_with_spike) params["spike_height"] = preset.spike_height;
  if (preset.center) params["center"] = {preset.center->x(), preset.center->y()};
  if (preset.spike_center) params["spike_center"] = {preset.spike_center->x(), preset.spike_center->y()};
  if (preset.radius) params["radius"] = *preset.radius;
  if (preset.band) params["band"] = {(*preset.band)[0], (*preset.band)[1]};
  if (preset.ramp) params["ramp"] = *preset.ramp;
  if (preset.modulation != 0.0) params["modulation"] = preset.modulation;
  if (preset.kind == PresetKind::custom_sum) {
    Json terms = Json::array();
    for (const auto& term : preset.terms) terms.push_back(preset_to_json(term));
    params["terms"] = terms;
  }
  return {{"preset", to_string(preset.kind)}, {"params", params}};
}

FieldPreset preset_from_json(const Json& doc) {
  const Json& kind = member(doc, "preset");
  if (!kind.is_string()) parse_error("preset must be a string");
  FieldPreset p;
  try {
    p.kind = preset_kind_from_string(kind.get<std::string>());
  } catch (const Error& e) {
    parse_error(e.what());
  }
  if (!doc.contains("params")) return p;
  const Json& params = doc["params"];
  if (!params.is_object()) parse_error("params must be an object");
  for (const auto& [key, value] : params.items()) {
    if (key == "height") p.height = number(value, key);
    else if (key == "spike_height") p.spike_height = number(value, key);
    else if (key == "center") p.center = pair(value, key);
    else if (key == "spike_center") p.spike_center = pair(value, key);
    else if (key == "radius") p.radius = number(value, key);
    else if (key == "band") {
      Eigen::Vector2d b = pair(value, key);
      p.band = std::array<double, 2>{b.x(), b.y()};
    } else if (key == "ramp") p.ramp = number(value, key);
    else if (key == "modulation") p.modulation = number(value, key);
    else if (key == "terms") {
      if (!value.is_array()) parse_error("terms must be an array");
      for (const auto& term : value) p.terms.push_back(preset_from_json(term));
    } else {
      parse_error("unknown preset parameter '" + key + "'");
    }
  }
  return p;
}

Json field_to_json(const HamiltonianField& field) {
  Json values = Json::array();
  for (Eigen::Index i = 0; i < field.values.size(); ++i) values.push_back(field.values[i]);
  return {{"mesh", field.mesh_name}, {"values", values}};
}

HamiltonianField field_from_json(const Json& doc, const SurfaceMesh& mesh) {
  if (doc.is_object() && doc.contains("mesh")) {
    if (!doc["mesh"].is_string()) parse_error("mesh must be a string");
    const auto name = doc["mesh"].get<std::string>();
    if (!name.empty() && !mesh.name().empty() && name != mesh.name())
      throw Error(ErrorCode::MismatchedInputs, "field is for mesh '" + name + "', not '" + mesh.name() + "'");
  }
  if (doc.is_object() && doc.contains("preset")) return sample_preset(mesh, preset_from_json(doc));
  const Json& values = member(doc, "values");
  if (!values.is_array()) parse_error("values must be an array");
  if (static_cast<int>(values.size()) != mesh.vertex_count())
    throw Error(ErrorCode::MismatchedInputs, "field has " + std::to_string(values.size()) + " values for " +
                                                 std::to_string(mesh.vertex_count()) + " vertices");
  HamiltonianField field;
  field.mesh_name = mesh.name();
  field.values.resize(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) field.values[v] = number(values[v], "value");
  return field;
}

Json report_to_json(const GrowthReport& report, const SurfaceMesh& mesh) {
  Json doc;
  doc["c_plus"] = round12(report.c_plus);
  doc["c_minus"] = round12(report.c_minus);
  doc["mu"] = round12(report.mu);
  doc["verdict"] = to_string(report.verdict);
  doc["witness_plus"] = loop_ids(report.witness_plus, mesh);
  doc["witness_minus"] = loop_ids(report.witness_minus, mesh);
  doc["initial_slope"] = round12(report.initial_slope);
  doc["simply_connected"] = report.simply_connected;
  doc["checks"] = report.checks;
  doc["mesh"] = mesh.name();
  return doc;
}

Json certificate_to_json(const BoundCertificate& c) {
  return {{"C", round12(c.C)},
          {"slope", round12(c.slope)},
          {"epsilon", round12(c.epsilon)},
          {"kappa", round12(c.kappa)},
          {"k_span", round12(c.k_span)},
          {"bounded", c.bounded},
          {"statement", c.statement},
          {"assumptions", c.assumptions}};
}

Json oracle_to_json(const OracleResult& result, const SurfaceMesh& mesh) {
  return {{"c_plus", round12(result.c_plus)},
          {"c_minus", round12(result.c_minus)},
          {"witness_plus", loop_ids(result.witness_plus, mesh)},
          {"witness_minus", loop_ids(result.witness_minus, mesh)},
          {"simply_connected", result.simply_connected},
          {"cycles_examined", result.cycles_examined},
          {"mesh", mesh.name()}};
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    parse_error(path + ": " + e.what());
  }
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidParams, "cannot write " + path);
  out << text;
}

}  // namespace hofer
