#pragma once

#include <json.hpp>

#include <string>

#include "hofer/decomposition.hpp"
#include "hofer/field.hpp"
#include "hofer/minimax.hpp"
#include "hofer/oracle.hpp"
#include "hofer/surface.hpp"

namespace hofer {

using Json = nlohmann::json;

/// Rounds to 12 significant digits, so that dumped reports are stable.
double round12(double x);

Json mesh_to_json(const SurfaceMesh& mesh);
/// Throws ParseError on malformed documents and InvalidMesh (listing every
/// diagnostic) when validate_mesh rejects the mesh.
SurfaceMesh mesh_from_json(const Json& doc);

Json preset_to_json(const FieldPreset& preset);
FieldPreset preset_from_json(const Json& doc);

/// {"mesh": name, "values": [...]} with values in mesh vertex order.
Json field_to_json(const HamiltonianField& field);
/// Accepts either a values document or a preset document. Throws ParseError
/// or MismatchedInputs (mesh name or value count disagree).
HamiltonianField field_from_json(const Json& doc, const SurfaceMesh& mesh);

Json report_to_json(const GrowthReport& report, const SurfaceMesh& mesh);
Json certificate_to_json(const BoundCertificate& certificate);
Json oracle_to_json(const OracleResult& result, const SurfaceMesh& mesh);

Json read_json(const std::string& path);
/// Pretty-printed with sorted keys and a trailing newline.
std::string dump(const Json& doc);
void write_text(const std::string& path, const std::string& text);

}  // namespace hofer
