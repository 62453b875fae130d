#pragma once

#include <string>

#include "hofer/field.hpp"
#include "hofer/minimax.hpp"
#include "hofer/surface.hpp"

namespace hofer {

/// SVG picture of the field as filled contour bands in chart coordinates,
/// with c+- annotated. Witness loops are drawn (class "witness") when the
/// verdict is linear. Throws NoCoordinates.
std::string render_svg(const SurfaceMesh& mesh, const HamiltonianField& field, const GrowthReport& report);

void emit_plot(const SurfaceMesh& mesh, const HamiltonianField& field, const GrowthReport& report,
               const std::string& path);

}  // namespace hofer
