#pragma once

#include "loopframe/flats.hpp"
#include "loopframe/immersions.hpp"

#include <array>
#include <optional>
#include <ostream>
#include <string>

namespace loopframe {

enum class ExportFormat { Csv, Obj, Vtk };

/// "csv", "obj" or "vtk"; throws DomainError otherwise.
ExportFormat parse_format(const std::string& name);
/// Format from the file extension.
ExportFormat format_from_path(const std::string& path);
std::string to_string(ExportFormat f);

/// Header u,v,x1..xn, one row per grid node, 15 significant digits.
void write_csv(std::ostream& os, const ImmersionSurface& s);

/// Quad mesh of three coordinates. Without a projection the surface must be
/// three-dimensional.
void write_obj(std::ostream& os, const ImmersionSurface& s, std::optional<std::array<int, 3>> projection = std::nullopt);

/// Legacy VTK structured grid. Four-dimensional surfaces put the `scalar`
/// coordinate into point data and the others into the points.
void write_vtk(std::ostream& os, const ImmersionSurface& s, int scalar = 3);

void write_surface(const std::string& path, const ImmersionSurface& s, ExportFormat format,
                   std::optional<std::array<int, 3>> projection = std::nullopt);

/// The column of strip frames at one λ sample as a structured grid with the
/// imaginary slices stacked along the third index: points are the real parts
/// of the first three entries, point data holds the fourth entry's real part
/// and the size of the imaginary part.
void write_strip_vtk(std::ostream& os, const StripFamily& f, int lambda_index, int column);

}  // namespace loopframe
