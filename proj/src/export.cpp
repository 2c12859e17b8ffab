#include "loopframe/export.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>

namespace loopframe {

namespace {

void digits(std::ostream& os) { os << std::setprecision(15); }

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

ExportFormat parse_format(const std::string& name) {
  const std::string n = lower(name);
  if (n == "csv") return ExportFormat::Csv;
  if (n == "obj") return ExportFormat::Obj;
  if (n == "vtk") return ExportFormat::Vtk;
  throw DomainError("unknown export format \"" + name + "\" (csv, obj, vtk)");
}

ExportFormat format_from_path(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) throw DomainError("cannot infer the export format of \"" + path + "\"");
  return parse_format(path.substr(dot + 1));
}

std::string to_string(ExportFormat f) {
  switch (f) {
    case ExportFormat::Csv: return "csv";
    case ExportFormat::Obj: return "obj";
    case ExportFormat::Vtk: return "vtk";
  }
  return "";
}

void write_csv(std::ostream& os, const ImmersionSurface& s) {
  digits(os);
  os << "u,v";
  for (int c = 1; c <= s.dim(); ++c) os << ",x" << c;
  os << "\n";
  for (int i = 0; i < s.grid.nu(); ++i)
    for (int j = 0; j < s.grid.nv(); ++j) {
      os << s.grid.u.at(i) << "," << s.grid.v.at(j);
      for (int c = 0; c < s.dim(); ++c) os << "," << s.at(i, j)(c);
      os << "\n";
    }
}

void write_obj(std::ostream& os, const ImmersionSurface& s, std::optional<std::array<int, 3>> projection) {
  if (!projection && s.dim() != 3)
    throw DomainError("OBJ export of a " + std::to_string(s.dim()) + "-dimensional surface needs a projection");
  const std::array<int, 3> axes = projection.value_or(std::array<int, 3>{0, 1, 2});
  for (int a : axes)
    if (a < 0 || a >= s.dim()) throw DomainError("projection coordinate out of range");
  digits(os);
  os << "# " << s.grid.nu() << "x" << s.grid.nv() << " surface, coordinates " << axes[0] + 1 << " " << axes[1] + 1
     << " " << axes[2] + 1 << "\n";
  for (int i = 0; i < s.grid.nu(); ++i)
    for (int j = 0; j < s.grid.nv(); ++j) {
      const RVector& p = s.at(i, j);
      os << "v " << p(axes[0]) << " " << p(axes[1]) << " " << p(axes[2]) << "\n";
    }
  auto id = [&](int i, int j) { return i * s.grid.nv() + j + 1; };
  for (int i = 0; i + 1 < s.grid.nu(); ++i)
    for (int j = 0; j + 1 < s.grid.nv(); ++j)
      os << "f " << id(i, j) << " " << id(i + 1, j) << " " << id(i + 1, j + 1) << " " << id(i, j + 1) << "\n";
}

void write_vtk(std::ostream& os, const ImmersionSurface& s, int scalar) {
  if (s.dim() != 3 && s.dim() != 4) throw DomainError("VTK export needs a surface in 3 or 4 coordinates");
  if (s.dim() == 4 && (scalar < 0 || scalar > 3)) throw DomainError("scalar coordinate out of range");
  std::vector<int> axes;
  for (int c = 0; c < s.dim(); ++c)
    if (s.dim() == 3 || c != scalar) axes.push_back(c);
  digits(os);
  os << "# vtk DataFile Version 3.0\nsurface\nASCII\nDATASET STRUCTURED_GRID\n";
  os << "DIMENSIONS " << s.grid.nv() << " " << s.grid.nu() << " 1\n";
  os << "POINTS " << s.grid.size() << " double\n";
  for (int i = 0; i < s.grid.nu(); ++i)
    for (int j = 0; j < s.grid.nv(); ++j) {
      const RVector& p = s.at(i, j);
      os << p(axes[0]) << " " << p(axes[1]) << " " << p(axes[2]) << "\n";
    }
  if (s.dim() == 4) {
    os << "POINT_DATA " << s.grid.size() << "\nSCALARS x" << scalar + 1 << " double 1\nLOOKUP_TABLE default\n";
    for (int i = 0; i < s.grid.nu(); ++i)
      for (int j = 0; j < s.grid.nv(); ++j) os << s.at(i, j)(scalar) << "\n";
  }
}

void write_surface(const std::string& path, const ImmersionSurface& s, ExportFormat format,
                   std::optional<std::array<int, 3>> projection) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  switch (format) {
    case ExportFormat::Csv: write_csv(out, s); break;
    case ExportFormat::Obj: write_obj(out, s, projection); break;
    case ExportFormat::Vtk: write_vtk(out, s); break;
  }
}

void write_strip_vtk(std::ostream& os, const StripFamily& f, int lambda_index, int column) {
  if (lambda_index < 0 || lambda_index >= static_cast<int>(f.frames.size())) throw DomainError("λ index out of range");
  if (f.dim() < 4 || column < 0 || column >= f.dim()) throw DomainError("column out of range");
  const ComplexStrip& s = f.strip();
  const StripFrames& fr = f.frames[lambda_index];
  const int layers = s.counts[0] * s.counts[1];
  digits(os);
  os << "# vtk DataFile Version 3.0\nstrip column " << column << " at lambda " << f.lambdas[lambda_index].real() << " "
     << f.lambdas[lambda_index].imag() << "\nASCII\nDATASET STRUCTURED_GRID\n";
  os << "DIMENSIONS " << s.base.nv() << " " << s.base.nu() << " " << layers << "\n";
  os << "POINTS " << s.size() << " double\n";
  auto each = [&](auto&& emit) {
    for (int k1 = 0; k1 < s.counts[0]; ++k1)
      for (int k2 = 0; k2 < s.counts[1]; ++k2)
        for (int i = 0; i < s.base.nu(); ++i)
          for (int j = 0; j < s.base.nv(); ++j) emit(fr.at(i, j, k1, k2).col(column));
  };
  each([&](const auto& c) { os << c(0).real() << " " << c(1).real() << " " << c(2).real() << "\n"; });
  os << "POINT_DATA " << s.size() << "\nSCALARS x4 double 1\nLOOKUP_TABLE default\n";
  each([&](const auto& c) { os << c(3).real() << "\n"; });
  os << "SCALARS imaginary_part double 1\nLOOKUP_TABLE default\n";
  each([&](const auto& c) { os << c.imag().cwiseAbs().maxCoeff() << "\n"; });
}

}  // namespace loopframe
