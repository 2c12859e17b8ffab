#pragma once

#include "loopframe/factorization.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace loopframe {

using Json = nlohmann::json;

/// {"n": n, "coeffs": {"<degree>": [[[re, im], ...], ...]}, "factor": tag?}
Json loop_to_json(const FourierLoop& loop, const std::optional<std::string>& factor = std::nullopt);
Json loop_to_json(const LaurentLoop& loop, const std::optional<std::string>& factor = std::nullopt);

struct LoopFile {
  FourierLoop loop;
  std::optional<std::string> factor;

  /// Throws DomainError if a degree lies outside the Laurent range.
  LaurentLoop laurent() const;
};

/// Throws DomainError on schema violations.
LoopFile loop_from_json(const Json& j);

Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j, int n);

/// {"u": [lo, hi, count], "v": [lo, hi, count], "base": [i, j]}
Json grid_to_json(const Grid& g);
Grid grid_from_json(const Json& j);

/// {"grid": ..., "n": n, "shape": [2, nu, nv], "data": [axis][i][j] matrices}
Json field_to_json(const OneFormField& f);
OneFormField field_from_json(const Json& j);

/// {"grid": ..., "n": n, "shape": [nu, nv], "data": [i][j] matrices}
Json frames_to_json(const FrameGrid& f);
FrameGrid frames_from_json(const Json& j);

/// {"n": n, "terms": [{"degree": d, "axis": "u"|"v", "row": r, "col": c, "expr": "(...)"}]}
Json form_to_json(const ExprForm& f);
ExprForm form_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace loopframe
