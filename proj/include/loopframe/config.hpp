#pragma once

#include "loopframe/io.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace loopframe {

/// Parses "a+bi", "bi", "i", "-2.5" and "r e^{it}" / "e^{it}" (t in radians,
/// the i may precede or follow t).
cd parse_lambda(const std::string& text);
std::string format_lambda(cd lambda);

struct Tolerances {
  double mc = 1e-10;
  double mc_fd = 1e-3;
  double normalization = 1e-12;
  double curvature = 1e-2;  // relative
  double group = 1e-10;
  double quadric = 1e-8;
  double metric = 1e-6;  // relative
  double geodesic = 1e-8;
  double insertion = 1e-6;
  double split = 1e-8;
  double condition = 1e8;
  double off_degree = 1e-6;
  double pluriharmonic = 1e-5;
  double reality = 1e-8;
  double column = 1e-6;
  double gluing = 1e-6;
  double negative_control = 1e-2;  // lower bound

  bool operator==(const Tolerances&) const = default;
};

/// Parameter box with sample counts.
struct DomainSpec {
  std::array<int, 2> size{128, 128};
  std::array<double, 2> u{-3.141592653589793, 3.141592653589793};
  std::array<double, 2> v{-1.5707963267948966, 1.5707963267948966};

  /// Grid whose base point is the sample nearest to (0, 0).
  Grid grid() const;
  bool operator==(const DomainSpec&) const = default;
};

struct StripSpec {
  DomainSpec domain{{17, 17}, {-0.5, 0.5}, {-0.5, 0.5}};
  double eps = 0.1;
  int count = 7;
  bool auto_shrink = false;

  ComplexStrip strip() const;
  bool operator==(const StripSpec&) const = default;
};

struct RunConfig {
  int case_id = 3;
  int row = 3;
  std::vector<std::string> lambdas{"1"};
  double c = 0.5;
  std::uint64_t seed = 1;
  int threads = 0;
  DomainSpec grid;
  StripSpec strip;
  int samples = 32;
  int bandwidth = 8;
  std::string side = "left";
  Tolerances tol;
  std::string out;
  std::string format;
  bool diagnostics = false;
  std::vector<std::string> suites{"loopalg", "frames", "immersions", "factorization", "extension"};
  /// Closed-form Maurer–Cartan form for extend; empty selects the example.
  std::optional<ExprForm> form;

  std::vector<cd> lambda_values() const;
  /// Throws DomainError on non-positive tolerances, bad counts or λ outside
  /// the row's range.
  void validate() const;
  bool operator==(const RunConfig& o) const;
};

Json config_to_json(const RunConfig& c);
/// Keys absent from `j` keep the values of `base`; unknown keys are errors.
RunConfig config_from_json(const Json& j, const RunConfig& base = {});

/// Defaults overlaid with the file named by LOOPFRAME_CONFIG, if set.
RunConfig default_config();

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> s{"loopalg", "frames", "immersions", "factorization", "extension"};
  return s;
}

}  // namespace loopframe
