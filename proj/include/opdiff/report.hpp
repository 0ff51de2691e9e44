#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "opdiff/bounds.hpp"
#include "opdiff/expr.hpp"
#include "opdiff/operators.hpp"

namespace opdiff {

inline constexpr const char* kVersion = "1.0.0";

/// One of the four worked examples: test function, operator family, order
/// of derivative, and the degrees compared.
struct FigureSpec {
  int example_id;
  std::string function;  // expression source text
  OperatorSpec op;       // family and r; n is taken from n_list / left_n
  std::vector<int> n_list;
  int left_n;            // degree for the curve-comparison figure
  TheoremId theorem;     // estimate that bounds the plotted (unscaled) gaps
};

/// Throws ParameterError for ids outside 1..4.
const FigureSpec& figure_spec(int example_id);

struct RunConfig {
  int grid_points = 501;
  int norm_grid = 2001;
  int quad_nodes_extra = 50;
  std::filesystem::path output_dir = ".";
  bool json = false;

  QuadOptions quad() const { return QuadOptions{quad_nodes_extra, 1}; }
};

/// Named columns sampled on a common x grid.
struct CurveTable {
  Eigen::VectorXd x;
  std::vector<std::string> names;  // one per column of `values`
  Eigen::MatrixXd values;          // x.size() rows
};

std::string format_double(double v);  // %.17g
std::string to_csv(const CurveTable& t);
CurveTable parse_csv(const std::string& text);

/// Self-contained SVG line chart, 800×600 viewBox.
std::string to_svg(const CurveTable& t, const std::string& title);

struct FigureResult {
  CurveTable curves;  // f^{(r)}, L_{n−r} f^{(r)}, (L_n f)^{(r)} at left_n
  CurveTable errors;  // E_{n,r} for each n in n_list
  std::vector<double> sup_errors;
  bool strictly_decreasing = false;
  double left_max_gap = 0.0;    // largest pairwise gap between the three curves
  double left_gap_bound = 0.0;  // total right-hand side of the theorem at left_n
};

FigureResult build_figure(const FigureSpec& spec, const RunConfig& cfg);

/// Writes figure{2e−1}.csv/.svg, figure{2e}.csv/.svg and example{e}_summary.json.
std::vector<std::filesystem::path> write_figure(const FigureSpec& spec, const FigureResult& res,
                                                const std::filesystem::path& dir);

nlohmann::json to_json(const BoundReport& rep);
nlohmann::json figure_summary(const FigureSpec& spec, const FigureResult& res);

}  // namespace opdiff
