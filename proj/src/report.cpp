#include "opdiff/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "opdiff/errors.hpp"

namespace opdiff {

namespace {

OperatorSpec family_spec(Family fam, int r) {
  OperatorSpec s;
  s.family = fam;
  s.r = r;
  return s;
}

const std::array<FigureSpec, 4>& all_specs() {
  static const std::array<FigureSpec, 4> specs = {
      FigureSpec{1, "1/(32*pi)*(4*pi*x*cos(2*pi*x) - pi*cos(2*pi*x) - 6*sin(2*pi*x))",
                 family_spec(Family::Bernstein, 3), {50, 100, 150}, 50, TheoremId::Thm1},
      FigureSpec{2, "-sin(2*pi*x)/(4*pi^2) - 32/pi^2*sin(pi*x/4)", family_spec(Family::Kantorovich, 2),
                 {50, 100, 150}, 50, TheoremId::Thm2},
      FigureSpec{3, "x^5/20 - 3*x^4/32 + 13*x^3/192 - 3*x^2/128", family_spec(Family::Durrmeyer, 2),
                 {50, 100, 150}, 50, TheoremId::Cor2},
      FigureSpec{4, "x^5/20 - 17*x^4/144 + 7*x^3/72 - x^2/32", family_spec(Family::Genuine, 2), {30, 40, 50}, 50,
                 TheoremId::Thm6},
  };
  return specs;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  // avoid "-0.00"
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
  return s;
}

std::string tick_label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-300 ? 0.0 : v);
  return buf;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ParameterError("cannot open '" + p.string() + "' for writing");
  out << text;
}

}  // namespace

const FigureSpec& figure_spec(int example_id) {
  if (example_id < 1 || example_id > 4) {
    throw ParameterError("example id must be 1, 2, 3 or 4, got " + std::to_string(example_id));
  }
  return all_specs()[example_id - 1];
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const CurveTable& t) {
  std::string out = "x";
  for (const auto& n : t.names) out += "," + n;
  out += "\n";
  for (Eigen::Index i = 0; i < t.x.size(); ++i) {
    out += format_double(t.x(i));
    for (Eigen::Index j = 0; j < t.values.cols(); ++j) out += "," + format_double(t.values(i, j));
    out += "\n";
  }
  return out;
}

CurveTable parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParameterError("parse_csv: empty input");
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    return cells;
  };
  const auto header = split(line);
  if (header.empty() || header[0] != "x") throw ParameterError("parse_csv: first column must be x");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw ParameterError("parse_csv: ragged row");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(std::strtod(c.c_str(), nullptr));
    rows.push_back(std::move(row));
  }
  CurveTable t;
  t.names.assign(header.begin() + 1, header.end());
  t.x.resize(rows.size());
  t.values.resize(rows.size(), header.size() - 1);
  for (size_t i = 0; i < rows.size(); ++i) {
    t.x(i) = rows[i][0];
    for (size_t j = 1; j < header.size(); ++j) t.values(i, j - 1) = rows[i][j];
  }
  return t;
}

std::string to_svg(const CurveTable& t, const std::string& title) {
  constexpr double W = 800, H = 600;
  constexpr double left = 90, right = 30, top = 50, bottom = 70;
  const double pw = W - left - right;
  const double ph = H - top - bottom;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  double x0 = t.x.size() ? t.x.minCoeff() : 0.0;
  double x1 = t.x.size() ? t.x.maxCoeff() : 1.0;
  if (x1 <= x0) x1 = x0 + 1;
  double y0 = t.values.size() ? t.values.minCoeff() : 0.0;
  double y1 = t.values.size() ? t.values.maxCoeff() : 1.0;
  if (!(y1 > y0)) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
  o << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">"
    << xml_escape(title) << "</text>\n";
  o << "<rect x=\"" << fixed(left, 2) << "\" y=\"" << fixed(top, 2) << "\" width=\"" << fixed(pw, 2)
    << "\" height=\"" << fixed(ph, 2) << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double px = sx(xv);
    o << "<line x1=\"" << fixed(px, 2) << "\" y1=\"" << fixed(top + ph, 2) << "\" x2=\"" << fixed(px, 2)
      << "\" y2=\"" << fixed(top + ph + 6, 2) << "\" stroke=\"#000000\"/>\n";
    o << "<text x=\"" << fixed(px, 2) << "\" y=\"" << fixed(top + ph + 22, 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << tick_label(xv) << "</text>\n";
    const double yv = y0 + (y1 - y0) * i / 4.0;
    const double py = sy(yv);
    o << "<line x1=\"" << fixed(left - 6, 2) << "\" y1=\"" << fixed(py, 2) << "\" x2=\"" << fixed(left, 2)
      << "\" y2=\"" << fixed(py, 2) << "\" stroke=\"#000000\"/>\n";
    o << "<text x=\"" << fixed(left - 10, 2) << "\" y=\"" << fixed(py + 4, 2)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << tick_label(yv) << "</text>\n";
  }
  o << "<text x=\"" << fixed(left + pw / 2, 2) << "\" y=\"" << fixed(H - 20, 2)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">x</text>\n";

  for (Eigen::Index j = 0; j < t.values.cols(); ++j) {
    const char* color = palette[j % 6];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (Eigen::Index i = 0; i < t.x.size(); ++i) {
      if (i) o << ' ';
      o << fixed(sx(t.x(i)), 2) << ',' << fixed(sy(t.values(i, j)), 2);
    }
    o << "\"/>\n";
    const double ly = top + 20 + 20.0 * j;
    o << "<line x1=\"" << fixed(left + pw - 190, 2) << "\" y1=\"" << fixed(ly, 2) << "\" x2=\""
      << fixed(left + pw - 160, 2) << "\" y2=\"" << fixed(ly, 2) << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << fixed(left + pw - 152, 2) << "\" y=\"" << fixed(ly + 4, 2)
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(t.names[j]) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

FigureResult build_figure(const FigureSpec& spec, const RunConfig& cfg) {
  if (cfg.grid_points < 11) throw ParameterError("figure grid needs at least 11 points");
  const int r = spec.op.r;
  const SmoothFn f = smooth_fn(parse(spec.function), r + 3);
  const QuadOptions q = cfg.quad();
  const Eigen::VectorXd x = uniform_grid(cfg.grid_points);

  FigureResult res;
  {
    OperatorSpec op = spec.op;
    op.n = spec.left_n;
    const BernsteinPoly lower = operator_image(op, op.n - r, f.fn(r), q);
    const BernsteinPoly upper = operator_derivative(op, f, q);
    CurveTable& c = res.curves;
    c.x = x;
    c.names = {"f_r", "lower_n_minus_r", "deriv_n"};
    c.values.resize(x.size(), 3);
    for (Eigen::Index i = 0; i < x.size(); ++i) c.values(i, 0) = f.eval(r, x(i));
    c.values.col(1) = lower(x);
    c.values.col(2) = upper(x);
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        res.left_max_gap = std::max(res.left_max_gap, (c.values.col(a) - c.values.col(b)).cwiseAbs().maxCoeff());
      }
    }
    res.left_gap_bound = theorem_rhs(spec.theorem, op, f, cfg.norm_grid).total_lipschitz();
  }

  CurveTable& e = res.errors;
  e.x = x;
  e.values.resize(x.size(), spec.n_list.size());
  for (size_t j = 0; j < spec.n_list.size(); ++j) {
    OperatorSpec op = spec.op;
    op.n = spec.n_list[j];
    const BernsteinPoly lower = operator_image(op, op.n - r, f.fn(r), q);
    const BernsteinPoly upper = operator_derivative(op, f, q);
    e.names.push_back("E_n" + std::to_string(op.n));
    e.values.col(j) = (upper(x) - lower(x)).cwiseAbs();
    res.sup_errors.push_back(e.values.col(j).maxCoeff());
  }
  res.strictly_decreasing = true;
  for (size_t j = 1; j < res.sup_errors.size(); ++j) {
    if (!(res.sup_errors[j] < res.sup_errors[j - 1])) res.strictly_decreasing = false;
  }
  return res;
}

nlohmann::json figure_summary(const FigureSpec& spec, const FigureResult& res) {
  nlohmann::json j;
  j["example"] = spec.example_id;
  j["function"] = spec.function;
  j["family"] = to_string(spec.op.family);
  j["r"] = spec.op.r;
  j["n"] = spec.n_list;
  j["sup_errors"] = res.sup_errors;
  j["strictly_decreasing"] = res.strictly_decreasing;
  j["left_n"] = spec.left_n;
  j["left_max_gap"] = res.left_max_gap;
  j["left_gap_bound"] = res.left_gap_bound;
  j["theorem"] = to_string(spec.theorem);
  j["grid_points"] = res.errors.x.size();
  j["version"] = kVersion;
  return j;
}

std::vector<std::filesystem::path> write_figure(const FigureSpec& spec, const FigureResult& res,
                                                const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const int left_id = 2 * spec.example_id - 1;
  const int right_id = 2 * spec.example_id;
  const std::string r = std::to_string(spec.op.r);
  const std::string fam = to_string(spec.op.family);

  std::vector<std::filesystem::path> written;
  auto emit = [&](int id, const CurveTable& t, const std::string& title) {
    const auto base = dir / ("figure" + std::to_string(id));
    write_text(base.string() + ".csv", to_csv(t));
    write_text(base.string() + ".svg", to_svg(t, title));
    written.push_back(base.string() + ".csv");
    written.push_back(base.string() + ".svg");
  };
  emit(left_id, res.curves,
       "Example " + std::to_string(spec.example_id) + ": " + fam + ", r = " + r + ", n = " +
           std::to_string(spec.left_n));
  emit(right_id, res.errors, "Example " + std::to_string(spec.example_id) + ": error E_{n," + r + "}");

  const auto summary = dir / ("example" + std::to_string(spec.example_id) + "_summary.json");
  write_text(summary, figure_summary(spec, res).dump(2) + "\n");
  written.push_back(summary);
  return written;
}

nlohmann::json to_json(const BoundReport& rep) {
  nlohmann::json j;
  j["theorem"] = to_string(rep.theorem);
  j["family"] = to_string(rep.spec.family);
  j["n"] = rep.spec.n;
  j["r"] = rep.spec.r;
  j["alpha"] = rep.spec.jacobi.alpha;
  j["beta"] = rep.spec.jacobi.beta;
  j["k"] = rep.spec.k;
  j["lhs_sup"] = rep.lhs_sup;
  nlohmann::json extras = nlohmann::json::array();
  for (const auto& t : rep.rhs.extra_terms) extras.push_back({{"name", t.name}, {"value", t.value}});
  j["rhs"] = {{"supnorm_term", rep.rhs.supnorm_term},
              {"modulus_delta", rep.rhs.modulus_delta},
              {"modulus_term_grid", rep.rhs.modulus_term_grid},
              {"modulus_term_lipschitz", rep.rhs.modulus_term_lipschitz},
              {"extra_terms", extras}};
  j["rhs_total_grid"] = rep.rhs_total_grid;
  j["rhs_total_lipschitz"] = rep.rhs_total_lipschitz;
  j["verdict"] = to_string(rep.verdict);
  j["grid_points"] = rep.grid_points;
  j["lhs_grid_points"] = rep.lhs_grid_points;
  j["flags"] = rep.flags;
  j["version"] = kVersion;
  return j;
}

}  // namespace opdiff
