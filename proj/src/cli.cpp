#include "opdiff/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <optional>
#include <sstream>

#include "opdiff/bounds.hpp"
#include "opdiff/errors.hpp"
#include "opdiff/operators.hpp"
#include "opdiff/report.hpp"

namespace opdiff {

namespace {

struct OpFlags {
  std::string family;
  int n = 0;
  int r = 0;
  int k = 1;
  double alpha = 0.0;
  double beta = 0.0;
  std::string f;

  OperatorSpec spec() const {
    OperatorSpec s;
    s.family = family_from_string(family);
    s.n = n;
    s.r = r;
    s.k = k;
    s.jacobi = {alpha, beta};
    return s;
  }
};

void add_op_flags(CLI::App* cmd, OpFlags& o, bool op_required) {
  auto* op = cmd->add_option("--op", o.family, "bernstein | kantorovich | qop | durrmeyer | genuine");
  if (op_required) op->required();
  cmd->add_option("--n", o.n, "degree")->required();
  cmd->add_option("--r", o.r, "order of derivative");
  cmd->add_option("--k", o.k, "antiderivative order (qop)");
  cmd->add_option("--alpha", o.alpha, "Jacobi exponent at 0 (durrmeyer)");
  cmd->add_option("--beta", o.beta, "Jacobi exponent at 1 (durrmeyer)");
  cmd->add_option("--f", o.f, "expression in x")->required();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ParameterError("cannot open '" + path + "' for writing");
  file << text;
}

std::string render(const CurveTable& t, bool json) {
  if (!json) return to_csv(t);
  nlohmann::json j;
  j["x"] = std::vector<double>(t.x.data(), t.x.data() + t.x.size());
  for (Eigen::Index c = 0; c < t.values.cols(); ++c) {
    const Eigen::VectorXd col = t.values.col(c);
    j[t.names[c]] = std::vector<double>(col.data(), col.data() + col.size());
  }
  return j.dump() + "\n";
}

CurveTable single_column(const Eigen::VectorXd& x, const Eigen::VectorXd& v, const std::string& name) {
  CurveTable t;
  t.x = x;
  t.names = {name};
  t.values = v;
  return t;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Derivatives of Bernstein-type operators: evaluation, error curves and bound checks", "opdiff"};
  app.require_subcommand(1);
  app.fallthrough();

  int grid = 501;
  int norm_grid = 2001;
  int quad_extra = 50;
  std::string out_path;
  bool json = false;
  app.add_option("--grid", grid, "number of uniform x points in [0, 1]");
  app.add_option("--norm-grid", norm_grid, "grid for sup norms and moduli in verify");
  app.add_option("--quad-extra", quad_extra, "quadrature nodes beyond the degree");
  app.add_option("--out", out_path, "output file (directory for figure)");
  app.add_flag("--json", json, "emit JSON instead of CSV");

  OpFlags op;
  bool scaled = false;
  bool refine = false;
  bool functional = false;
  std::string theorem;
  int example = 0;

  auto* eval_cmd = app.add_subcommand("eval", "L_n f, or (L_n f)^(r) with --r, on the grid");
  add_op_flags(eval_cmd, op, true);

  auto* diff_cmd = app.add_subcommand("diff", "|(L_n f)^(r) - L_{n-r} f^(r)| on the grid");
  add_op_flags(diff_cmd, op, true);
  diff_cmd->add_flag("--scaled", scaled, "apply the Gamma-ratio scaling (durrmeyer, genuine)");

  auto* verify_cmd = app.add_subcommand("verify", "check a theorem's inequality, report as JSON");
  verify_cmd->add_option("--theorem", theorem, "thm1..thm6, cor1, cor2")->required();
  add_op_flags(verify_cmd, op, false);
  verify_cmd->add_flag("--refine", refine, "repeat on doubled grids and flag drift");

  auto* figure_cmd = app.add_subcommand("figure", "regenerate the curves and errors of an example");
  figure_cmd->add_option("example,--example", example, "example id 1..4")->required();

  auto* moments_cmd = app.add_subcommand("moments", "Durrmeyer moments: closed forms against quadrature");
  moments_cmd->add_option("--n", op.n, "degree")->required();
  moments_cmd->add_option("--r", op.r, "monomial power, or r of the functionals");
  moments_cmd->add_option("--k", op.k, "index of the functionals");
  moments_cmd->add_option("--alpha", op.alpha, "Jacobi exponent at 0");
  moments_cmd->add_option("--beta", op.beta, "Jacobi exponent at 1");
  moments_cmd->add_flag("--functional", functional, "tabulate B_{n,k}, C_{n,k} moments instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "opdiff: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (grid < 2) throw ParameterError("--grid must be at least 2");
    const QuadOptions quad{quad_extra, 1};
    if (quad_extra < 0) throw ParameterError("--quad-extra must be non-negative");

    if (*eval_cmd || *diff_cmd) {
      const OperatorSpec spec = op.spec();
      spec.validate();
      const SmoothFn f = smooth_fn(parse(op.f), spec.r);
      const Eigen::VectorXd x = uniform_grid(grid);
      if (*eval_cmd) {
        const BernsteinPoly p = operator_derivative(spec, f, quad);
        emit(render(single_column(x, p(x), "value"), json), out_path, out);
        return kExitOk;
      }
      BernsteinPoly d;
      if (scaled) {
        if (spec.family == Family::Durrmeyer) {
          d = theorem_difference(TheoremId::Thm4, spec, f, quad);
        } else if (spec.family == Family::Genuine) {
          d = theorem_difference(TheoremId::Thm6, spec, f, quad);
        } else {
          throw ParameterError("--scaled applies to durrmeyer and genuine only");
        }
      } else {
        if (spec.n - spec.r < (spec.family == Family::Genuine ? 2 : 0)) {
          throw ParameterError("L_{n-r} is undefined for n - r = " + std::to_string(spec.n - spec.r));
        }
        const BernsteinPoly upper = operator_derivative(spec, f, quad);
        const BernsteinPoly lower = operator_image(spec, spec.n - spec.r, f.fn(spec.r), quad);
        d = BernsteinPoly(upper.coeffs() - lower.coeffs());
      }
      emit(render(single_column(x, d(x).cwiseAbs(), "error"), json), out_path, out);
      return kExitOk;
    }

    if (*verify_cmd) {
      const TheoremId id = theorem_from_string(theorem);
      if (op.family.empty()) op.family = to_string(family_of(id));
      const OperatorSpec spec = op.spec();
      check_pairing(id, spec);
      const SmoothFn f = smooth_fn(parse(op.f), required_order(id, spec.r) + 1);
      VerifyOptions vo;
      vo.lhs_grid = grid;
      vo.norm_grid = norm_grid;
      vo.quad = quad;
      vo.check_refinement = refine;
      const BoundReport rep = verify(id, spec, f, vo);
      const std::string text = to_json(rep).dump(2) + "\n";
      out << text;
      if (!out_path.empty()) emit(text, out_path, out);
      return rep.verdict == Verdict::Violated ? kExitViolated : kExitOk;
    }

    if (*figure_cmd) {
      const FigureSpec& spec = figure_spec(example);
      RunConfig cfg;
      cfg.grid_points = grid;
      cfg.norm_grid = norm_grid;
      cfg.quad_nodes_extra = quad_extra;
      cfg.output_dir = out_path.empty() ? "." : out_path;
      cfg.json = json;
      const FigureResult res = build_figure(spec, cfg);
      const auto files = write_figure(spec, res, cfg.output_dir);
      if (json) {
        out << figure_summary(spec, res).dump(2) << "\n";
      } else {
        for (const auto& p : files) out << p.string() << "\n";
      }
      return kExitOk;
    }

    if (*moments_cmd) {
      const JacobiParams p{op.alpha, op.beta};
      p.validate();
      if (op.n < 0 || op.r < 0) throw ParameterError("moments: n and r must be non-negative");
      std::ostringstream o;
      if (functional) {
        const FunctionalMoments c = functional_moments(op.n, op.r, op.k, p);
        const FunctionalMoments q = functional_moments_numeric(op.n, op.r, op.k, p, quad);
        o << "moment,closed_form,quadrature\n";
        const std::pair<const char*, std::pair<double, double>> rows[] = {
            {"B0", {c.b0, q.b0}}, {"B1", {c.b1, q.b1}}, {"B2", {c.b2, q.b2}},
            {"C0", {c.c0, q.c0}}, {"C1", {c.c1, q.c1}}, {"C2", {c.c2, q.c2}}};
        for (const auto& [name, v] : rows) {
          o << name << "," << format_double(v.first) << "," << format_double(v.second) << "\n";
        }
        emit(o.str(), out_path, out);
        return kExitOk;
      }
      const int r = op.r;
      const RealFn er = [r](double t) { return std::pow(t, r); };
      const BernsteinPoly image = durrmeyer_poly(er, op.n, p, quad);
      const Eigen::VectorXd x = uniform_grid(grid);
      CurveTable t;
      t.x = x;
      t.names = {"corrected", "printed", "quadrature"};
      t.values.resize(x.size(), 3);
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        t.values(i, 0) = durrmeyer_moment(op.n, r, p, x(i), MomentForm::Corrected);
        t.values(i, 1) = durrmeyer_moment(op.n, r, p, x(i), MomentForm::Printed);
      }
      t.values.col(2) = image(x);
      emit(render(t, json), out_path, out);
      return kExitOk;
    }
  } catch (const ParseError& e) {
    err << "opdiff: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParameterError& e) {
    err << "opdiff: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "opdiff: domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ConvergenceError& e) {
    err << "opdiff: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace opdiff
