#pragma once

#include "slcp/constants_file.hpp"
#include "slcp/driver.hpp"

#include <optional>

namespace slcp {

enum class BenchmarkId {
  SimpleExample,
  Floudas,
  KirschenOzturk,
  Hoburg0,
  Hoburg1,
  Hoburg3,
};

std::string to_string(BenchmarkId id);
std::optional<BenchmarkId> parse_benchmark(const std::string& s);
std::vector<BenchmarkId> all_benchmarks();

struct ReferenceOptimum {
  Vec x;
  double objective = 0.0;
};

struct BenchmarkDef {
  BenchmarkId id{};
  std::string name;
  StandardFormProblem problem;
  /// Shipped starting point used when regenerating references.
  Vec nominal_x0;
  /// Stored optimum, regenerated by `recompute-references`, never
  /// hand-typed. Absent when the reference file has not been generated yet.
  std::optional<ReferenceOptimum> reference;
  std::string constants_path;
};

/// Two-variable geometric program with one three-term posynomial
/// constraint; small enough to visualize and to check against a grid.
BenchmarkDef build_simple_example(const std::string& data_dir);

/// Heat-exchanger design: 8 variables, objective x1+x2+x3, one posynomial
/// row and five signomial rows. The signomial rows keep their printed form
/// behind black boxes with analytic gradients.
BenchmarkDef build_floudas(const std::string& data_dir);

/// Aircraft sizing with low-fidelity models: GP-compatible rows encoded as
/// posynomials/monomials, the one unavoidably signomial row
/// (fuel-volume availability) black-boxed.
BenchmarkDef build_kirschen_ozturk(const std::string& data_dir);

/// UAV sizing with outbound/return/sprint segments. Variant 0 is pure GP;
/// variant 1 black-boxes the sprint profile-drag fit; variant 3 black-boxes
/// all three instances. All variants share one optimum.
BenchmarkDef build_hoburg(int variant, const std::string& data_dir);

BenchmarkDef load_benchmark(BenchmarkId id,
                            const std::string& data_dir = default_data_dir());

/// The five-term profile-drag posynomial over (C_L, tau, Re, C_Dp), placed
/// at the given variable indices of an n-dimensional problem.
Posynomial drag_fit_posynomial(int i_cl, int i_tau, int i_re, int i_cdp,
                               int n_vars);

struct DragSolveResult {
  double c_dp = 0.0;
  bool extrapolated = false;
  double residual = 0.0;
  int iterations = 0;
};

/// Unique C_Dp > 0 at which the drag-fit posynomial equals one, found by
/// bracketing plus safeguarded Newton on log C_Dp. |posynomial - 1| at the
/// returned root is at most 1e-12. Throws std::domain_error on bracket
/// failure.
DragSolveResult drag_blackbox_detailed(double c_l, double tau, double re);
double drag_blackbox(double c_l, double tau, double re);

/// d C_Dp / d (C_L, tau, Re) at the implicit root, from the posynomial's
/// partial derivatives.
Vec drag_blackbox_gradient(double c_l, double tau, double re);

/// Reference-file round trip (key=value format under
/// <data_dir>/references/<name>.txt).
std::optional<ReferenceOptimum> load_reference(const BenchmarkDef& def,
                                               const std::string& data_dir);
void save_reference(const BenchmarkDef& def, const ReferenceOptimum& ref,
                    const std::string& data_dir, const std::string& note);

/// Largest constraint violation at x: max over rows of value-1 for
/// inequalities and |value-1| for equalities.
double constraint_violation(const StandardFormProblem& problem, const Vec& x);

/// Inf-norm of the log-space Lagrangian gradient at x, with multipliers
/// estimated from one sub-problem solve at x.
double kkt_stationarity(const StandardFormProblem& problem, const Vec& x);

}  // namespace slcp
