#include "slcp/problems.hpp"

#include "slcp/subsolver.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

namespace slcp {

std::string to_string(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::SimpleExample: return "simple";
    case BenchmarkId::Floudas: return "floudas";
    case BenchmarkId::KirschenOzturk: return "kirschen-ozturk";
    case BenchmarkId::Hoburg0: return "hoburg0";
    case BenchmarkId::Hoburg1: return "hoburg1";
    case BenchmarkId::Hoburg3: return "hoburg3";
  }
  return "?";
}

std::optional<BenchmarkId> parse_benchmark(const std::string& s) {
  for (BenchmarkId id : all_benchmarks()) {
    if (to_string(id) == s) return id;
  }
  return std::nullopt;
}

std::vector<BenchmarkId> all_benchmarks() {
  return {BenchmarkId::SimpleExample,  BenchmarkId::Floudas,
          BenchmarkId::KirschenOzturk, BenchmarkId::Hoburg0,
          BenchmarkId::Hoburg1,        BenchmarkId::Hoburg3};
}

namespace {

constexpr double kPi = 3.14159265358979323846;

// Incremental problem assembly with named variables. Terms are written as
// (index, exponent) lists against the final dense layout.
class Builder {
 public:
  int var(const std::string& name, double lower = 1e-9,
          double upper = std::numeric_limits<double>::infinity()) {
    Variable v;
    v.index = static_cast<int>(problem.variables.size());
    v.name = name;
    v.lower = lower;
    v.upper = upper;
    problem.variables.push_back(v);
    index_[name] = v.index;
    return v.index;
  }

  int index_of(const std::string& name) const { return index_.at(name); }

  Monomial mono(double c,
                std::initializer_list<std::pair<int, double>> powers) const {
    Monomial m;
    m.coefficient = c;
    m.exponents = Vec::Zero(problem.variables.size());
    for (const auto& [i, e] : powers) m.exponents[i] += e;
    return m;
  }

  void mono_ineq(double c,
                 std::initializer_list<std::pair<int, double>> powers) {
    problem.mono_ineq.push_back(mono(c, powers));
  }
  void mono_eq(double c,
               std::initializer_list<std::pair<int, double>> powers) {
    problem.mono_eq.push_back(mono(c, powers));
  }
  void posy_ineq(std::vector<Monomial> terms) {
    problem.posy_ineq.push_back(Posynomial{std::move(terms)});
  }

  Vec x0_from(const ConstantsFile& c) const {
    Vec x0(problem.variables.size());
    for (const Variable& v : problem.variables) {
      x0[v.index] = c.get("x0." + v.name);
    }
    return x0;
  }

  StandardFormProblem problem;

 private:
  std::map<std::string, int> index_;
};

// Sum of signed monomial terms with integer-friendly analytic gradients;
// the evaluator stays defined for any x where the powers are, so the
// x-space SQP baseline can probe freely.
struct SignedTerm {
  double c = 0.0;
  std::vector<std::pair<int, double>> powers;
};

BlackBoxFn signed_sum_bb(std::string name, std::vector<SignedTerm> terms) {
  BlackBoxFn f;
  f.name = std::move(name);
  auto shared = std::make_shared<std::vector<SignedTerm>>(std::move(terms));
  f.evaluator = [shared](const Vec& x) {
    double v = 0.0;
    for (const SignedTerm& t : *shared) {
      double tv = t.c;
      for (const auto& [i, e] : t.powers) tv *= std::pow(x[i], e);
      v += tv;
    }
    return v;
  };
  f.gradient = [shared](const Vec& x) {
    Vec g = Vec::Zero(x.size());
    for (const SignedTerm& t : *shared) {
      for (size_t k = 0; k < t.powers.size(); ++k) {
        double tv = t.c * t.powers[k].second *
                    std::pow(x[t.powers[k].first], t.powers[k].second - 1.0);
        for (size_t j = 0; j < t.powers.size(); ++j) {
          if (j == k) continue;
          tv *= std::pow(x[t.powers[j].first], t.powers[j].second);
        }
        g[t.powers[k].first] += tv;
      }
    }
    return g;
  };
  return f;
}

std::string constants_path(const std::string& data_dir,
                           const std::string& file) {
  return data_dir + "/" + file;
}

}  // namespace

// ---------------------------------------------------------------------------
// Profile-drag fit and its implicit inversion

namespace {

struct DragTerm {
  double coef;
  double a_cl, a_tau, a_re, a_cdp;
};

constexpr DragTerm kDragFit[5] = {
    {2.56, 5.88, -3.32, -1.54, -2.26},
    {3.80e-9, -0.92, 6.23, -1.38, -9.57},
    {2.20e-3, -0.01, 0.03, 0.14, -0.73},
    {1.19e4, 9.78, 1.76, -1.00, -0.91},
    {6.14e-6, 6.53, -0.52, -0.99, -5.19},
};

// log of the fit value and its derivative in u = log C_Dp, at fixed
// (C_L, tau, Re); strictly decreasing in u.
void drag_log_residual(const double z[5], double u, double* r, double* dr) {
  double zz[5];
  double zmax = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < 5; ++j) {
    zz[j] = z[j] + kDragFit[j].a_cdp * u;
    zmax = std::max(zmax, zz[j]);
  }
  double sum = 0.0, wsum = 0.0;
  for (int j = 0; j < 5; ++j) {
    const double w = std::exp(zz[j] - zmax);
    sum += w;
    wsum += w * kDragFit[j].a_cdp;
  }
  *r = zmax + std::log(sum);
  *dr = wsum / sum;
}

}  // namespace

Posynomial drag_fit_posynomial(int i_cl, int i_tau, int i_re, int i_cdp,
                               int n_vars) {
  Posynomial p;
  for (const DragTerm& t : kDragFit) {
    Monomial m;
    m.coefficient = t.coef;
    m.exponents = Vec::Zero(n_vars);
    m.exponents[i_cl] = t.a_cl;
    m.exponents[i_tau] = t.a_tau;
    m.exponents[i_re] = t.a_re;
    m.exponents[i_cdp] = t.a_cdp;
    p.terms.push_back(std::move(m));
  }
  return p;
}

DragSolveResult drag_blackbox_detailed(double c_l, double tau, double re) {
  if (!(c_l > 0.0 && tau > 0.0 && re > 0.0)) {
    throw std::domain_error("drag fit requires positive C_L, tau, Re");
  }
  DragSolveResult out;
  out.extrapolated = c_l < 0.01 || c_l > 2.0 || tau < 0.05 || tau > 0.25 ||
                     re < 1e5 || re > 1e9;

  const double lcl = std::log(c_l), ltau = std::log(tau), lre = std::log(re);
  double z[5];
  for (int j = 0; j < 5; ++j) {
    z[j] = std::log(kDragFit[j].coef) + kDragFit[j].a_cl * lcl +
           kDragFit[j].a_tau * ltau + kDragFit[j].a_re * lre;
  }

  // Bracket the root of r(u) = 0; r is decreasing, so r(lo) > 0 > r(hi).
  double lo = std::log(1e-4), hi = std::log(1e-1);
  double r, dr;
  for (int tries = 0;; ++tries) {
    drag_log_residual(z, lo, &r, &dr);
    if (r > 0.0) break;
    hi = lo;
    lo -= std::log(10.0);
    if (tries > 200) throw std::domain_error("drag fit: no lower bracket");
  }
  for (int tries = 0;; ++tries) {
    drag_log_residual(z, hi, &r, &dr);
    if (r < 0.0) break;
    lo = hi;
    hi += std::log(10.0);
    if (tries > 200) throw std::domain_error("drag fit: no upper bracket");
  }

  double u = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    drag_log_residual(z, u, &r, &dr);
    out.iterations = it + 1;
    if (std::abs(r) <= 1e-13) break;
    if (r > 0.0) {
      lo = u;
    } else {
      hi = u;
    }
    double next = u - r / dr;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    u = next;
  }
  drag_log_residual(z, u, &r, &dr);
  out.c_dp = std::exp(u);
  out.residual = std::expm1(r);  // fit value minus one
  if (std::abs(out.residual) > 1e-12) {
    throw std::domain_error("drag fit: root refinement failed");
  }
  return out;
}

double drag_blackbox(double c_l, double tau, double re) {
  return drag_blackbox_detailed(c_l, tau, re).c_dp;
}

Vec drag_blackbox_gradient(double c_l, double tau, double re) {
  const DragSolveResult sol = drag_blackbox_detailed(c_l, tau, re);
  const double u = std::log(sol.c_dp);
  const double lcl = std::log(c_l), ltau = std::log(tau), lre = std::log(re);

  // Softmax weights of the five terms at the root.
  double zz[5];
  double zmax = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < 5; ++j) {
    zz[j] = std::log(kDragFit[j].coef) + kDragFit[j].a_cl * lcl +
            kDragFit[j].a_tau * ltau + kDragFit[j].a_re * lre +
            kDragFit[j].a_cdp * u;
    zmax = std::max(zmax, zz[j]);
  }
  double sum = 0.0;
  double s_cl = 0.0, s_tau = 0.0, s_re = 0.0, s_cdp = 0.0;
  for (int j = 0; j < 5; ++j) {
    const double w = std::exp(zz[j] - zmax);
    sum += w;
    s_cl += w * kDragFit[j].a_cl;
    s_tau += w * kDragFit[j].a_tau;
    s_re += w * kDragFit[j].a_re;
    s_cdp += w * kDragFit[j].a_cdp;
  }
  // Implicit function theorem in log coordinates:
  // du/dlog v = -(sum w a_v)/(sum w a_cdp).
  Vec g(3);
  g[0] = -(s_cl / s_cdp) * sol.c_dp / c_l;
  g[1] = -(s_tau / s_cdp) * sol.c_dp / tau;
  g[2] = -(s_re / s_cdp) * sol.c_dp / re;
  return g;
}

// ---------------------------------------------------------------------------
// Simple two-variable example

BenchmarkDef build_simple_example(const std::string& data_dir) {
  const std::string path = constants_path(data_dir, "simple_example.txt");
  ConstantsFile c = ConstantsFile::load(path);
  c.require({"epsilon", "x0.x", "x0.y"});
  const double eps = c.get("epsilon");

  Builder b;
  const int x = b.var("x", eps);
  const int y = b.var("y", eps);

  b.problem.objective = Posynomial{{
      b.mono(1.0, {{x, -0.1}}),
      b.mono(15.0, {{x, 0.01}}),
      b.mono(1.0, {{y, -0.1}}),
      b.mono(15.0, {{y, 0.01}}),
  }};
  b.posy_ineq({
      b.mono(0.01, {{x, -1.1}}),
      b.mono(1.0, {{x, 0.1}}),
      b.mono(1.0, {{y, 1.0}}),
  });
  append_bound_constraints(b.problem);

  BenchmarkDef def;
  def.id = BenchmarkId::SimpleExample;
  def.name = to_string(def.id);
  def.nominal_x0 = b.x0_from(c);
  def.problem = std::move(b.problem);
  def.constants_path = path;
  return def;
}

// ---------------------------------------------------------------------------
// Floudas heat-exchanger design

BenchmarkDef build_floudas(const std::string& data_dir) {
  const std::string path = constants_path(data_dir, "floudas.txt");
  ConstantsFile c = ConstantsFile::load(path);

  Builder b;
  std::vector<int> x(9);  // 1-based aliases for readability
  for (int i = 1; i <= 8; ++i) {
    const std::string name = "x" + std::to_string(i);
    c.require({name + ".lower", name + ".upper", "x0." + name});
    x[i] = b.var(name, c.get(name + ".lower"), c.get(name + ".upper"));
  }

  b.problem.objective = Posynomial{{
      b.mono(1.0, {{x[1], 1.0}}),
      b.mono(1.0, {{x[2], 1.0}}),
      b.mono(1.0, {{x[3], 1.0}}),
  }};

  // The only all-positive constraint.
  b.posy_ineq({
      b.mono(0.0025, {{x[4], 1.0}}),
      b.mono(0.0025, {{x[6], 1.0}}),
  });

  // The five signomial rows keep their printed form behind black boxes.
  auto add_bb = [&](std::string name, std::vector<SignedTerm> terms) {
    b.problem.bb_ineq.push_back(signed_sum_bb(std::move(name), std::move(terms)));
  };
  add_bb("heat_balance_1",
         {{833.33252, {{x[4], 1.0}, {x[1], -1.0}, {x[6], -1.0}}},
          {100.0, {{x[6], -1.0}}},
          {-83333.333, {{x[1], -1.0}, {x[6], -1.0}}}});
  add_bb("heat_balance_2",
         {{1250.0, {{x[5], 1.0}, {x[2], -1.0}, {x[7], -1.0}}},
          {1.0, {{x[4], 1.0}, {x[7], -1.0}}},
          {-1250.0, {{x[4], 1.0}, {x[2], -1.0}, {x[7], -1.0}}}});
  add_bb("heat_balance_3",
         {{1250000.0, {{x[3], -1.0}, {x[8], -1.0}}},
          {1.0, {{x[5], 1.0}, {x[8], -1.0}}},
          {-2500.0, {{x[5], 1.0}, {x[3], -1.0}, {x[8], -1.0}}}});
  add_bb("temperature_diff_1",
         {{-0.0025, {{x[4], 1.0}}},
          {0.0025, {{x[5], 1.0}}},
          {0.0025, {{x[7], 1.0}}}});
  add_bb("temperature_diff_2",
         {{-0.01, {{x[5], 1.0}}}, {0.01, {{x[8], 1.0}}}});

  append_bound_constraints(b.problem);

  BenchmarkDef def;
  def.id = BenchmarkId::Floudas;
  def.name = to_string(def.id);
  def.nominal_x0 = b.x0_from(c);
  def.problem = std::move(b.problem);
  def.constants_path = path;
  return def;
}

// ---------------------------------------------------------------------------
// Kirschen-Ozturk aircraft sizing

BenchmarkDef build_kirschen_ozturk(const std::string& data_dir) {
  const std::string path = constants_path(data_dir, "kirschen_ozturk.txt");
  ConstantsFile c = ConstantsFile::load(path);
  c.require({"c_T", "R", "rho", "mu", "rho_f", "g", "tau", "N_ult", "V_min",
             "C_Lmax", "S_wetratio", "k_form", "e_oswald", "W_0", "C_Ww1",
             "C_Ww2", "eps_lower"});

  const double eps = c.get("eps_lower");
  Builder b;
  const int A = b.var("A", eps);
  const int S = b.var("S", eps);
  const int V = b.var("V", eps);
  const int W = b.var("W", eps);
  const int C_D = b.var("C_D", eps);
  const int C_L = b.var("C_L", eps);
  const int C_f = b.var("C_f", eps);
  const int Re = b.var("Re", eps);
  const int W_w = b.var("W_w", eps);
  const int W_w_surf = b.var("W_w_surf", eps);
  const int W_w_strc = b.var("W_w_strc", eps);
  const int W_f = b.var("W_f", eps);
  const int V_f = b.var("V_f", eps);
  const int V_f_avail = b.var("V_f_avail", eps);
  const int V_f_wing = b.var("V_f_wing", eps);
  const int V_f_fuse = b.var("V_f_fuse", eps);
  const int t = b.var("t", eps);
  const int D = b.var("D", eps);
  const int A_CD0 = b.var("A_CD0", eps);

  const double rho = c.get("rho");
  const double g = c.get("g");
  const double rho_f = c.get("rho_f");
  const double tau = c.get("tau");

  b.problem.objective = Posynomial{{b.mono(1.0, {{W_f, 1.0}})}};

  // W_f >= c_T t D
  b.mono_ineq(c.get("c_T"), {{t, 1.0}, {D, 1.0}, {W_f, -1.0}});
  // t >= R / V
  b.mono_ineq(c.get("R"), {{V, -1.0}, {t, -1.0}});
  // D >= 0.5 rho V^2 S C_D
  b.mono_ineq(0.5 * rho, {{V, 2.0}, {S, 1.0}, {C_D, 1.0}, {D, -1.0}});
  // C_D >= A_CD0/S + k C_f S_wet/S + C_L^2/(pi A e)
  b.posy_ineq({
      b.mono(1.0, {{A_CD0, 1.0}, {S, -1.0}, {C_D, -1.0}}),
      b.mono(c.get("k_form") * c.get("S_wetratio"), {{C_f, 1.0}, {C_D, -1.0}}),
      b.mono(1.0 / (kPi * c.get("e_oswald")),
             {{C_L, 2.0}, {A, -1.0}, {C_D, -1.0}}),
  });
  // C_f >= 0.074 Re^-0.02
  b.mono_ineq(0.074, {{Re, -0.02}, {C_f, -1.0}});
  // Re <= rho V sqrt(S/A) / mu
  b.mono_ineq(c.get("mu") / rho,
              {{Re, 1.0}, {A, 0.5}, {V, -1.0}, {S, -0.5}});
  // 0.5 rho V^2 S C_L >= W_0 + W_w + 0.5 W_f
  b.posy_ineq({
      b.mono(2.0 * c.get("W_0") / rho, {{V, -2.0}, {S, -1.0}, {C_L, -1.0}}),
      b.mono(2.0 / rho, {{W_w, 1.0}, {V, -2.0}, {S, -1.0}, {C_L, -1.0}}),
      b.mono(1.0 / rho, {{W_f, 1.0}, {V, -2.0}, {S, -1.0}, {C_L, -1.0}}),
  });
  // 0.5 rho V_min^2 S C_Lmax >= W
  b.mono_ineq(2.0 / (rho * c.get("V_min") * c.get("V_min") * c.get("C_Lmax")),
              {{W, 1.0}, {S, -1.0}});
  // W >= W_0 + W_w + W_f
  b.posy_ineq({
      b.mono(c.get("W_0"), {{W, -1.0}}),
      b.mono(1.0, {{W_w, 1.0}, {W, -1.0}}),
      b.mono(1.0, {{W_f, 1.0}, {W, -1.0}}),
  });
  // W_w >= W_w_surf + W_w_strc
  b.posy_ineq({
      b.mono(1.0, {{W_w_surf, 1.0}, {W_w, -1.0}}),
      b.mono(1.0, {{W_w_strc, 1.0}, {W_w, -1.0}}),
  });
  // W_w_surf >= C_Ww1 S
  b.mono_ineq(c.get("C_Ww1"), {{S, 1.0}, {W_w_surf, -1.0}});
  // W_w_strc^2 >= C_Ww2^2 N_ult^2 A^3 (W_0 + V_f_fuse g rho_f) W S / tau^2
  {
    const double k2 = c.get("C_Ww2") * c.get("C_Ww2") * c.get("N_ult") *
                      c.get("N_ult") / (tau * tau);
    b.posy_ineq({
        b.mono(k2 * c.get("W_0"),
               {{A, 3.0}, {W, 1.0}, {S, 1.0}, {W_w_strc, -2.0}}),
        b.mono(k2 * g * rho_f,
               {{A, 3.0}, {V_f_fuse, 1.0}, {W, 1.0}, {S, 1.0},
                {W_w_strc, -2.0}}),
    });
  }
  // V_f <= V_f_avail
  b.mono_ineq(1.0, {{V_f, 1.0}, {V_f_avail, -1.0}});
  // V_f = W_f / (g rho_f)
  b.mono_eq(1.0 / (g * rho_f), {{W_f, 1.0}, {V_f, -1.0}});
  // V_f_wing^2 <= 0.0009 S^3 tau^2 / A
  b.mono_ineq(1.0 / (0.0009 * tau * tau),
              {{V_f_wing, 2.0}, {A, 1.0}, {S, -3.0}});
  // V_f_fuse <= A_CD0 * 10[m]
  b.mono_ineq(0.1, {{V_f_fuse, 1.0}, {A_CD0, -1.0}});

  // V_f_avail <= V_f_wing + V_f_fuse: the one unavoidably signomial row,
  // kept positive as (1 + V_f_avail) / (1 + V_f_wing + V_f_fuse) <= 1.
  {
    BlackBoxFn f;
    f.name = "fuel_volume_availability";
    f.evaluator = [=](const Vec& x) {
      return (1.0 + x[V_f_avail]) / (1.0 + x[V_f_wing] + x[V_f_fuse]);
    };
    f.gradient = [=](const Vec& x) {
      const double denom = 1.0 + x[V_f_wing] + x[V_f_fuse];
      Vec grad = Vec::Zero(x.size());
      grad[V_f_avail] = 1.0 / denom;
      grad[V_f_wing] = -(1.0 + x[V_f_avail]) / (denom * denom);
      grad[V_f_fuse] = grad[V_f_wing];
      return grad;
    };
    b.problem.bb_ineq.push_back(std::move(f));
  }

  append_bound_constraints(b.problem);

  BenchmarkDef def;
  def.id = BenchmarkId::KirschenOzturk;
  def.name = to_string(def.id);
  def.nominal_x0 = b.x0_from(c);
  def.problem = std::move(b.problem);
  def.constants_path = path;
  return def;
}

// ---------------------------------------------------------------------------
// Hoburg UAV sizing (variants 0, 1, 3)

BenchmarkDef build_hoburg(int variant, const std::string& data_dir) {
  if (variant != 0 && variant != 1 && variant != 3) {
    throw std::invalid_argument("hoburg variant must be 0, 1 or 3");
  }
  const std::string path = constants_path(data_dir, "hoburg.txt");
  ConstantsFile c = ConstantsFile::load(path);
  c.require({"rho", "rho_sl", "mu", "e_oswald", "eta_eng", "eta_v", "A_prop",
             "h_fuel", "g", "N_lift", "sigma_max", "sigma_max_shear",
             "rho_cap", "rho_web", "w_bar", "r_h", "f_wadd", "W_fixed",
             "C_Lmax", "V_stall_max", "V_sprint_min", "R_min", "W_pay_min_kg",
             "tau_max", "p_min"});

  const double rho = c.get("rho");
  const double g = c.get("g");

  Builder b;
  const int S = b.var("S");
  const int A = b.var("A");
  const int W_MTO = b.var("W_MTO");
  const int V_stall = b.var("V_stall");
  const int P_max = b.var("P_max");
  const int W_eng = b.var("W_eng");
  const int W_wing = b.var("W_wing");
  const int W_zfw = b.var("W_zfw");
  const int W_tilde = b.var("W_tilde");
  const int W_pay = b.var("W_pay");
  const int W_cap = b.var("W_cap");
  const int W_web = b.var("W_web");
  const int M_r = b.var("M_r");
  const int I_cap = b.var("I_cap");
  const int t_cap = b.var("t_cap");
  const int t_web = b.var("t_web");
  const int nu = b.var("nu");
  const int p = b.var("p");
  const int q = b.var("q");
  const int tau = b.var("tau");
  const int R = b.var("R");
  const int W_fuel_out = b.var("W_fuel_out");
  const int W_fuel_ret = b.var("W_fuel_ret");

  struct Segment {
    std::string suffix;
    int V, C_L, C_D, C_Dp, Re, T, W, eta0, eta_i, eta_prop;
  };
  std::vector<Segment> segs;
  for (const std::string& sfx : {"out", "ret", "sprint"}) {
    Segment s;
    s.suffix = sfx;
    s.V = b.var("V_" + sfx);
    s.C_L = b.var("C_L_" + sfx);
    s.C_D = b.var("C_D_" + sfx);
    s.C_Dp = b.var("C_Dp_" + sfx);
    s.Re = b.var("Re_" + sfx);
    s.T = b.var("T_" + sfx);
    s.W = b.var("W_" + sfx);
    s.eta0 = b.var("eta0_" + sfx);
    s.eta_i = b.var("eta_i_" + sfx);
    s.eta_prop = b.var("eta_prop_" + sfx);
    segs.push_back(s);
  }
  const int z_bre_out = b.var("z_bre_out");
  const int z_bre_ret = b.var("z_bre_ret");

  b.problem.objective = Posynomial{{
      b.mono(1.0, {{W_fuel_out, 1.0}}),
      b.mono(1.0, {{W_fuel_ret, 1.0}}),
  }};

  const int n_vars_total = static_cast<int>(b.problem.variables.size());

  // Steady level flight, per segment.
  for (const Segment& s : segs) {
    b.mono_eq(0.5 * rho, {{s.V, 2.0}, {s.C_L, 1.0}, {S, 1.0}, {s.W, -1.0}});
    b.mono_ineq(0.5 * rho, {{s.V, 2.0}, {s.C_D, 1.0}, {S, 1.0}, {s.T, -1.0}});
    b.mono_eq(rho / c.get("mu"),
              {{s.V, 1.0}, {S, 0.5}, {A, -0.5}, {s.Re, -1.0}});
  }

  // Landing flight condition.
  b.mono_ineq(2.0 / (c.get("rho_sl") * c.get("C_Lmax")),
              {{W_MTO, 1.0}, {V_stall, -2.0}, {S, -1.0}});
  b.mono_ineq(1.0 / c.get("V_stall_max"), {{V_stall, 1.0}});

  // Sprint flight condition.
  {
    const Segment& sp = segs[2];
    b.mono_ineq(1.0, {{sp.T, 1.0}, {sp.V, 1.0}, {sp.eta0, -1.0},
                      {P_max, -1.0}});
    b.mono_ineq(c.get("V_sprint_min"), {{sp.V, -1.0}});
  }

  // Drag model, per segment. Variants hide some drag fits behind the
  // implicit black box; the feasible set does not change.
  for (size_t si = 0; si < segs.size(); ++si) {
    const Segment& s = segs[si];
    b.posy_ineq({
        b.mono(0.5, {{S, -1.0}, {s.C_D, -1.0}}),
        b.mono(1.0, {{s.C_Dp, 1.0}, {s.C_D, -1.0}}),
        b.mono(1.0 / (kPi * c.get("e_oswald")),
               {{s.C_L, 2.0}, {A, -1.0}, {s.C_D, -1.0}}),
    });
    const bool blackboxed =
        (variant == 1 && s.suffix == "sprint") || variant == 3;
    if (!blackboxed) {
      b.problem.posy_ineq.push_back(
          drag_fit_posynomial(s.C_L, tau, s.Re, s.C_Dp, n_vars_total));
    } else {
      BlackBoxFn f;
      f.name = "profile_drag_" + s.suffix;
      const int i_cl = s.C_L, i_tau = tau, i_re = s.Re, i_cdp = s.C_Dp;
      f.evaluator = [=](const Vec& x) {
        return drag_blackbox(x[i_cl], x[i_tau], x[i_re]) / x[i_cdp];
      };
      f.gradient = [=](const Vec& x) {
        const double fd = drag_blackbox(x[i_cl], x[i_tau], x[i_re]);
        const Vec dfd = drag_blackbox_gradient(x[i_cl], x[i_tau], x[i_re]);
        Vec grad = Vec::Zero(x.size());
        grad[i_cl] = dfd[0] / x[i_cdp];
        grad[i_tau] = dfd[1] / x[i_cdp];
        grad[i_re] = dfd[2] / x[i_cdp];
        grad[i_cdp] = -fd / (x[i_cdp] * x[i_cdp]);
        return grad;
      };
      b.problem.bb_ineq.push_back(std::move(f));
    }
  }

  // Propulsive efficiency, per segment.
  for (const Segment& s : segs) {
    b.mono_ineq(1.0 / c.get("eta_eng"), {{s.eta0, 1.0}, {s.eta_prop, -1.0}});
    b.mono_ineq(1.0 / c.get("eta_v"), {{s.eta_prop, 1.0}, {s.eta_i, -1.0}});
    b.posy_ineq({
        b.mono(1.0, {{s.eta_i, 1.0}}),
        b.mono(1.0 / (2.0 * rho * c.get("A_prop")),
               {{s.T, 1.0}, {s.eta_i, 2.0}, {s.V, -2.0}}),
    });
  }

  // Range constraints (outbound and return carry fuel-burn rows).
  b.mono_ineq(c.get("R_min"), {{R, -1.0}});
  const int z_bre[2] = {z_bre_out, z_bre_ret};
  const int w_fuel[2] = {W_fuel_out, W_fuel_ret};
  for (int si = 0; si < 2; ++si) {
    const Segment& s = segs[si];
    b.mono_ineq(g / c.get("h_fuel"),
                {{R, 1.0}, {s.T, 1.0}, {s.eta0, -1.0}, {s.W, -1.0},
                 {z_bre[si], -1.0}});
    b.posy_ineq({
        b.mono(1.0, {{z_bre[si], 1.0}, {s.W, 1.0}, {w_fuel[si], -1.0}}),
        b.mono(1.0 / 2.0,
               {{z_bre[si], 2.0}, {s.W, 1.0}, {w_fuel[si], -1.0}}),
        b.mono(1.0 / 6.0,
               {{z_bre[si], 3.0}, {s.W, 1.0}, {w_fuel[si], -1.0}}),
        b.mono(1.0 / 24.0,
               {{z_bre[si], 4.0}, {s.W, 1.0}, {w_fuel[si], -1.0}}),
    });
  }

  // Weight relations.
  b.mono_ineq(c.get("W_pay_min_kg") * g, {{W_pay, -1.0}});
  b.posy_ineq({
      b.mono(c.get("W_fixed"), {{W_tilde, -1.0}}),
      b.mono(1.0, {{W_pay, 1.0}, {W_tilde, -1.0}}),
      b.mono(1.0, {{W_eng, 1.0}, {W_tilde, -1.0}}),
  });
  b.posy_ineq({
      b.mono(1.0, {{W_tilde, 1.0}, {W_zfw, -1.0}}),
      b.mono(1.0, {{W_wing, 1.0}, {W_zfw, -1.0}}),
  });
  b.mono_ineq(0.0372, {{P_max, 0.803}, {W_eng, -1.0}});
  b.posy_ineq({
      b.mono(c.get("f_wadd"), {{W_web, 1.0}, {W_wing, -1.0}}),
      b.mono(c.get("f_wadd"), {{W_cap, 1.0}, {W_wing, -1.0}}),
  });
  // Segment weights: outbound covers the zero-fuel weight plus the return
  // fuel still aboard, takeoff adds the outbound fuel, sprint flies at the
  // outbound weight.
  b.posy_ineq({
      b.mono(1.0, {{W_zfw, 1.0}, {segs[0].W, -1.0}}),
      b.mono(1.0, {{W_fuel_ret, 1.0}, {segs[0].W, -1.0}}),
  });
  b.posy_ineq({
      b.mono(1.0, {{segs[0].W, 1.0}, {W_MTO, -1.0}}),
      b.mono(1.0, {{W_fuel_out, 1.0}, {W_MTO, -1.0}}),
  });
  b.mono_eq(1.0, {{segs[2].W, 1.0}, {segs[0].W, -1.0}});

  // Wing structural model.
  const double w_bar = c.get("w_bar");
  b.posy_ineq({
      b.mono(0.5, {{q, -1.0}}),
      b.mono(0.5, {{p, 1.0}, {q, -1.0}}),
  });
  b.mono_ineq(c.get("p_min"), {{p, -1.0}});
  b.mono_ineq(1.0 / c.get("tau_max"), {{tau, 1.0}});
  b.mono_ineq(1.0 / 24.0,
              {{W_tilde, 1.0}, {A, 1.0}, {p, 1.0}, {M_r, -1.0}});
  b.posy_ineq({
      b.mono(2.0 / 0.92, {{t_cap, 1.0}, {tau, -1.0}}),
      b.mono(2.0 / (0.92 * 0.92 * w_bar),
             {{I_cap, 1.0}, {tau, -2.0}, {t_cap, -1.0}}),
  });
  b.mono_ineq(c.get("N_lift") / (8.0 * c.get("sigma_max")),
              {{M_r, 1.0}, {A, 1.0}, {q, 2.0}, {tau, 1.0}, {S, -1.0},
               {I_cap, -1.0}});
  b.mono_ineq(c.get("N_lift") / (12.0 * c.get("sigma_max_shear")),
              {{A, 1.0}, {W_tilde, 1.0}, {q, 2.0}, {tau, -1.0}, {S, -1.0},
               {t_web, -1.0}});
  b.posy_ineq({
      b.mono(0.86, {{p, -2.38}, {nu, -3.94}}),
      b.mono(0.14, {{p, 0.56}, {nu, -3.94}}),
  });
  b.mono_ineq(8.0 * c.get("rho_cap") * g * w_bar / 3.0,
              {{t_cap, 1.0}, {S, 1.5}, {nu, 1.0}, {A, -0.5}, {W_cap, -1.0}});
  b.mono_ineq(8.0 * c.get("rho_web") * g * c.get("r_h") / 3.0,
              {{tau, 1.0}, {t_web, 1.0}, {S, 1.5}, {nu, 1.0}, {A, -0.5},
               {W_web, -1.0}});

  BenchmarkDef def;
  def.id = variant == 0 ? BenchmarkId::Hoburg0
           : variant == 1 ? BenchmarkId::Hoburg1
                          : BenchmarkId::Hoburg3;
  def.name = to_string(def.id);
  def.nominal_x0 = b.x0_from(c);
  def.problem = std::move(b.problem);
  def.constants_path = path;
  return def;
}

// ---------------------------------------------------------------------------
// Registry and reference handling

double constraint_violation(const StandardFormProblem& problem, const Vec& x) {
  const RowLayout layout = RowLayout::of(problem);
  ValueEval ev = evaluate_values(problem, x);
  if (!ev.finite) return std::numeric_limits<double>::infinity();
  double v = 0.0;
  for (int r = 0; r < layout.num_rows(); ++r) {
    const double c = ev.row_vals[r] - 1.0;
    v = std::max(v, layout.is_equality(r) ? std::abs(c) : c);
  }
  return v;
}

double kkt_stationarity(const StandardFormProblem& problem, const Vec& x) {
  IterateState state;
  state.point = evaluate_point(problem, x, /*with_logspace=*/true);
  if (!state.point.positive) return std::numeric_limits<double>::infinity();
  state.mu = Vec::Ones(problem.num_rows());
  state.B = Mat::Identity(problem.num_vars(), problem.num_vars());
  SubproblemSpec spec =
      build_subproblem(state, problem, Algorithm::SLCP, 1e6);
  SubsolverOptions sopts;
  sopts.tol = 1e-11;
  sopts.max_newton = 400;
  SubproblemSolution sol = solve_subproblem(spec, sopts);
  const Vec grad_l = lagrangian_gradient(state.point, sol.multipliers,
                                         problem, Algorithm::SLCP, false);
  return grad_l.cwiseAbs().maxCoeff();
}

std::optional<ReferenceOptimum> load_reference(const BenchmarkDef& def,
                                               const std::string& data_dir) {
  const std::string path = data_dir + "/references/" + def.name + ".txt";
  {
    std::ifstream probe(path);
    if (!probe) return std::nullopt;
  }
  ConstantsFile file = ConstantsFile::load(path);
  std::vector<std::string> keys = {"f_star"};
  for (const Variable& v : def.problem.variables) keys.push_back("x." + v.name);
  file.require(keys);
  ReferenceOptimum ref;
  ref.objective = file.get("f_star");
  ref.x.resize(def.problem.num_vars());
  for (const Variable& v : def.problem.variables) {
    ref.x[v.index] = file.get("x." + v.name);
  }
  return ref;
}

void save_reference(const BenchmarkDef& def, const ReferenceOptimum& ref,
                    const std::string& data_dir, const std::string& note) {
  const std::string path = data_dir + "/references/" + def.name + ".txt";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write reference file " + path);
  out.precision(17);
  out << "# " << def.name << " reference optimum\n";
  out << "# " << note << "\n";
  out << "f_star = " << ref.objective << "\n";
  for (const Variable& v : def.problem.variables) {
    out << "x." << v.name << " = " << ref.x[v.index] << "\n";
  }
}

BenchmarkDef load_benchmark(BenchmarkId id, const std::string& data_dir) {
  BenchmarkDef def;
  switch (id) {
    case BenchmarkId::SimpleExample:
      def = build_simple_example(data_dir);
      break;
    case BenchmarkId::Floudas:
      def = build_floudas(data_dir);
      break;
    case BenchmarkId::KirschenOzturk:
      def = build_kirschen_ozturk(data_dir);
      break;
    case BenchmarkId::Hoburg0:
      def = build_hoburg(0, data_dir);
      break;
    case BenchmarkId::Hoburg1:
      def = build_hoburg(1, data_dir);
      break;
    case BenchmarkId::Hoburg3:
      def = build_hoburg(3, data_dir);
      break;
  }
  def.reference = load_reference(def, data_dir);
  if (def.reference) {
    const double viol = constraint_violation(def.problem, def.reference->x);
    if (!(viol <= 1e-6)) {
      throw std::runtime_error("reference optimum for " + def.name +
                               " violates constraints by " +
                               std::to_string(viol));
    }
  }
  return def;
}

}  // namespace slcp
