#include "otmss/squeeze_dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "otmss/errors.hpp"

namespace otmss {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Vec2 = std::array<double, 2>;

double true_coth(double r) { return r == 0.0 ? kInf : coth_regularized(r); }

double mu2_rate_at(const ModeContext& ctx, double eta) {
  return ctx.mu2_rate ? ctx.mu2_rate(eta, ctx.k) : 0.0;
}

} // namespace

double SqueezeState::wrapped_phi() const {
  double w = std::remainder(phi, 2.0 * kPi); // [-pi, pi]
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

CouplingCoefficients ModeContext::couplings_at(double x) const {
  const double eta = -x / k;
  CouplingCoefficients c = couplings(eta, k, background, mu2_rate_at(*this, eta));
  if (zero_coupling) c.coupling = 0.0;
  return c;
}

double ModeContext::closed_factor(const CouplingCoefficients& c) const {
  if (power == CouplingPower::literal) return c.planck_mass * c.closed_strength();
  return c.coupling;
}

double coth_regularized(double r) {
  if (r == 0.0) return 0.0;
  const double a = std::abs(r);
  if (a < 1.0e-4) {
    const double r2 = r * r;
    return 1.0 / r + r / 3.0 - r * r2 / 45.0;
  }
  return 1.0 / std::tanh(r);
}

Rates rhs_conformal(const SqueezeState& s, const ModeContext& ctx) {
  const auto c = ctx.couplings_at(s.x);
  const double mp = c.planck_mass;
  const double lam_factor = ctx.closed_factor(c);
  const double sh2 = std::sinh(2.0 * s.r);
  const double ch = std::cosh(s.r);
  const double th = std::tanh(s.r);

  Rates out;
  const double num = -lam_factor * sh2 * std::cos(2.0 * s.phi) - sh2 * c.mu2_rate;
  const double den = sh2 + 2.0 * c.mu2 * ch * ch;
  out.dr = den == 0.0 ? 0.0 : num / den;
  // (1/2) M_P |1-mu1^2|^{1/2} [ |1-mu1^2|^{1/2} ... + |1-mu1^2|^{-1/2} (coth r + mu2) ]:
  // the first product is M_P|1-mu1^2| (or lambda), the second collapses to M_P.
  out.dphi = -mp * c.mu2 +
             0.5 * std::sin(2.0 * s.phi) *
                 (lam_factor * th / (1.0 + c.mu2 * th) + mp * (coth_regularized(s.r) + c.mu2));
  return out;
}

Rates rhs_transformed(const SqueezeState& s, const ModeContext& ctx) {
  const auto c = ctx.couplings_at(s.x);
  const double mp = c.planck_mass;
  const double lam_factor = ctx.closed_factor(c);
  const double th = std::tanh(s.r);

  Rates out;
  // tanh r / (tanh r + mu2) -> 1 as mu2 -> 0 at fixed r, including r = 0
  const double gate = c.mu2 == 0.0 ? 1.0 : th / (th + c.mu2);
  out.dr = -gate * (c.mu2_rate + lam_factor * std::cos(2.0 * s.phi));
  out.dphi = -mp * c.mu2 + 0.5 * std::sin(2.0 * s.phi) *
                               (lam_factor * th / (1.0 + c.mu2 * th) +
                                mp * coth_regularized(s.r) + mp * c.mu2);
  return out;
}

Rates rhs_closed_reference(const SqueezeState& s, const ModeContext& ctx) {
  const auto c = ctx.couplings_at(s.x);
  const double lam_factor = ctx.closed_factor(c);
  Rates out;
  out.dr = -lam_factor * std::cos(2.0 * s.phi);
  out.dphi = 0.5 * std::sin(2.0 * s.phi) *
             (lam_factor * std::tanh(s.r) + c.planck_mass * coth_regularized(s.r));
  return out;
}

Rates rhs_eta(RhsForm form, const SqueezeState& state, const ModeContext& ctx) {
  switch (form) {
  case RhsForm::conformal: return rhs_conformal(state, ctx);
  case RhsForm::transformed: return rhs_transformed(state, ctx);
  case RhsForm::closed_reference: return rhs_closed_reference(state, ctx);
  }
  throw std::logic_error("rhs_eta: unknown form");
}

Rates rhs_x(RhsForm form, const SqueezeState& state, const ModeContext& ctx) {
  const Rates d = rhs_eta(form, state, ctx);
  return {-d.dr / ctx.k, -d.dphi / ctx.k};
}

double AngleBalance::manifold_sine() const {
  if (drive == 0.0) return 0.0;
  if (std::isinf(bracket)) return 0.0;
  return 2.0 * drive / bracket;
}

double AngleBalance::separation(double abs_eta) const {
  if (std::isinf(bracket)) return kInf;
  const double s = manifold_sine();
  if (s >= 1.0) return 0.0;
  return bracket * std::sqrt(1.0 - s * s) * abs_eta;
}

AngleBalance angle_balance(RhsForm form, double r, double x, const ModeContext& ctx) {
  const auto c = ctx.couplings_at(x);
  const double mp = c.planck_mass;
  const double lam_factor = ctx.closed_factor(c);
  const double th = std::tanh(r);
  AngleBalance out;
  switch (form) {
  case RhsForm::conformal:
  case RhsForm::transformed:
    out.drive = mp * c.mu2;
    out.bracket = lam_factor * th / (1.0 + c.mu2 * th) + mp * true_coth(r) + mp * c.mu2;
    break;
  case RhsForm::closed_reference:
    out.drive = 0.0;
    out.bracket = lam_factor * th + mp * true_coth(r);
    break;
  }
  return out;
}

namespace {

double manifold_offset(double sine) { return 0.5 * std::asin(std::min(sine, 1.0)); }

// Stable roots are pi/2 - offset + m pi; the basin of the m-th root starts at
// the unstable root offset + m pi.
double branch_base(double phi_hint, double sine) {
  return kPi * std::floor((phi_hint - manifold_offset(sine)) / kPi);
}

} // namespace

std::optional<double> slaved_angle(RhsForm form, double r, double x, const ModeContext& ctx,
                                   double phi_hint) {
  const auto bal = angle_balance(form, r, x, ctx);
  const double sine = bal.manifold_sine();
  if (sine > 1.0) return std::nullopt;
  return branch_base(phi_hint, sine) + 0.5 * kPi - manifold_offset(sine);
}

void DynamicsConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("DynamicsConfig: " + what); };
  if (!(x_start > x_end)) fail("x_start must exceed x_end");
  if (!(x_end > 0.0)) fail("x_end must be positive");
  if (!(init_r >= 0.0)) fail("init_r must be >= 0");
  if (!std::isfinite(init_phi)) fail("init_phi must be finite");
  if (!(tolerances.abs > 0.0 && tolerances.rel > 0.0)) fail("tolerances must be positive");
  if (!(fixed_step > 0.0)) fail("fixed_step must be positive");
  if (samples_per_decade < 1) fail("samples_per_decade must be >= 1");
  if (!(r_cap > 0.0)) fail("r_cap must be positive");
  if (!(slaving_threshold > 0.0)) fail("slaving_threshold must be positive");
  if (max_steps == 0) fail("max_steps must be positive");
  background.validate();
}

const SqueezeState& Trajectory::sample_at(double x) const {
  for (const auto& s : samples) {
    if (s.x == x) return s;
  }
  throw std::out_of_range("Trajectory::sample_at: no sample recorded at requested x");
}

std::vector<double> output_grid(double x_start, double x_end, int samples_per_decade) {
  std::vector<double> xs{x_start};
  const double decades = std::log10(x_start / x_end);
  const auto count = static_cast<int>(std::floor(decades * samples_per_decade));
  for (int i = 1; i <= count; ++i) {
    const double x = x_start * std::pow(10.0, -static_cast<double>(i) / samples_per_decade);
    if (x > x_end) xs.push_back(x);
  }
  if (x_start > 1.0 && x_end < 1.0) xs.push_back(1.0);
  xs.push_back(x_end);
  std::sort(xs.begin(), xs.end(), std::greater<>());
  std::vector<double> out;
  for (double x : xs) {
    // exact landmarks (1, x_end) win over nearby stride points
    if (!out.empty() && std::abs(out.back() - x) <= 1.0e-12 * x) {
      if (x == 1.0 || x == x_end) out.back() = x;
      continue;
    }
    out.push_back(x);
  }
  return out;
}

namespace {

class Driver {
public:
  Driver(double k, const DynamicsConfig& cfg, SqueezeState init) : cfg_(cfg) {
    ctx_.k = k;
    ctx_.background = cfg.background;
    ctx_.power = cfg.power;
    ctx_.mu2_rate = cfg.mu2_rate;
    ctx_.zero_coupling = cfg.zero_coupling;
    x_ = cfg.x_start;
    y_ = {init.r, init.phi};
    traj_.k = k;
    traj_.form = cfg.form;
    traj_.stats.min_separation = kInf;
  }

  Trajectory run() {
    traj_.samples.push_back({y_[0], y_[1], x_});
    update_mode(true);
    const auto grid = output_grid(cfg_.x_start, cfg_.x_end, cfg_.samples_per_decade);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const bool ok = cfg_.integrator == IntegratorKind::adaptive ? advance_adaptive(grid[i])
                                                                  : advance_fixed(grid[i]);
      if (!ok) {
        traj_.samples.push_back({y_[0], y_[1], x_});
        break;
      }
      x_ = grid[i];
      traj_.samples.push_back({y_[0], y_[1], x_});
    }
    return std::move(traj_);
  }

private:
  double slaved_phi(double r, double x) const {
    const double sine = angle_balance(cfg_.form, r, x, ctx_).manifold_sine();
    return branch_ + 0.5 * kPi - manifold_offset(sine);
  }

  Vec2 derivative(double x, const Vec2& y) {
    ++traj_.stats.rhs_evaluations;
    const double phi = slaved_ ? slaved_phi(y[0], x) : y[1];
    const Rates d = rhs_x(cfg_.form, {y[0], phi, x}, ctx_);
    return {d.dr, slaved_ ? 0.0 : d.dphi};
  }

  double separation(double r, double x) const {
    return angle_balance(cfg_.form, r, x, ctx_).separation(x / ctx_.k);
  }

  void enter_slaved() {
    const double sine = angle_balance(cfg_.form, y_[0], x_, ctx_).manifold_sine();
    branch_ = branch_base(y_[1], sine);
    slaved_ = true;
    y_[1] = slaved_phi(y_[0], x_);
  }

  void update_mode(bool initial) {
    const double sep = separation(y_[0], x_);
    traj_.stats.min_separation = std::min(traj_.stats.min_separation, sep);
    const bool was = slaved_;
    switch (cfg_.angle) {
    case AngleTreatment::dynamic: slaved_ = false; break;
    case AngleTreatment::slaved:
      if (!slaved_) enter_slaved();
      break;
    case AngleTreatment::automatic:
      if (!slaved_ && sep >= cfg_.slaving_threshold) {
        enter_slaved();
      } else if (slaved_ && sep < 0.1 * cfg_.slaving_threshold) {
        slaved_ = false;
      }
      break;
    }
    if (slaved_ != was) {
      fsal_.reset();
      if (!initial) ++traj_.stats.mode_switches;
    }
  }

  // Post-processing of an accepted step; false when the cap is hit.
  bool finish_step() {
    if (y_[0] < 0.0) {
      y_[0] = 0.0;
      ++traj_.stats.clamped_steps;
      fsal_.reset();
    }
    if (slaved_) {
      y_[1] = slaved_phi(y_[0], x_);
      ++traj_.stats.slaved_steps;
    }
    ++traj_.stats.accepted_steps;
    update_mode(false);
    if (y_[0] > cfg_.r_cap) {
      traj_.stats.capped = true;
      return false;
    }
    return true;
  }

  void check_budget() const {
    if (traj_.stats.accepted_steps + traj_.stats.rejected_steps >= cfg_.max_steps) {
      std::ostringstream msg;
      msg << "integrate: step budget of " << cfg_.max_steps << " exhausted at x = " << x_
          << " (k = " << ctx_.k << ")";
      throw IntegrationError(msg.str(), {y_[0], y_[1], x_});
    }
  }

  double scale(int i, const Vec2& a, const Vec2& b) const {
    return cfg_.tolerances.abs +
           cfg_.tolerances.rel * std::max(std::abs(a[static_cast<std::size_t>(i)]),
                                          std::abs(b[static_cast<std::size_t>(i)]));
  }

  double norm(const Vec2& v, const Vec2& a, const Vec2& b) const {
    const int active = slaved_ ? 1 : 2;
    double acc = 0.0;
    for (int i = 0; i < active; ++i) {
      const double e = v[static_cast<std::size_t>(i)] / scale(i, a, b);
      acc += e * e;
    }
    return std::sqrt(acc / active);
  }

  double initial_step(double span) {
    const Vec2 f0 = fsal_ ? *fsal_ : derivative(x_, y_);
    fsal_ = f0;
    const double d0 = norm(y_, y_, y_);
    const double d1 = norm(f0, y_, y_);
    double h0 = (d0 < 1.0e-5 || d1 < 1.0e-5) ? 1.0e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, std::abs(span));
    const Vec2 y1{y_[0] - h0 * f0[0], y_[1] - h0 * f0[1]};
    const Vec2 f1 = derivative(x_ - h0, y1);
    const Vec2 df{f1[0] - f0[0], f1[1] - f0[1]};
    const double d2 = norm(df, y_, y_) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1.0e-15 ? std::max(1.0e-6, h0 * 1.0e-3) : std::pow(0.01 / dmax, 0.2);
    double h = std::min(100.0 * h0, h1);
    if (!std::isfinite(h) || h <= 0.0) h = 1.0e-6;
    return std::min(h, std::abs(span));
  }

  // Dormand-Prince 5(4), integrating towards decreasing x.
  bool advance_adaptive(double target) {
    if (h_ <= 0.0) h_ = initial_step(x_ - target);
    while (x_ > target) {
      check_budget();
      const double remaining = x_ - target;
      double h = std::min(h_, remaining);
      const bool last = h >= remaining * (1.0 - 1.0e-12);
      if (last) h = remaining;
      if (h < 1.0e-13 * x_) {
        std::ostringstream msg;
        msg << "integrate: step-size underflow (|h| = " << h << ") at x = " << x_
            << " (k = " << ctx_.k << ")";
        throw IntegrationError(msg.str(), {y_[0], y_[1], x_});
      }

      const double dx = -h;
      const Vec2 k1 = fsal_ ? *fsal_ : derivative(x_, y_);
      auto stage = [&](std::initializer_list<std::pair<double, const Vec2*>> terms) {
        Vec2 y = y_;
        for (const auto& [a, kv] : terms) {
          y[0] += dx * a * (*kv)[0];
          y[1] += dx * a * (*kv)[1];
        }
        return y;
      };
      const Vec2 k2 = derivative(x_ + dx / 5.0, stage({{1.0 / 5.0, &k1}}));
      const Vec2 k3 = derivative(x_ + dx * 3.0 / 10.0, stage({{3.0 / 40.0, &k1}, {9.0 / 40.0, &k2}}));
      const Vec2 k4 = derivative(x_ + dx * 4.0 / 5.0,
                                 stage({{44.0 / 45.0, &k1}, {-56.0 / 15.0, &k2}, {32.0 / 9.0, &k3}}));
      const Vec2 k5 = derivative(x_ + dx * 8.0 / 9.0,
                                 stage({{19372.0 / 6561.0, &k1},
                                        {-25360.0 / 2187.0, &k2},
                                        {64448.0 / 6561.0, &k3},
                                        {-212.0 / 729.0, &k4}}));
      const Vec2 k6 = derivative(x_ + dx, stage({{9017.0 / 3168.0, &k1},
                                                  {-355.0 / 33.0, &k2},
                                                  {46732.0 / 5247.0, &k3},
                                                  {49.0 / 176.0, &k4},
                                                  {-5103.0 / 18656.0, &k5}}));
      const Vec2 y_new = stage({{35.0 / 384.0, &k1},
                                {500.0 / 1113.0, &k3},
                                {125.0 / 192.0, &k4},
                                {-2187.0 / 6784.0, &k5},
                                {11.0 / 84.0, &k6}});
      const double x_new = last ? target : x_ + dx;
      const Vec2 k7 = derivative(x_new, y_new);
      Vec2 err{};
      for (std::size_t i = 0; i < 2; ++i) {
        err[i] = dx * (71.0 / 57600.0 * k1[i] - 71.0 / 16695.0 * k3[i] + 71.0 / 1920.0 * k4[i] -
                       17253.0 / 339200.0 * k5[i] + 22.0 / 525.0 * k6[i] - 1.0 / 40.0 * k7[i]);
      }
      double e = norm(err, y_, y_new);
      if (!std::isfinite(e) || !std::isfinite(y_new[0]) || !std::isfinite(y_new[1])) e = kInf;

      if (e <= 1.0) {
        x_ = x_new;
        y_ = y_new;
        fsal_ = k7;
        traj_.stats.max_error_estimate = std::max(traj_.stats.max_error_estimate, e);
        const double fac = e == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
        if (!last || fac < 1.0) h_ = h * fac;
        if (!finish_step()) return false;
      } else {
        ++traj_.stats.rejected_steps;
        const double fac = std::isfinite(e) ? std::clamp(0.9 * std::pow(e, -0.2), 0.2, 1.0) : 0.2;
        h_ = h * fac;
      }
    }
    return true;
  }

  // Classical RK4 with equal substeps covering [target, x].
  bool advance_fixed(double target) {
    const double span = x_ - target;
    const auto n = static_cast<std::size_t>(
        std::max(1.0, std::ceil(span / cfg_.fixed_step * (1.0 - 1.0e-12))));
    const double dx = -span / static_cast<double>(n);
    const double x0 = x_;
    for (std::size_t i = 0; i < n; ++i) {
      check_budget();
      const Vec2 k1 = derivative(x_, y_);
      const Vec2 k2 = derivative(x_ + 0.5 * dx, {y_[0] + 0.5 * dx * k1[0], y_[1] + 0.5 * dx * k1[1]});
      const Vec2 k3 = derivative(x_ + 0.5 * dx, {y_[0] + 0.5 * dx * k2[0], y_[1] + 0.5 * dx * k2[1]});
      const Vec2 k4 = derivative(x_ + dx, {y_[0] + dx * k3[0], y_[1] + dx * k3[1]});
      for (std::size_t j = 0; j < 2; ++j) {
        y_[j] += dx / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
      }
      x_ = i + 1 == n ? target : x0 + static_cast<double>(i + 1) * dx;
      if (!std::isfinite(y_[0]) || !std::isfinite(y_[1])) {
        std::ostringstream msg;
        msg << "integrate: fixed-step RK4 produced a non-finite state at x = " << x_
            << " (k = " << ctx_.k << "); reduce fixed_step";
        throw IntegrationError(msg.str(), traj_.samples.back());
      }
      if (!finish_step()) return false;
    }
    return true;
  }

  const DynamicsConfig& cfg_;
  ModeContext ctx_;
  double x_ = 0.0;
  Vec2 y_{};
  bool slaved_ = false;
  double branch_ = 0.0;
  double h_ = 0.0;
  std::optional<Vec2> fsal_;
  Trajectory traj_;
};

} // namespace

Trajectory integrate(double k, const DynamicsConfig& config, std::optional<SqueezeState> init) {
  if (!(k > 0.0)) throw DomainError("integrate: wavenumber must be positive");
  config.validate();
  SqueezeState start{config.init_r, config.init_phi, config.x_start};
  if (init) {
    start.r = init->r;
    start.phi = init->phi;
  }
  if (config.zero_coupling) start.r = 0.0;
  if (!(start.r >= 0.0)) throw std::invalid_argument("integrate: initial r must be >= 0");
  Driver driver(k, config, start);
  return driver.run();
}

std::vector<GridPoint> evolve_grid(std::span<const double> k_grid, const DynamicsConfig& config) {
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    if (!(k_grid[i] > 0.0)) throw std::invalid_argument("evolve_grid: wavenumbers must be positive");
    if (i > 0 && k_grid[i] < k_grid[i - 1]) {
      throw std::invalid_argument("evolve_grid: k grid must be non-decreasing");
    }
  }
  config.validate();

  std::vector<GridPoint> out(k_grid.size());
  auto solve_one = [&](std::size_t i) {
    GridPoint& gp = out[i];
    gp.k = k_grid[i];
    try {
      const Trajectory t = integrate(gp.k, config);
      gp.stats = t.stats;
      if (config.eval_point == EvalPoint::horizon_crossing && !t.stats.capped &&
          config.x_start > 1.0 && config.x_end < 1.0) {
        gp.state = t.sample_at(1.0);
      } else {
        gp.state = t.back();
      }
    } catch (const IntegrationError& e) {
      gp.failed = true;
      gp.error = e.what();
      gp.state = e.last_good();
    } catch (const std::exception& e) {
      gp.failed = true;
      gp.error = e.what();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(config.threads,
                                                           static_cast<unsigned>(k_grid.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < k_grid.size(); ++i) solve_one(i);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < k_grid.size(); i += workers) solve_one(i);
      });
    }
  }
  return out;
}

RhsForm parse_rhs_form(const std::string& text) {
  if (text == "conformal") return RhsForm::conformal;
  if (text == "transformed") return RhsForm::transformed;
  if (text == "closed-reference") return RhsForm::closed_reference;
  throw std::invalid_argument("unknown form '" + text +
                              "' (expected conformal|transformed|closed-reference)");
}

CouplingPower parse_coupling_power(const std::string& text) {
  if (text == "literal") return CouplingPower::literal;
  if (text == "hamiltonian-consistent") return CouplingPower::hamiltonian_consistent;
  throw std::invalid_argument("unknown coupling power '" + text +
                              "' (expected literal|hamiltonian-consistent)");
}

AngleTreatment parse_angle_treatment(const std::string& text) {
  if (text == "auto") return AngleTreatment::automatic;
  if (text == "dynamic") return AngleTreatment::dynamic;
  if (text == "slaved") return AngleTreatment::slaved;
  throw std::invalid_argument("unknown angle treatment '" + text + "' (expected auto|dynamic|slaved)");
}

IntegratorKind parse_integrator(const std::string& text) {
  if (text == "adaptive") return IntegratorKind::adaptive;
  if (text == "fixed-step") return IntegratorKind::fixed_step;
  throw std::invalid_argument("unknown integrator '" + text + "' (expected adaptive|fixed-step)");
}

EvalPoint parse_eval_point(const std::string& text) {
  if (text == "super-horizon") return EvalPoint::super_horizon;
  if (text == "horizon-crossing") return EvalPoint::horizon_crossing;
  throw std::invalid_argument("unknown evaluation point '" + text +
                              "' (expected super-horizon|horizon-crossing)");
}

std::string to_string(RhsForm value) {
  switch (value) {
  case RhsForm::conformal: return "conformal";
  case RhsForm::transformed: return "transformed";
  case RhsForm::closed_reference: return "closed-reference";
  }
  return "?";
}

std::string to_string(CouplingPower value) {
  return value == CouplingPower::literal ? "literal" : "hamiltonian-consistent";
}

std::string to_string(AngleTreatment value) {
  switch (value) {
  case AngleTreatment::automatic: return "auto";
  case AngleTreatment::dynamic: return "dynamic";
  case AngleTreatment::slaved: return "slaved";
  }
  return "?";
}

std::string to_string(IntegratorKind value) {
  return value == IntegratorKind::adaptive ? "adaptive" : "fixed-step";
}

std::string to_string(EvalPoint value) {
  return value == EvalPoint::super_horizon ? "super-horizon" : "horizon-crossing";
}

} // namespace otmss
