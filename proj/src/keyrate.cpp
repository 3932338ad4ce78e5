#include "cvqkd/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include "cvqkd/special.hpp"

namespace cvqkd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// h(e) continued linearly past 1/2 and by 0 below 0, so the optimizer still
// sees a slope where the reported key length has flattened out.
double extended_entropy(double e) {
  if (e <= 0.0) return 0.0;
  if (e < 0.5) return binary_entropy(e);
  return 1.0 + (e - 0.5);
}

void validate_for_horizon(const ProtocolParams& pp, const Horizon& horizon) {
  if (!horizon.is_asymptotic()) {
    pp.validate();
    if (*horizon.rounds < 1) throw std::invalid_argument("Horizon: N must be positive");
    return;
  }
  if (!(pp.mu > 0.0) || !(pp.x_th > 0.0) || !(pp.beta >= 0.0))
    throw std::invalid_argument("ProtocolParams: mu and x_th must be positive");
  if (!(pp.p_sig > 0.0 && pp.p_test >= 0.0 && pp.p_trash >= 0.0) ||
      std::abs(pp.p_sig + pp.p_test + pp.p_trash - 1.0) > 1e-12)
    throw std::invalid_argument("ProtocolParams: invalid label probabilities");
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

double dual_objective(const ChannelModel& ch, const ProtocolParams& pp, const DualCoefficients& duals,
                      const TestFunction& tf, const Horizon& horizon, const SecurityBudget& budget) {
  duals.validate();
  const ParityMoments pm = parity_moments({pp.x_th, pp.beta});
  const double B = bound_B(pm, duals);
  const double q_minus = trash_minus_probability(pp.mu);
  if (horizon.is_asymptotic()) return B - duals.kappa * expected_lambda(ch, pp, tf) + duals.gamma * q_minus;

  const std::int64_t N = *horizon.rounds;
  RoundTally tally;
  tally.n_test = std::llround(pp.p_test * static_cast<double>(N));
  tally.n_trash = std::llround(pp.p_trash * static_cast<double>(N));
  tally.n_suc = N - tally.n_test - tally.n_trash;
  tally.f_sum = expected_test_sum(ch, pp, tf, static_cast<double>(N));
  const double U = phase_error_budget(tally, pp, duals, tf, B, budget, q_minus);
  return U / (pp.p_sig * static_cast<double>(N));
}

GainTerms evaluate_gain_terms(const ChannelModel& ch, const ProtocolParams& pp, const DualCoefficients& duals,
                              const TestFunction& tf, const Horizon& horizon, const SecurityBudget& budget) {
  ch.validate();
  duals.validate();
  validate_for_horizon(pp, horizon);

  GainTerms t;
  const DetectionProbs det = detection_probs(ch, pp);
  t.success = det.success();
  if (!(t.success > 0.0)) {
    t.objective = -kInf;
    return t;
  }
  t.e_bit = bit_error_rate(det.p_plus, det.p_minus);
  const ParityMoments pm = parity_moments({pp.x_th, pp.beta});
  t.bound = bound_B(pm, duals);
  const double q_minus = trash_minus_probability(pp.mu);

  if (horizon.is_asymptotic()) {
    t.phase_budget = t.bound - duals.kappa * expected_lambda(ch, pp, tf) + duals.gamma * q_minus;
    t.e_ph = t.phase_budget / t.success;
    const double sifted = pp.p_sig * t.success;
    const double leak = 1.1 * sifted * binary_entropy(t.e_bit);
    t.objective = sifted * (1.0 - extended_entropy(t.e_ph)) - leak;
    const double e = std::clamp(t.e_ph, 0.0, 1.0);
    t.gain = e < 0.5 ? std::max(0.0, sifted * (1.0 - binary_entropy(e)) - leak) : 0.0;
    return t;
  }

  const std::int64_t N = *horizon.rounds;
  const double Nd = static_cast<double>(N);
  RoundTally tally;
  tally.n_test = std::llround(pp.p_test * Nd);
  tally.n_trash = std::llround(pp.p_trash * Nd);
  const std::int64_t n_sig = std::max<std::int64_t>(0, N - tally.n_test - tally.n_trash);
  tally.n_suc = std::min(n_sig, static_cast<std::int64_t>(std::llround(pp.p_sig * Nd * t.success)));
  tally.n_fail = n_sig - tally.n_suc;
  tally.f_sum = expected_test_sum(ch, pp, tf, Nd);

  const double U = phase_error_budget(tally, pp, duals, tf, t.bound, budget, q_minus);
  t.phase_budget = U / (pp.p_sig * Nd);
  t.n_suc = tally.n_suc;
  const double h_ec = expected_cost_EC(static_cast<double>(tally.n_suc), t.e_bit);
  if (tally.n_suc == 0) {
    t.objective = -(std::ceil(budget.s) + budget.s_prime) / Nd;
    return t;
  }
  const double n_suc = static_cast<double>(tally.n_suc);
  t.e_ph = U / n_suc;
  t.n_fin = final_key_length(tally.n_suc, U, budget);
  t.gain = net_gain(t.n_fin, h_ec, budget, N);
  t.objective = (n_suc * (1.0 - extended_entropy(t.e_ph)) - std::ceil(budget.s) - h_ec - budget.s_prime) / Nd;
  return t;
}

double evaluate_gain(const ChannelModel& ch, const ProtocolParams& pp, const DualCoefficients& duals,
                     const TestFunction& tf, const Horizon& horizon, const SecurityBudget& budget) {
  return evaluate_gain_terms(ch, pp, duals, tf, horizon, budget).gain;
}

DualSearch optimize_duals(const ChannelModel& ch, const ProtocolParams& pp, const TestFunction& tf,
                          const Horizon& horizon, const SecurityBudget& budget, const OptimizerSettings& settings,
                          const std::optional<DualCoefficients>& warm) {
  const double cap = settings.dual_cap;
  auto decode = [cap](double a, double b) {
    return DualCoefficients{std::min(cap, std::exp(a)), std::min(cap, std::exp(b))};
  };
  auto J = [&](const DualCoefficients& d) {
    try {
      const double v = dual_objective(ch, pp, d, tf, horizon, budget);
      return std::isfinite(v) ? v : kInf;
    } catch (const std::exception&) {
      return kInf;
    }
  };
  auto f = [&](const std::vector<double>& y) { return J(decode(y[0], y[1])); };

  DualSearch best{{}, kInf, false};
  auto consider = [&](const DualCoefficients& d, double value) {
    if (value < best.objective) {
      best.duals = d;
      best.objective = value;
    }
  };

  DualCoefficients start{0.4, 1.0};
  if (warm && warm->kappa > 0.0 && warm->gamma > 0.0) start = *warm;
  const double lk = std::log(std::min(start.kappa, cap));
  const double lg = std::log(std::min(start.gamma, cap));

  std::mt19937_64 rng(settings.seed);
  bool any_converged = false;
  for (int k = 0; k < std::max(1, settings.inner_restarts); ++k) {
    std::vector<double> y0{lk, lg};
    if (k > 0) {
      y0[0] += 3.0 * (uniform01(rng) - 0.5);
      y0[1] += 3.0 * (uniform01(rng) - 0.5);
    }
    const NelderMeadResult r = nelder_mead(f, y0, settings.inner);
    any_converged = any_converged || r.converged;
    consider(decode(r.x[0], r.x[1]), r.value);
  }

  // Faces of the feasible quadrant, which the log parametrization never reaches.
  const DualCoefficients faces[] = {{best.duals.kappa, 0.0}, {0.0, best.duals.gamma}, {0.0, 0.0}};
  for (const auto& d : faces) consider(d, J(d));

  if (!any_converged || !std::isfinite(best.objective)) {
    best.used_grid_fallback = true;
    std::vector<double> axis{0.0};
    for (int i = 0; i < 101; ++i) axis.push_back(std::min(cap, std::pow(10.0, -4.0 + 7.0 * i / 100.0)));
    for (double k : axis)
      for (double g : axis) consider({k, g}, J({k, g}));
  }
  if (!std::isfinite(best.objective)) throw std::runtime_error("optimize_duals: objective is not finite anywhere");
  return best;
}

ProtocolParams default_initial_params() {
  ProtocolParams pp;
  pp.mu = 0.5;
  pp.x_th = 0.5;
  pp.p_sig = 0.8;
  pp.p_test = 0.1;
  pp.p_trash = 0.1;
  return pp;
}

namespace {

struct ProtocolCodec {
  bool asymptotic;

  std::vector<double> encode(const ProtocolParams& pp) const {
    std::vector<double> v{std::log(pp.mu), std::log(pp.x_th)};
    if (!asymptotic) {
      v.push_back(std::log(pp.p_sig / pp.p_trash));
      v.push_back(std::log(pp.p_test / pp.p_trash));
    }
    return v;
  }

  ProtocolParams decode(const std::vector<double>& v, const ChannelModel& ch) const {
    ProtocolParams pp;
    pp.mu = std::exp(std::clamp(v[0], std::log(1e-4), std::log(20.0)));
    pp.x_th = std::exp(std::clamp(v[1], std::log(1e-4), std::log(10.0)));
    if (asymptotic) {
      pp.p_sig = 1.0;
      pp.p_test = 0.0;
      pp.p_trash = 0.0;
    } else {
      const double a = std::clamp(v[2], -30.0, 30.0);
      const double b = std::clamp(v[3], -30.0, 30.0);
      const double top = std::max({a, b, 0.0});
      const double wa = std::exp(a - top), wb = std::exp(b - top), wc = std::exp(-top);
      const double z = wa + wb + wc;
      pp.p_test = wb / z;
      pp.p_trash = wc / z;
      pp.p_sig = 1.0 - pp.p_test - pp.p_trash;
    }
    return with_matched_beta(pp, ch);
  }
};

}  // namespace

KeyRatePoint optimize_protocol(const ChannelModel& ch, const TestFunction& tf, const Horizon& horizon,
                               const SecurityBudget& budget, const ProtocolParams& init,
                               const OptimizerSettings& settings) {
  ch.validate();
  const ProtocolCodec codec{horizon.is_asymptotic()};
  ProtocolParams start = init;
  if (!codec.asymptotic && !(start.p_test > 0.0 && start.p_trash > 0.0)) start = default_initial_params();

  struct Best {
    std::vector<double> v;
    DualCoefficients duals{0.4, 1.0};
    double gain = -1.0;
    double objective = -kInf;
    bool fallback = false;
  } best;
  best.v = codec.encode(start);
  bool have_duals = false;

  auto f = [&](const std::vector<double>& v) {
    try {
      const ProtocolParams pp = codec.decode(v, ch);
      const DualSearch ds = optimize_duals(ch, pp, tf, horizon, budget, settings,
                                           have_duals ? std::optional<DualCoefficients>(best.duals) : std::nullopt);
      const GainTerms t = evaluate_gain_terms(ch, pp, ds.duals, tf, horizon, budget);
      if (!std::isfinite(t.objective)) return kInf;
      if (t.gain > best.gain || (t.gain == best.gain && t.objective > best.objective)) {
        best.v = v;
        best.duals = ds.duals;
        best.gain = t.gain;
        best.objective = t.objective;
        best.fallback = ds.used_grid_fallback;
        have_duals = true;
      }
      return -t.objective;
    } catch (const std::exception&) {
      return kInf;
    }
  };

  std::mt19937_64 rng(settings.seed ^ 0x9e3779b97f4a7c15ULL);
  const std::vector<double> origin = best.v;
  for (int k = 0; k < std::max(1, settings.outer_restarts); ++k) {
    std::vector<double> v0 = k == 0 ? origin : best.v;
    if (k > 0)
      for (double& x : v0) x += uniform01(rng) - 0.5;
    nelder_mead(f, v0, settings.outer);
  }

  KeyRatePoint point;
  point.channel = ch;
  point.horizon = horizon;
  point.params = codec.decode(best.v, ch);
  point.duals = best.duals;
  point.dual_fallback = best.fallback;
  const GainTerms t = evaluate_gain_terms(ch, point.params, point.duals, tf, horizon, budget);
  point.gain = t.gain;
  point.e_bit = t.e_bit;
  point.success_fraction = point.params.p_sig * t.success;
  if (!horizon.is_asymptotic()) point.success_fraction = static_cast<double>(t.n_suc) / static_cast<double>(*horizon.rounds);
  point.feasible = point.gain > 0.0;
  if (!point.feasible) point.note = "no parameters with positive gain found";
  if (point.dual_fallback) point.note += point.note.empty() ? "dual grid fallback" : "; dual grid fallback";
  return point;
}

std::vector<KeyRatePoint> scan_eta(const ChannelModel& tmpl, std::span<const double> etas, const TestFunction& tf,
                                   const Horizon& horizon, const SecurityBudget& budget, const ProtocolParams& init,
                                   const OptimizerSettings& settings, unsigned threads) {
  std::vector<double> sorted(etas.begin(), etas.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<KeyRatePoint> points(sorted.size());

  auto solve = [&](std::size_t i, const ProtocolParams& start) {
    ChannelModel ch = tmpl;
    ch.eta = sorted[i];
    try {
      points[i] = optimize_protocol(ch, tf, horizon, budget, start, settings);
    } catch (const std::exception& e) {
      points[i] = KeyRatePoint{};
      points[i].channel = ch;
      points[i].horizon = horizon;
      points[i].params = start;
      points[i].note = e.what();
    }
  };

  if (threads <= 1) {
    ProtocolParams start = init;
    for (std::size_t k = sorted.size(); k-- > 0;) {
      solve(k, start);
      if (points[k].feasible) start = points[k].params;
    }
  } else {
    std::size_t next = 0;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i;
          {
            std::lock_guard<std::mutex> lock(mu);
            if (next >= sorted.size()) return;
            i = next++;
          }
          solve(i, init);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].gain + 1e-12 < points[i - 1].gain) {
      std::string& note = points[i].note;
      note += note.empty() ? "gain below the neighbour at lower eta" : "; gain below the neighbour at lower eta";
    }
  }
  return points;
}

}  // namespace cvqkd
