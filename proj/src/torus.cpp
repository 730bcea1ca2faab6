#include "homog/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "homog/errors.hpp"
#include "homog/parallel.hpp"
#include "homog/rng.hpp"
#include "homog/stats.hpp"

namespace homog {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double wrap_angle(double x) {
  double y = std::fmod(x, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  if (y >= kTwoPi) y = 0.0;
  return y;
}

double wrap_signed(double x) {
  double y = std::fmod(x + std::numbers::pi, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  return y - std::numbers::pi;
}

TorusState project(const LatticeState& x) {
  TorusState out;
  out.angles.resize(x.values.size());
  for (std::size_t i = 0; i < x.values.size(); ++i) out.angles[i] = wrap_angle(x.values[i]);
  return out;
}

void step_quotient(const DriftEvaluator& drift, TorusState& state, double dt,
                   std::span<const double> noise) {
  if (dt <= 0.0) throw DomainError("step_quotient: dt must be positive");
  const std::size_t n = state.angles.size();
  if (noise.size() != n) throw DomainError("step_quotient: noise size mismatch");
  for (double z : noise) {
    if (!std::isfinite(z)) throw NumericError("step_quotient: non-finite noise");
  }
  static thread_local std::vector<double> b;
  b.resize(n);
  drift.drift_all(state.angles, b);
  const double root = std::sqrt(2.0 * dt);
  for (std::size_t k = 0; k < n; ++k)
    state.angles[k] = wrap_angle(state.angles[k] + b[k] * dt + root * noise[k]);
}

GibbsSampleSet gibbs_sample(const DriftEvaluator& drift, const GibbsConfig& cfg,
                            std::uint64_t seed) {
  if (cfg.count < 1) throw ConfigError("gibbs_sample: count must be >= 1");
  if (cfg.burn_in < 0 || cfg.thinning < 0) throw ConfigError("gibbs_sample: bad chain config");

  const int n = drift.n_sites();
  RngStream rng(seed, stream_id::kGibbs);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& v : x) v = rng.uniform() * kTwoPi;

  std::vector<double> bx(x.size()), bp(x.size()), prop(x.size());
  drift.drift_all(x, bx);
  double ex = drift.total_energy(x);

  double h = cfg.step;
  double log_h = std::log(h);
  const double target = 0.574;  // optimal MALA acceptance
  long accepted = 0, proposed = 0, stall = 0;

  GibbsSampleSet out;
  out.config = cfg;
  out.seed = seed;
  out.states.reserve(static_cast<std::size_t>(cfg.count));

  const long total_proposals =
      cfg.burn_in + static_cast<long>(cfg.count) * std::max(cfg.thinning, 1);
  for (long it = 0; it < total_proposals; ++it) {
    const double root = std::sqrt(2.0 * h);
    for (std::size_t k = 0; k < x.size(); ++k) prop[k] = x[k] + h * bx[k] + root * rng.normal();
    drift.drift_all(prop, bp);
    double ep = drift.total_energy(prop);
    // log q(x | prop) - log q(prop | x), Gaussian kernels with drift means
    double fwd = 0.0, rev = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      double df = prop[k] - x[k] - h * bx[k];
      double dr = x[k] - prop[k] - h * bp[k];
      fwd += df * df;
      rev += dr * dr;
    }
    double log_alpha = (ex - ep) + (fwd - rev) / (4.0 * h);
    bool accept = std::log(rng.uniform_pos()) < log_alpha;
    if (accept) {
      x = prop;
      std::swap(bx, bp);
      ex = ep;
    }

    if (it < cfg.burn_in) {
      // Robbins-Monro step adaptation, frozen after burn-in
      double rate = std::exp(std::min(0.0, log_alpha));
      log_h += (rate - target) / std::sqrt(static_cast<double>(it + 1));
      log_h = std::clamp(log_h, std::log(1e-5), std::log(2.0));
      h = std::exp(log_h);
      drift.drift_all(x, bx);  // step changed; refresh cached drift (cheap)
      continue;
    }

    ++proposed;
    if (accept) {
      ++accepted;
      stall = 0;
    } else if (++stall >= cfg.stall_window) {
      throw SamplerStallError("gibbs_sample: zero acceptance over a full window");
    }
    long k_post = it - cfg.burn_in + 1;
    if (k_post % std::max(cfg.thinning, 1) == 0 &&
        static_cast<int>(out.states.size()) < cfg.count) {
      TorusState st;
      st.angles.resize(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) st.angles[i] = wrap_angle(x[i]);
      out.states.push_back(std::move(st));
    }
  }
  if (static_cast<int>(out.states.size()) != cfg.count)
    throw NumericError("gibbs_sample: chain produced fewer states than requested");
  out.acceptance = proposed > 0 ? static_cast<double>(accepted) / proposed : 1.0;
  out.step = h;
  return out;
}

DlrResult dlr_check(const DriftEvaluator& drift, const GibbsSampleSet& samples,
                    const std::vector<int>& lambda_sites, const TrigPoly& phi,
                    int quadrature_points) {
  if (lambda_sites.empty() || lambda_sites.size() > 2)
    throw DomainError("dlr_check: |Lambda| must be 1 or 2");
  if (samples.states.empty()) throw DomainError("dlr_check: no samples");

  auto kernel = [&](const TorusState& y, int npts) {
    std::vector<double> cfg(y.angles.begin(), y.angles.end());
    double num = 0.0, den = 0.0;
    const double step = kTwoPi / npts;
    if (lambda_sites.size() == 1) {
      for (int i = 0; i < npts; ++i) {
        cfg[static_cast<std::size_t>(lambda_sites[0])] = (i + 0.5) * step;
        double w = std::exp(-drift.local_energy(lambda_sites, cfg));
        num += w * phi(cfg);
        den += w;
      }
    } else {
      for (int i = 0; i < npts; ++i) {
        cfg[static_cast<std::size_t>(lambda_sites[0])] = (i + 0.5) * step;
        for (int j = 0; j < npts; ++j) {
          cfg[static_cast<std::size_t>(lambda_sites[1])] = (j + 0.5) * step;
          double w = std::exp(-drift.local_energy(lambda_sites, cfg));
          num += w * phi(cfg);
          den += w;
        }
      }
    }
    return num / den;
  };

  std::vector<double> diffs(samples.states.size());
  for (std::size_t i = 0; i < samples.states.size(); ++i) {
    const TorusState& y = samples.states[i];
    double full = kernel(y, quadrature_points);
    if (i == 0) {
      // midpoint rule on smooth periodic integrands converges spectrally;
      // verify once per call that the grid is resolved
      double coarse = kernel(y, quadrature_points / 2);
      if (std::abs(full - coarse) > 1e-8 * (1.0 + std::abs(full)))
        throw NumericError("dlr_check: quadrature non-convergence");
    }
    diffs[i] = full - phi(y.angles);
  }
  auto ms = stats::mean_se(diffs);
  return {ms.mean, ms.se};
}

MixingCurve mixing_curve(const DriftEvaluator& drift, const TrigPoly& phi,
                         const std::vector<TorusState>& starts, double mu0_mean,
                         const std::vector<double>& times, int paths_per_start, double dt,
                         std::uint64_t seed, int workers) {
  if (starts.empty() || times.empty()) throw DomainError("mixing_curve: empty grid");
  const int n_starts = static_cast<int>(starts.size());
  const int n_times = static_cast<int>(times.size());
  std::vector<int> step_of(times.size());
  for (int t = 0; t < n_times; ++t) {
    step_of[static_cast<std::size_t>(t)] =
        std::max(1, static_cast<int>(std::llround(times[static_cast<std::size_t>(t)] / dt)));
  }
  int n_steps = *std::max_element(step_of.begin(), step_of.end());

  // per (start, path): phi at each recorded time
  std::vector<double> vals(static_cast<std::size_t>(n_starts) * paths_per_start * n_times, 0.0);
  parallel_for(static_cast<std::size_t>(n_starts) * paths_per_start, workers, [&](std::size_t task) {
    int si = static_cast<int>(task / static_cast<std::size_t>(paths_per_start));
    RngStream rng(seed, stream_id::kMixing, task);
    TorusState st = starts[static_cast<std::size_t>(si)];
    std::vector<double> noise(st.angles.size());
    int next_rec = 0;
    for (int s = 1; s <= n_steps && next_rec < n_times; ++s) {
      for (auto& z : noise) z = rng.normal();
      step_quotient(drift, st, dt, noise);
      while (next_rec < n_times && step_of[static_cast<std::size_t>(next_rec)] == s) {
        vals[task * static_cast<std::size_t>(n_times) + static_cast<std::size_t>(next_rec)] =
            phi(st.angles);
        ++next_rec;
      }
    }
  });

  MixingCurve out;
  out.times = times;
  out.sup_gap.resize(times.size());
  out.gap_se.resize(times.size());
  const double pps = static_cast<double>(paths_per_start);
  for (int t = 0; t < n_times; ++t) {
    double best = -1.0, best_se = 0.0;
    for (int si = 0; si < n_starts; ++si) {
      double m = 0.0, m2 = 0.0;
      for (int p = 0; p < paths_per_start; ++p) {
        std::size_t task = static_cast<std::size_t>(si) * paths_per_start + p;
        double v = vals[task * static_cast<std::size_t>(n_times) + static_cast<std::size_t>(t)];
        m += v;
        m2 += v * v;
      }
      m /= pps;
      double var = std::max(0.0, m2 / pps - m * m);
      double se = std::sqrt(var / pps);
      double gap = std::abs(m - mu0_mean);
      if (gap > best) {
        best = gap;
        best_se = se;
      }
    }
    out.sup_gap[static_cast<std::size_t>(t)] = best;
    out.gap_se[static_cast<std::size_t>(t)] = best_se;
  }

  // fits use only points resolved above the MC noise floor
  std::vector<double> ts, lg;
  for (std::size_t t = 0; t < times.size(); ++t) {
    if (out.sup_gap[t] > 3.0 * out.gap_se[t] && out.sup_gap[t] > 0.0) {
      ts.push_back(times[t]);
      lg.push_back(std::log(out.sup_gap[t]));
    }
  }
  if (ts.size() < 3) {
    out.inconclusive = true;
    return out;
  }
  auto ef = stats::linear_fit(ts, lg);
  out.exp_rate = -ef.slope;
  out.exp_rate_se = ef.slope_se;

  double best_res = 1e300;
  for (double c : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    std::vector<double> lct(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) lct[i] = std::log(c + ts[i]);
    auto pf = stats::linear_fit(lct, lg);
    if (pf.residual_rms < best_res) {
      best_res = pf.residual_rms;
      out.alpha_hat = -pf.slope;
      out.K_hat = std::exp(pf.intercept);
      out.c_hat = c;
    }
  }
  return out;
}

double generator_apply(const DriftEvaluator& drift, const TrigPoly& f, const TorusState& y) {
  if (f.max_slot() >= drift.n_sites())
    throw DomainError("generator_apply: observable window outside box");
  double out = 0.0;
  for (int k : f.slots()) {
    TrigPoly d1 = f.derivative(k);
    TrigPoly d2 = d1.derivative(k);
    out += d2(y.angles) + drift.drift(k, y.angles) * d1(y.angles);
  }
  return out;
}

std::vector<LatticeState> continuous_lift(const std::vector<TorusState>& path,
                                          const LatticeState& initial) {
  if (path.empty()) throw DomainError("continuous_lift: empty path");
  const std::size_t n = initial.values.size();
  if (path[0].angles.size() != n) throw DomainError("continuous_lift: size mismatch");
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(wrap_signed(initial.values[k] - path[0].angles[k])) > 1e-9)
      throw DomainError("continuous_lift: initial state does not project to the path start");
  }
  std::vector<LatticeState> out;
  out.reserve(path.size());
  out.push_back(initial);
  for (std::size_t t = 1; t < path.size(); ++t) {
    LatticeState next = out.back();
    for (std::size_t k = 0; k < n; ++k) {
      double inc = wrap_signed(path[t].angles[k] - path[t - 1].angles[k]);
      if (std::abs(inc) >= std::numbers::pi - 1e-12)
        throw AmbiguousWindingError("continuous_lift: increment of magnitude >= pi; refine dt");
      next.values[k] += inc;
    }
    out.push_back(std::move(next));
  }
  return out;
}

void simulate_quotient_paths(const DriftEvaluator& drift, const TorusState& start, double dt,
                             int n_steps, int record_every, int n_paths, std::uint64_t seed,
                             std::uint64_t stream, int workers,
                             const std::function<void(int, int, const TorusState&)>& observe) {
  parallel_for(static_cast<std::size_t>(n_paths), workers, [&](std::size_t p) {
    RngStream rng(seed, stream, p);
    TorusState st = start;
    std::vector<double> noise(st.angles.size());
    observe(static_cast<int>(p), 0, st);
    int rec = 1;
    for (int s = 1; s <= n_steps; ++s) {
      for (auto& z : noise) z = rng.normal();
      step_quotient(drift, st, dt, noise);
      if (s % record_every == 0) observe(static_cast<int>(p), rec++, st);
    }
  });
}

}  // namespace homog
