#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "homog/potential.hpp"
#include "homog/trigpoly.hpp"

namespace homog {

// angle configuration on the box, every entry in [0, 2pi)
struct TorusState {
  std::vector<double> angles;
};

// unbounded real configuration (lifted process state)
struct LatticeState {
  std::vector<double> values;
};

double wrap_angle(double x);                     // into [0, 2pi)
double wrap_signed(double x);                    // into [-pi, pi)
TorusState project(const LatticeState& x);       // Phi, coordinatewise mod 2pi

// One Euler-Maruyama step of the quotient diffusion
//   theta_k += b_k(theta) dt + sqrt(2 dt) noise_k,  reduced mod 2pi.
void step_quotient(const DriftEvaluator& drift, TorusState& state, double dt,
                   std::span<const double> noise);

struct GibbsConfig {
  int count = 256;        // retained states
  int burn_in = 2000;     // MALA proposals discarded
  int thinning = 10;      // proposals between retained states
  double step = 0.2;      // initial MALA time step (adapted during burn-in)
  int stall_window = 2000;
};

struct GibbsSampleSet {
  std::vector<TorusState> states;
  double acceptance = 0.0;  // post burn-in acceptance rate
  double step = 0.0;        // step size after adaptation
  GibbsConfig config;
  std::uint64_t seed = 0;
};

// Metropolis-adjusted Langevin chain targeting density prop to
// exp(-sum J_Lambda) on the box torus. The chain runs on unwrapped
// coordinates (the target is periodic) and records wrapped states,
// which keeps detailed balance exact on the quotient.
GibbsSampleSet gibbs_sample(const DriftEvaluator& drift, const GibbsConfig& cfg,
                            std::uint64_t seed);

struct DlrResult {
  double residual = 0.0;  // mean of E^Lambda phi - phi over samples
  double se = 0.0;
};

// DLR identity (finite kernel vs plain average) for |Lambda| <= 2 by
// tensor quadrature over T^Lambda.
DlrResult dlr_check(const DriftEvaluator& drift, const GibbsSampleSet& samples,
                    const std::vector<int>& lambda_sites, const TrigPoly& phi,
                    int quadrature_points = 64);

struct MixingCurve {
  std::vector<double> times;
  std::vector<double> sup_gap;   // max over starts of |p_t phi - <phi, mu0>|
  std::vector<double> gap_se;    // MC error at the maximizing start
  double alpha_hat = 0.0;        // polynomial decay exponent, K (c+t)^-alpha
  double K_hat = 0.0;
  double c_hat = 0.0;
  double exp_rate = 0.0;         // exponential-rate fit of the same curve
  double exp_rate_se = 0.0;
  bool inconclusive = false;     // MC error exceeded the gap scale
};

// Estimates p_t phi(y) over a finite start grid and fits the decay of the
// sup-gap. The finite grid makes this a lower bound of the true sup.
MixingCurve mixing_curve(const DriftEvaluator& drift, const TrigPoly& phi,
                         const std::vector<TorusState>& starts, double mu0_mean,
                         const std::vector<double>& times, int paths_per_start, double dt,
                         std::uint64_t seed, int workers);

// (L f)(y) = sum_k [ d2f/dy_k^2 + b_k df/dy_k ](y), exact on TrigPoly
double generator_apply(const DriftEvaluator& drift, const TrigPoly& f, const TorusState& y);

// Unwinds a discretely sampled torus path into the unique continuous real
// path with minimal increments. Throws AmbiguousWindingError when a step
// moves by pi or more.
std::vector<LatticeState> continuous_lift(const std::vector<TorusState>& path,
                                          const LatticeState& initial);

// Simulates quotient paths and hands each recorded state to `observe`
// (path_index, time_index, state). Noise comes from substream `path_index`
// of (seed, stream), so results do not depend on the worker count.
void simulate_quotient_paths(const DriftEvaluator& drift, const TorusState& start, double dt,
                             int n_steps, int record_every, int n_paths, std::uint64_t seed,
                             std::uint64_t stream, int workers,
                             const std::function<void(int, int, const TorusState&)>& observe);

}  // namespace homog
