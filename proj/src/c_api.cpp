#include "phasespace/phasespace.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <stdexcept>
#include <string>

#include "phasespace/cat_states.hpp"
#include "phasespace/gaussian_state.hpp"
#include "phasespace/grid.hpp"
#include "phasespace/io.hpp"
#include "phasespace/oscillator.hpp"
#include "phasespace/photon_statistics.hpp"
#include "phasespace/symplectic.hpp"

using namespace phasespace;

struct ps_context {
  double tol = kDefaultSymplecticTolerance;
  int threads = 1;
  std::string last_error;
};

struct ps_hamiltonian {
  QuadraticHamiltonian h;
};

struct ps_propagator {
  PropagatorReal p;
};

struct ps_state {
  GaussianState s;
};

struct ps_distribution {
  PhotonDistribution d;
};

struct ps_profile {
  FrequencyProfile p;
};

struct ps_trajectory {
  EpsilonTrajectory tr;
};

struct ps_cat {
  CatState cat;
};

namespace {

ps_status status_of(ErrorCode code) { return static_cast<ps_status>(static_cast<int>(code) + 1); }

ps_status record(ps_context* ctx, ps_status status, const std::string& message) {
  if (ctx != nullptr) ctx->last_error = message;
  return status;
}

// Thrown for null arguments so they map to PS_ERR_NULL_POINTER.
struct NullArgument : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runs body, translating exceptions into status codes and messages.
template <typename Body>
ps_status guarded(ps_context* ctx, Body&& body) {
  if (ctx == nullptr) return PS_ERR_NULL_POINTER;
  try {
    body();
    ctx->last_error.clear();
    return PS_OK;
  } catch (const NullArgument& e) {
    return record(ctx, PS_ERR_NULL_POINTER, e.what());
  } catch (const Error& e) {
    return record(ctx, status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return record(ctx, PS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(ctx, PS_ERR_INTERNAL, e.what());
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw NullArgument(std::string(what) + " must not be null");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

PhaseGridSpec spec_of(const ps_grid* grid) {
  require(grid, "grid");
  PhaseGridSpec spec{grid->p_min, grid->p_max, grid->q_min, grid->q_max, grid->points};
  spec.validate();
  return spec;
}

void copy_values(const PhaseGrid& grid, double* values) {
  std::memcpy(values, grid.values.data(), grid.values.size() * sizeof(double));
}

void check_mode(const GaussianState& s, int mode) {
  if (mode < 0 || mode >= s.n_modes()) fail(ErrorCode::kIndexOutOfRange, "mode index out of range");
}

EpsPair pair_at(const ps_profile* profile, double t) {
  if (!std::isfinite(t) || t < 0.0) fail(ErrorCode::kInvalidArgument, "time must be finite and nonnegative");
  if (t == 0.0) return EpsPair::initial();
  require(profile, "profile");
  return solve_epsilon(profile->p, t, default_epsilon_steps(profile->p, t)).back();
}

}  // namespace

extern "C" {

const char* ps_status_name(ps_status status) {
  if (status == PS_OK) return "Ok";
  if (status == PS_ERR_NULL_POINTER) return "NullPointer";
  if (status == PS_ERR_INTERNAL) return "Internal";
  if (status > PS_OK && status < PS_ERR_NULL_POINTER) {
    return error_name(static_cast<ErrorCode>(static_cast<int>(status) - 1)).data();
  }
  return "Unknown";
}

const char* ps_version(void) { return "0.1.0"; }

void ps_string_free(char* s) { std::free(s); }

ps_status ps_context_create(ps_context** out) {
  if (out == nullptr) return PS_ERR_NULL_POINTER;
  *out = new (std::nothrow) ps_context();
  return *out != nullptr ? PS_OK : PS_ERR_INTERNAL;
}

void ps_context_destroy(ps_context* ctx) { delete ctx; }

ps_status ps_context_set_tolerance(ps_context* ctx, double tol) {
  return guarded(ctx, [&] {
    if (!(tol > 0.0) || !std::isfinite(tol)) fail(ErrorCode::kConfigInvalid, "tolerance must be positive");
    ctx->tol = tol;
  });
}

ps_status ps_context_set_threads(ps_context* ctx, int threads) {
  return guarded(ctx, [&] {
    if (threads < 1 || threads > 256) fail(ErrorCode::kConfigInvalid, "thread count must lie in [1, 256]");
    ctx->threads = threads;
  });
}

const char* ps_context_last_error(const ps_context* ctx) { return ctx != nullptr ? ctx->last_error.c_str() : ""; }

ps_status ps_hamiltonian_from_json(ps_context* ctx, const char* json, ps_hamiltonian** out) {
  return guarded(ctx, [&] {
    require(json, "json");
    require(out, "out");
    *out = new ps_hamiltonian{hamiltonian_from_json(json)};
  });
}

void ps_hamiltonian_destroy(ps_hamiltonian* h) { delete h; }

ps_status ps_propagator_compute(ps_context* ctx, const ps_hamiltonian* h, double t, int steps, ps_propagator** out) {
  return guarded(ctx, [&] {
    require(h, "hamiltonian");
    require(out, "out");
    if (!std::isfinite(t) || t < 0.0) fail(ErrorCode::kInvalidArgument, "time must be finite and nonnegative");
    if (steps < 0) fail(ErrorCode::kInvalidArgument, "steps must be nonnegative");
    if (steps == 0 && h->h.is_time_independent()) {
      *out = new ps_propagator{propagator_const(h->h.b(0.0), h->h.c(0.0), t, ctx->tol)};
    } else {
      const int n = steps > 0 ? steps : default_steps(h->h, t);
      *out = new ps_propagator{evolve_real(h->h, t, n, ctx->tol)};
    }
  });
}

ps_status ps_propagator_inverse(ps_context* ctx, const ps_propagator* p, ps_propagator** out) {
  return guarded(ctx, [&] {
    require(p, "propagator");
    require(out, "out");
    *out = new ps_propagator{p->p.inverse(ctx->tol)};
  });
}

ps_status ps_propagator_from_json(ps_context* ctx, const char* json, ps_propagator** out) {
  return guarded(ctx, [&] {
    require(json, "json");
    require(out, "out");
    *out = new ps_propagator{propagator_from_json(json, ctx->tol)};
  });
}

ps_status ps_propagator_to_json(ps_context* ctx, const ps_propagator* p, char** out) {
  return guarded(ctx, [&] {
    require(p, "propagator");
    require(out, "out");
    *out = copy_string(propagator_to_json(p->p));
  });
}

ps_status ps_propagator_defect(ps_context* ctx, const ps_propagator* p, double* out) {
  return guarded(ctx, [&] {
    require(p, "propagator");
    require(out, "out");
    *out = symplectic_defect(p->p.lambda());
  });
}

void ps_propagator_destroy(ps_propagator* p) { delete p; }

ps_status ps_state_from_json(ps_context* ctx, const char* json, ps_state** out) {
  return guarded(ctx, [&] {
    require(json, "json");
    require(out, "out");
    *out = new ps_state{state_from_json(json)};
  });
}

ps_status ps_state_to_json(ps_context* ctx, const ps_state* s, char** out) {
  return guarded(ctx, [&] {
    require(s, "state");
    require(out, "out");
    *out = copy_string(state_to_json(s->s));
  });
}

ps_status ps_state_n_modes(ps_context* ctx, const ps_state* s, int* out) {
  return guarded(ctx, [&] {
    require(s, "state");
    require(out, "out");
    *out = s->s.n_modes();
  });
}

ps_status ps_state_evolve(ps_context* ctx, const ps_state* s, const ps_propagator* p, ps_state** out) {
  return guarded(ctx, [&] {
    require(s, "state");
    require(p, "propagator");
    require(out, "out");
    *out = new ps_state{evolve(s->s, p->p)};
  });
}

ps_status ps_state_wigner(ps_context* ctx, const ps_state* s, const double* point, size_t len, double* out) {
  return guarded(ctx, [&] {
    require(s, "state");
    require(point, "point");
    require(out, "out");
    if (len != static_cast<size_t>(s->s.dim())) fail(ErrorCode::kDimensionMismatch, "point must have 2N entries");
    *out = wigner(s->s, Eigen::Map<const RealVector>(point, static_cast<Eigen::Index>(len)));
  });
}

ps_status ps_state_q_function(ps_context* ctx, const ps_state* s, const double* beta, size_t n_modes, double* out) {
  return guarded(ctx, [&] {
    require(s, "state");
    require(beta, "beta");
    require(out, "out");
    if (n_modes != static_cast<size_t>(s->s.n_modes())) fail(ErrorCode::kDimensionMismatch, "beta must have N entries");
    ComplexVector b(static_cast<Eigen::Index>(n_modes));
    for (size_t j = 0; j < n_modes; ++j) b(static_cast<Eigen::Index>(j)) = Complex(beta[2 * j], beta[2 * j + 1]);
    *out = q_function(s->s, b);
  });
}

ps_status ps_state_mean_photon(ps_context* ctx, const ps_state* s, int mode, double* out) {
  return guarded(ctx, [&] {
    require(s, "state");
    require(out, "out");
    check_mode(s->s, mode);
    *out = mean_photon(s->s, mode).value;
  });
}

ps_status ps_state_wigner_grid(ps_context* ctx, const ps_state* s, int mode, const ps_grid* grid, double* values) {
  return guarded(ctx, [&] {
    require(s, "state");
    require(values, "values");
    check_mode(s->s, mode);
    const PhaseGridSpec spec = spec_of(grid);
    const WignerEvaluator w(s->s);
    const int n = s->s.n_modes();
    const RealVector base = s->s.mean();
    copy_values(evaluate_grid(
                    spec,
                    [&](double p, double q) {
                      RealVector point = base;
                      point(mode) = p;
                      point(n + mode) = q;
                      return w(point);
                    },
                    ctx->threads),
                values);
  });
}

ps_status ps_state_q_grid(ps_context* ctx, const ps_state* s, int mode, const ps_grid* grid, double* values) {
  return guarded(ctx, [&] {
    require(s, "state");
    require(values, "values");
    check_mode(s->s, mode);
    const PhaseGridSpec spec = spec_of(grid);
    const QFunctionParams params = to_q_params(s->s);
    const int n = s->s.n_modes();
    ComplexVector base(n);
    for (int j = 0; j < n; ++j) base(j) = Complex(s->s.mean()(n + j), s->s.mean()(j)) / std::sqrt(2.0);
    copy_values(evaluate_grid(
                    spec,
                    [&](double p, double q) {
                      ComplexVector beta = base;
                      beta(mode) = Complex(q, p) / std::sqrt(2.0);
                      return q_function(params, beta);
                    },
                    ctx->threads),
                values);
  });
}

void ps_state_destroy(ps_state* s) { delete s; }

ps_status ps_photon_distribution(ps_context* ctx, const ps_state* s, int cutoff, ps_distribution** out) {
  return guarded(ctx, [&] {
    require(s, "state");
    require(out, "out");
    if (cutoff < 0 || cutoff > kMaxPhotonCutoff) fail(ErrorCode::kInvalidArgument, "cutoff must lie in [0, 60]");
    *out = new ps_distribution{photon_distribution(s->s, MultiIndex(std::vector<int>(s->s.n_modes(), cutoff)))};
  });
}

size_t ps_distribution_size(const ps_distribution* d) { return d != nullptr ? d->d.size() : 0; }

int ps_distribution_n_modes(const ps_distribution* d) { return d != nullptr ? d->d.n_modes() : 0; }

ps_status ps_distribution_entry(ps_context* ctx, const ps_distribution* d, size_t index, int* n, double* prob) {
  return guarded(ctx, [&] {
    require(d, "distribution");
    if (index >= d->d.size()) fail(ErrorCode::kIndexOutOfRange, "distribution index out of range");
    if (n != nullptr) {
      const MultiIndex m = d->d.index_at(index);
      for (std::size_t j = 0; j < m.size(); ++j) n[j] = m[j];
    }
    if (prob != nullptr) *prob = d->d.prob_at(index);
  });
}

double ps_distribution_mass(const ps_distribution* d) { return d != nullptr ? d->d.mass() : NAN; }

double ps_distribution_p0(const ps_distribution* d) { return d != nullptr ? d->d.p0() : NAN; }

ps_status ps_distribution_mean(ps_context* ctx, const ps_distribution* d, int mode, double* out) {
  return guarded(ctx, [&] {
    require(d, "distribution");
    require(out, "out");
    if (mode < 0 || mode >= d->d.n_modes()) fail(ErrorCode::kIndexOutOfRange, "mode index out of range");
    *out = d->d.means()[static_cast<std::size_t>(mode)];
  });
}

void ps_distribution_destroy(ps_distribution* d) { delete d; }

ps_status ps_profile_from_json(ps_context* ctx, const char* json, ps_profile** out) {
  return guarded(ctx, [&] {
    require(json, "json");
    require(out, "out");
    *out = new ps_profile{profile_from_json(json)};
  });
}

void ps_profile_destroy(ps_profile* p) { delete p; }

ps_status ps_epsilon_solve(ps_context* ctx, const ps_profile* p, double t_final, int steps, ps_trajectory** out) {
  return guarded(ctx, [&] {
    require(p, "profile");
    require(out, "out");
    if (steps < 0) fail(ErrorCode::kInvalidArgument, "steps must be nonnegative");
    const int n = steps > 0 ? steps : default_epsilon_steps(p->p, t_final);
    *out = new ps_trajectory{solve_epsilon(p->p, t_final, n)};
  });
}

size_t ps_trajectory_size(const ps_trajectory* tr) { return tr != nullptr ? tr->tr.size() : 0; }

ps_status ps_trajectory_sample(ps_context* ctx, const ps_trajectory* tr, size_t index, ps_eps_sample* out) {
  return guarded(ctx, [&] {
    require(tr, "trajectory");
    require(out, "out");
    if (index >= tr->tr.size()) fail(ErrorCode::kIndexOutOfRange, "trajectory index out of range");
    const EpsPair e = tr->tr.at(index);
    const Variances v = variances(e.eps, e.eps_dot);
    *out = ps_eps_sample{e.t,     e.eps.real(), e.eps.imag(), e.eps_dot.real(), e.eps_dot.imag(),
                         e.phase, v.sigma_x,    v.sigma_p,    v.sigma_xp,       v.r};
  });
}

double ps_trajectory_wronskian_drift(const ps_trajectory* tr) {
  return tr != nullptr ? tr->tr.max_wronskian_drift() : NAN;
}

void ps_trajectory_destroy(ps_trajectory* tr) { delete tr; }

ps_status ps_quasienergy_compute(ps_context* ctx, const ps_profile* p, double period, int steps, ps_quasienergy* out) {
  return guarded(ctx, [&] {
    require(p, "profile");
    require(out, "out");
    if (steps < 0) fail(ErrorCode::kInvalidArgument, "steps must be nonnegative");
    const Quasienergy q = quasienergy(p->p, period, steps);
    *out = ps_quasienergy{q.kappa,
                          q.kappa_reduced,
                          q.stable ? 1 : 0,
                          q.trace,
                          {q.multipliers[0].real(), q.multipliers[0].imag(), q.multipliers[1].real(),
                           q.multipliers[1].imag()}};
  });
}

ps_status ps_cat_create(ps_context* ctx, ps_parity parity, double alpha_re, double alpha_im, const ps_profile* profile,
                        double t, ps_cat** out) {
  return guarded(ctx, [&] {
    require(out, "out");
    if (parity != PS_PARITY_EVEN && parity != PS_PARITY_ODD) fail(ErrorCode::kInvalidArgument, "unknown parity");
    const Parity par = parity == PS_PARITY_EVEN ? Parity::kEven : Parity::kOdd;
    *out = new ps_cat{CatState(par, Complex(alpha_re, alpha_im), pair_at(profile, t))};
  });
}

void ps_cat_destroy(ps_cat* cat) { delete cat; }

ps_status ps_cat_wavefunction(ps_context* ctx, const ps_cat* cat, double x, double* re, double* im) {
  return guarded(ctx, [&] {
    require(cat, "cat");
    require(re, "re");
    require(im, "im");
    const Complex v = cat_wavefunction(cat->cat, x);
    *re = v.real();
    *im = v.imag();
  });
}

ps_status ps_cat_extent(ps_context* ctx, const ps_cat* cat, double* out) {
  return guarded(ctx, [&] {
    require(cat, "cat");
    require(out, "out");
    *out = wavefunction_grid(cat->cat.pair(), cat->cat.alpha()).x_max;
  });
}

ps_status ps_cat_a_squared_residual(ps_context* ctx, const ps_cat* cat, double* out) {
  return guarded(ctx, [&] {
    require(cat, "cat");
    require(out, "out");
    *out = cat_a_squared_residual(cat->cat);
  });
}

ps_status ps_cat_photon_distribution(ps_context* ctx, const ps_cat* cat, int cutoff, ps_distribution** out) {
  return guarded(ctx, [&] {
    require(cat, "cat");
    require(out, "out");
    *out = new ps_distribution{cat_photon_distribution(cat->cat, cutoff)};
  });
}

ps_status ps_cat_wigner_grid(ps_context* ctx, const ps_cat* cat, const ps_grid* grid, double* values) {
  return guarded(ctx, [&] {
    require(cat, "cat");
    require(values, "values");
    copy_values(cat_wigner_grid(cat->cat, spec_of(grid), ctx->threads), values);
  });
}

}  // extern "C"
