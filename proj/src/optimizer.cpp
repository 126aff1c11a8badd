// Copyright 2026 The ptmono Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ptmono/optimizer.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "ptmono/errors.hpp"
#include "ptmono/random.hpp"

namespace ptmono {

OptimizerMethod parse_optimizer_method(const std::string& name) {
  if (name == "nelder_mead") return OptimizerMethod::nelder_mead;
  if (name == "fd_gradient_ascent") return OptimizerMethod::fd_gradient_ascent;
  throw ConfigError("optimizer.method", "unknown optimizer method '" + name + "'");
}

std::string to_string(OptimizerMethod m) {
  return m == OptimizerMethod::nelder_mead ? "nelder_mead" : "fd_gradient_ascent";
}

void validate(const OptimizerConfig& cfg) {
  if (cfg.restarts < 1) throw ConfigError("optimizer.restarts", "restarts must be at least 1");
  if (cfg.budget < cfg.restarts) throw ConfigError("optimizer.budget", "budget must be at least the restart count");
  if (!(cfg.initial_step > 0)) throw ConfigError("optimizer.initial_step", "step must be positive");
  if (!(cfg.shrink > 0 && cfg.shrink < 1)) throw ConfigError("optimizer.shrink", "shrink must lie in (0, 1)");
  if (!(cfg.tolerance >= 0)) throw ConfigError("optimizer.tolerance", "tolerance must be non-negative");
  if (!(cfg.start_spread >= 0)) throw ConfigError("optimizer.start_spread", "spread must be non-negative");
}

namespace {

constexpr double kPenalty = 1e300;

// Counts evaluations, keeps the incumbent, and refuses work past the budget.
class Tracker {
 public:
  Tracker(const ObjectiveFn& f, int budget, std::optional<double> ceiling) : f_(f), budget_(budget), ceiling_(ceiling) {}

  bool exhausted() const { return used_ >= budget_ || done_; }
  int used() const { return used_; }
  bool has_incumbent() const { return has_best_; }
  double best() const { return best_; }
  const Eigen::VectorXd& best_x() const { return best_x_; }
  void reset_local() { local_best_ = -std::numeric_limits<double>::infinity(); }
  double local_best() const { return local_best_; }

  // Returns nullopt when no evaluation was performed.
  std::optional<double> eval(const Eigen::VectorXd& x) {
    if (exhausted()) return std::nullopt;
    ++used_;
    const double v = f_(x);
    if (!std::isfinite(v)) return v;
    local_best_ = std::max(local_best_, v);
    if (!has_best_ || v > best_) {
      best_ = v;
      best_x_ = x;
      has_best_ = true;
      if (ceiling_ && v >= *ceiling_ - 1e-12) done_ = true;
    }
    return v;
  }

 private:
  const ObjectiveFn& f_;
  int budget_;
  std::optional<double> ceiling_;
  int used_ = 0;
  bool done_ = false;
  bool has_best_ = false;
  double best_ = -std::numeric_limits<double>::infinity();
  double local_best_ = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x_;
};

struct GslContext {
  Tracker* tracker;
  int stop_at;
};

double gsl_objective(const gsl_vector* v, void* params) {
  auto* ctx = static_cast<GslContext*>(params);
  if (ctx->tracker->used() >= ctx->stop_at) return kPenalty;
  Eigen::VectorXd x(v->size);
  for (std::size_t k = 0; k < v->size; ++k) x(static_cast<Eigen::Index>(k)) = gsl_vector_get(v, k);
  const auto r = ctx->tracker->eval(x);
  if (!r || !std::isfinite(*r)) return kPenalty;
  return -*r;
}

struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* s) const { gsl_multimin_fminimizer_free(s); }
};
struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

void nelder_mead(Tracker& tr, const Eigen::VectorXd& start, int stop_at, const OptimizerConfig& cfg) {
  const auto dim = static_cast<std::size_t>(start.size());
  GslContext ctx{&tr, stop_at};
  gsl_multimin_function fn{&gsl_objective, dim, &ctx};
  std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(dim)), step(gsl_vector_alloc(dim));
  for (std::size_t k = 0; k < dim; ++k) gsl_vector_set(x.get(), k, start(static_cast<Eigen::Index>(k)));
  gsl_vector_set_all(step.get(), cfg.initial_step);
  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim));
  if (gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), step.get()) != GSL_SUCCESS) return;

  // Stop when the best vertex has not improved by `tolerance` over a window of iterations.
  const int window = 4 * static_cast<int>(dim) + 4;
  double reference = std::numeric_limits<double>::infinity();
  int stale = 0;
  while (tr.used() < stop_at && !tr.exhausted()) {
    if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_fminimizer_size(s.get()) < 1e-10) break;
    if (s->fval < reference - cfg.tolerance) {
      reference = s->fval;
      stale = 0;
    } else if (++stale > window) {
      break;
    }
  }
}

void gradient_ascent(Tracker& tr, Eigen::VectorXd x, int stop_at, const OptimizerConfig& cfg) {
  const Eigen::Index dim = x.size();
  auto value_at = [&](const Eigen::VectorXd& p) -> std::optional<double> {
    if (tr.used() >= stop_at) return std::nullopt;
    auto v = tr.eval(p);
    if (v && !std::isfinite(*v)) return -kPenalty;
    return v;
  };
  auto fx = value_at(x);
  if (!fx) return;
  double step = cfg.initial_step;
  const double h = 1e-5;
  while (step > 1e-9) {
    Eigen::VectorXd g(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      Eigen::VectorXd up = x, down = x;
      up(k) += h;
      down(k) -= h;
      const auto fu = value_at(up), fd = value_at(down);
      if (!fu || !fd) return;
      g(k) = (*fu - *fd) / (2 * h);
    }
    const double gn = g.norm();
    if (!(gn > 0)) return;
    bool moved = false;
    while (step > 1e-9) {
      const Eigen::VectorXd trial = x + (step / gn) * g;
      const auto ft = value_at(trial);
      if (!ft) return;
      if (*ft > *fx + cfg.tolerance) {
        x = trial;
        fx = ft;
        moved = true;
        step /= cfg.shrink;  // grow again after a success
        break;
      }
      step *= cfg.shrink;
    }
    if (!moved) return;
  }
}

}  // namespace

MaximizeResult maximize(const ObjectiveFn& f, int dim, const OptimizerConfig& cfg,
                        const std::vector<Eigen::VectorXd>& starts, std::optional<double> ceiling) {
  validate(cfg);
  if (dim < 0) throw InvalidInput("maximize: negative dimension");
  Tracker tr(f, cfg.budget, ceiling);
  MaximizeResult out;

  Eigen::VectorXd first = Eigen::VectorXd::Zero(dim);
  if (starts.empty()) {
    tr.eval(first);
  } else {
    double best_start = -std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
      if (s.size() != dim) throw InvalidInput("maximize: start point has the wrong dimension");
      const auto v = tr.eval(s);
      if (v && std::isfinite(*v) && *v > best_start) {
        best_start = *v;
        first = s;
      }
    }
  }

  if (dim > 0) {
    const int per_restart = std::max(1, (cfg.budget - tr.used()) / cfg.restarts);
    for (int r = 0; r < cfg.restarts && !tr.exhausted(); ++r) {
      tr.reset_local();
      Eigen::VectorXd x0 = first;
      if (r > 0) {
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
        std::uniform_real_distribution<double> u(-cfg.start_spread, cfg.start_spread);
        for (Eigen::Index k = 0; k < dim; ++k) x0(k) = u(rng);
      }
      const int stop_at = r + 1 == cfg.restarts ? cfg.budget : std::min(cfg.budget, tr.used() + per_restart);
      if (cfg.method == OptimizerMethod::nelder_mead)
        nelder_mead(tr, x0, stop_at, cfg);
      else
        gradient_ascent(tr, x0, stop_at, cfg);
      out.trace.push_back(tr.local_best());
    }
  }

  if (!tr.has_incumbent()) throw OptimizerFailure("maximize: no finite objective value within the budget");
  out.x = tr.best_x();
  out.value = tr.best();
  out.evaluations = tr.used();
  return out;
}

}  // namespace ptmono
