#include "flmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "flmc/errors.hpp"
#include "flmc/parallel.hpp"
#include "flmc/vec.hpp"

namespace flmc {

namespace {

std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  return out;
}

double sorted_coupling_distance(std::vector<double> a, std::vector<double> b, double q) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::pow(std::abs(a[i] - b[i]), q);
  return std::pow(acc / static_cast<double>(a.size()), 1.0 / q);
}

std::vector<double> scalar_values(const EmpiricalDistribution& dist) {
  return {dist.samples.begin(), dist.samples.end()};
}

std::vector<double> subsample(const std::vector<double>& values, std::size_t target,
                              Rng& rng) {
  std::vector<double> pool = values;
  for (std::size_t j = 0; j < target; ++j) {
    const std::size_t pick = j + static_cast<std::size_t>(rng.next_u64() % (pool.size() - j));
    std::swap(pool[j], pool[pick]);
  }
  pool.resize(target);
  return pool;
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

EmpiricalDistribution EmpiricalDistribution::scalar(std::vector<double> values,
                                                    std::string label) {
  EmpiricalDistribution dist;
  dist.n = values.size();
  dist.dim = 1;
  dist.samples = std::move(values);
  dist.label = std::move(label);
  dist.validate();
  return dist;
}

EmpiricalDistribution EmpiricalDistribution::from_final_states(
    const std::vector<Trajectory>& trajectories, std::string label) {
  EmpiricalDistribution dist;
  dist.label = std::move(label);
  for (const auto& trajectory : trajectories) {
    if (trajectory.diverged) continue;
    const auto state = trajectory.final_state();
    dist.dim = trajectory.dim;
    dist.samples.insert(dist.samples.end(), state.begin(), state.end());
    ++dist.n;
  }
  dist.validate();
  return dist;
}

std::span<const double> EmpiricalDistribution::row(std::size_t i) const {
  return {samples.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
}

void EmpiricalDistribution::validate() const {
  if (n < 1) throw ParameterError("empirical distribution: needs at least one sample");
  if (dim < 1 || samples.size() != n * static_cast<std::size_t>(dim)) {
    throw ParameterError("empirical distribution: sample buffer does not match n x dim");
  }
  if (!all_finite(samples)) {
    throw ParameterError("empirical distribution: non-finite entries");
  }
}

double wasserstein_q_1d(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                        double q) {
  if (!(q >= 1.0)) throw ParameterError("wasserstein_q_1d: q must be >= 1");
  if (a.dim != 1 || b.dim != 1) throw ParameterError("wasserstein_q_1d: requires dim 1");
  a.validate();
  b.validate();
  if (a.n != b.n) {
    throw ParameterError(
        "wasserstein_q_1d: sample counts differ; use the downsampling overload");
  }
  return sorted_coupling_distance(scalar_values(a), scalar_values(b), q);
}

double wasserstein_q_1d(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                        double q, Rng& rng, bool* downsampled) {
  if (downsampled != nullptr) *downsampled = a.n != b.n;
  if (a.n == b.n) return wasserstein_q_1d(a, b, q);
  if (!(q >= 1.0)) throw ParameterError("wasserstein_q_1d: q must be >= 1");
  if (a.dim != 1 || b.dim != 1) throw ParameterError("wasserstein_q_1d: requires dim 1");
  a.validate();
  b.validate();
  const std::size_t target = std::min(a.n, b.n);
  auto va = scalar_values(a);
  auto vb = scalar_values(b);
  if (va.size() > target) va = subsample(va, target, rng);
  if (vb.size() > target) vb = subsample(vb, target, rng);
  return sorted_coupling_distance(std::move(va), std::move(vb), q);
}

double sliced_wasserstein_q(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                            double q, int n_projections, Rng& rng) {
  if (!(q >= 1.0)) throw ParameterError("sliced_wasserstein_q: q must be >= 1");
  if (n_projections < 1) throw ParameterError("sliced_wasserstein_q: needs >= 1 projection");
  a.validate();
  b.validate();
  if (a.dim != b.dim) throw ParameterError("sliced_wasserstein_q: dimension mismatch");
  if (a.n != b.n) {
    throw ParameterError("sliced_wasserstein_q: requires equal sample counts");
  }

  const auto dim = static_cast<std::size_t>(a.dim);
  std::vector<double> direction(dim);
  std::vector<double> pa(a.n), pb(b.n);
  double acc = 0.0;
  for (int p = 0; p < n_projections; ++p) {
    double norm_sq_dir = 0.0;
    do {
      for (double& u : direction) u = rng.gaussian();
      norm_sq_dir = norm_sq(direction);
    } while (norm_sq_dir == 0.0);
    const double inv_norm = 1.0 / std::sqrt(norm_sq_dir);
    for (double& u : direction) u *= inv_norm;
    for (std::size_t i = 0; i < a.n; ++i) pa[i] = dot(a.row(i), direction);
    for (std::size_t i = 0; i < b.n; ++i) pb[i] = dot(b.row(i), direction);
    acc += sorted_coupling_distance(pa, pb, q);
  }
  return acc / n_projections;
}

GibbsReference1D gibbs_reference_1d(const Objective& obj, double beta, double grid_lo,
                                    double grid_hi, int n_grid) {
  if (obj.dim() != 1) throw ParameterError("gibbs_reference_1d: objective must be 1-d");
  if (!(beta > 0.0)) throw ParameterError("gibbs_reference_1d: beta must be > 0");
  if (!(grid_lo < grid_hi)) throw ParameterError("gibbs_reference_1d: grid_lo < grid_hi");
  if (n_grid < 16) throw ParameterError("gibbs_reference_1d: n_grid must be >= 16");

  GibbsReference1D ref;
  ref.beta = beta;
  ref.grid.resize(static_cast<std::size_t>(n_grid));
  ref.density.resize(static_cast<std::size_t>(n_grid));
  const double h = (grid_hi - grid_lo) / (n_grid - 1);
  double min_energy = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_grid; ++i) {
    ref.grid[static_cast<std::size_t>(i)] = grid_lo + h * i;
    const double x = ref.grid[static_cast<std::size_t>(i)];
    const double f = obj.value(std::span<const double>(&x, 1));
    ref.density[static_cast<std::size_t>(i)] = f;  // stash energies first
    min_energy = std::min(min_energy, f);
  }
  double z = 0.0;
  for (int i = 0; i < n_grid; ++i) {
    auto& v = ref.density[static_cast<std::size_t>(i)];
    v = std::exp(-beta * (v - min_energy));
    z += (i == 0 || i == n_grid - 1) ? 0.5 * v : v;
  }
  z *= h;
  for (double& v : ref.density) v /= z;

  const double tail_proxy =
      (ref.density.front() + ref.density.back()) * (grid_hi - grid_lo);
  if (tail_proxy > 1e-8) {
    throw CoverageError("gibbs_reference_1d: grid does not cover the support "
                        "(endpoint-density tail proxy " +
                            std::to_string(tail_proxy) + " > 1e-8)",
                        tail_proxy);
  }

  ref.cdf.assign(static_cast<std::size_t>(n_grid), 0.0);
  for (int i = 1; i < n_grid; ++i) {
    ref.cdf[static_cast<std::size_t>(i)] =
        ref.cdf[static_cast<std::size_t>(i - 1)] +
        0.5 * h *
            (ref.density[static_cast<std::size_t>(i - 1)] +
             ref.density[static_cast<std::size_t>(i)]);
  }
  const double total = ref.cdf.back();
  for (double& v : ref.cdf) v /= total;
  return ref;
}

double GibbsReference1D::cdf_at(double x) const {
  if (x <= grid.front()) return 0.0;
  if (x >= grid.back()) return 1.0;
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - grid[lo]) / (grid[hi] - grid[lo]);
  return cdf[lo] + t * (cdf[hi] - cdf[lo]);
}

double GibbsReference1D::quantile(double u) const {
  if (!(u >= 0.0) || !(u <= 1.0)) throw ParameterError("quantile: u must lie in [0, 1]");
  if (u <= cdf.front()) return grid.front();
  if (u >= cdf.back()) return grid.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  const std::size_t hi = static_cast<std::size_t>(it - cdf.begin());
  const std::size_t lo = hi - 1;
  const double span_u = cdf[hi] - cdf[lo];
  const double t = span_u > 0.0 ? (u - cdf[lo]) / span_u : 0.0;
  return grid[lo] + t * (grid[hi] - grid[lo]);
}

double GibbsReference1D::mean_f(const Objective& obj) const {
  double acc = 0.0;
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid[i];
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    acc += w * obj.value(std::span<const double>(&x, 1)) * density[i];
  }
  return acc * (grid[1] - grid[0]);
}

double GibbsReference1D::mass_within(double center, double radius) const {
  return cdf_at(center + radius) - cdf_at(center - radius);
}

BootstrapInterval bootstrap_mean_ci(std::span<const double> values, Rng& rng,
                                    int resamples) {
  if (values.empty()) throw ParameterError("bootstrap: empty sample");
  if (resamples < 1) throw ParameterError("bootstrap: resamples must be >= 1");
  BootstrapInterval out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) /
             static_cast<double>(values.size());
  std::vector<double> means(static_cast<std::size_t>(resamples));
  const std::size_t n = values.size();
  for (auto& mean : means) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += values[rng.next_u64() % n];
    mean = acc / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const auto at = [&](double quantile) {
    const auto idx = static_cast<std::size_t>(quantile * (means.size() - 1));
    return means[idx];
  };
  out.lo = at(0.025);
  out.hi = at(0.975);
  return out;
}

std::vector<CurvePoint> suboptimality_curve(const std::vector<Trajectory>& trajectories,
                                            const Objective& obj, Rng& rng,
                                            int resamples) {
  if (!obj.minimizer()) {
    throw ParameterError("suboptimality_curve: objective minimizer unknown");
  }
  const double f_star = obj.minimizer()->value;
  std::vector<const Trajectory*> alive;
  for (const auto& trajectory : trajectories) {
    if (!trajectory.diverged) alive.push_back(&trajectory);
  }
  if (alive.empty()) throw ParameterError("suboptimality_curve: all replicas diverged");
  const std::size_t rows = alive.front()->rows();
  for (const auto* trajectory : alive) {
    if (trajectory->rows() != rows) {
      throw ParameterError("suboptimality_curve: replicas recorded different step sets");
    }
  }

  std::vector<CurvePoint> curve(rows);
  std::vector<double> gaps(alive.size());
  for (std::size_t row = 0; row < rows; ++row) {
    for (std::size_t r = 0; r < alive.size(); ++r) {
      gaps[r] = alive[r]->f_values[row] - f_star;
    }
    const auto ci = bootstrap_mean_ci(gaps, rng, resamples);
    curve[row] = {alive.front()->steps[row], alive.front()->times[row], ci.mean, ci.lo,
                  ci.hi};
  }
  return curve;
}

double fractional_moment(const EmpiricalDistribution& dist, double lambda) {
  if (!(lambda >= 0.0) || lambda > 2.0) {
    throw ParameterError("fractional_moment: lambda must lie in [0, 2]");
  }
  dist.validate();
  if (lambda == 0.0) return 1.0;
  const std::size_t blocks = std::min<std::size_t>(32, dist.n);
  std::vector<double> block_means(blocks, 0.0);
  std::vector<std::size_t> block_counts(blocks, 0);
  for (std::size_t i = 0; i < dist.n; ++i) {
    const std::size_t block = i * blocks / dist.n;
    block_means[block] += std::pow(norm(dist.row(i)), lambda);
    ++block_counts[block];
  }
  for (std::size_t bidx = 0; bidx < blocks; ++bidx) {
    block_means[bidx] /= static_cast<double>(block_counts[bidx]);
  }
  return median_of(std::move(block_means));
}

WeakErrorStudy weak_error_study(const Objective& obj, const RunConfig& base_cfg,
                                const std::vector<double>& etas, int refinement,
                                int replicas, double q, int n_threads,
                                int bootstrap_resamples) {
  if (etas.size() < 3) {
    throw ParameterError("weak_error_study: needs at least 3 step sizes for the fit");
  }
  if (replicas < 2) throw ParameterError("weak_error_study: needs >= 2 replicas");
  if (!(q >= 1.0)) throw ParameterError("weak_error_study: q must be >= 1");
  if (refinement < 1) throw ParameterError("weak_error_study: refinement must be >= 1");

  WeakErrorStudy study;
  Rng meta(derive_stream_seed(base_cfg.seed, 0xFEEDu));

  for (std::size_t e = 0; e < etas.size(); ++e) {
    RunConfig cfg = base_cfg;
    cfg.eta = etas[e];
    cfg.throw_if_invalid(&obj);

    std::vector<std::vector<double>> coarse(static_cast<std::size_t>(replicas));
    std::vector<std::vector<double>> fine(static_cast<std::size_t>(replicas));
    std::vector<char> dead(static_cast<std::size_t>(replicas), 0);
    parallel_for(static_cast<std::size_t>(replicas), n_threads, [&](std::size_t r) {
      Rng rng = Rng::substream(cfg.seed, e * static_cast<std::size_t>(replicas) + r);
      const auto pair = coupled_endpoints(obj, cfg, refinement, rng);
      if (pair.diverged) {
        dead[r] = 1;
        return;
      }
      coarse[r] = pair.coarse;
      fine[r] = pair.fine;
    });

    EmpiricalDistribution chain, reference;
    chain.dim = reference.dim = obj.dim();
    for (std::size_t r = 0; r < coarse.size(); ++r) {
      if (dead[r]) continue;
      chain.samples.insert(chain.samples.end(), coarse[r].begin(), coarse[r].end());
      reference.samples.insert(reference.samples.end(), fine[r].begin(), fine[r].end());
      ++chain.n;
      ++reference.n;
    }
    chain.label = "chain";
    reference.label = "reference";
    chain.validate();
    reference.validate();

    const auto distance = [&](const EmpiricalDistribution& a,
                              const EmpiricalDistribution& b, Rng& rng) {
      return obj.dim() == 1 ? wasserstein_q_1d(a, b, q)
                            : sliced_wasserstein_q(a, b, q, study.n_projections, rng);
    };

    WeakErrorPoint point;
    point.eta = etas[e];
    point.wq = distance(chain, reference, meta);

    // Bootstrap over paired replicas, keeping the coupling intact.
    std::vector<double> resampled(static_cast<std::size_t>(bootstrap_resamples));
    const auto dim = static_cast<std::size_t>(obj.dim());
    for (auto& value : resampled) {
      EmpiricalDistribution ra, rb;
      ra.dim = rb.dim = obj.dim();
      ra.n = rb.n = chain.n;
      ra.samples.resize(chain.n * dim);
      rb.samples.resize(chain.n * dim);
      for (std::size_t i = 0; i < chain.n; ++i) {
        const std::size_t pick = meta.next_u64() % chain.n;
        std::copy_n(chain.samples.begin() + static_cast<long>(pick * dim), dim,
                    ra.samples.begin() + static_cast<long>(i * dim));
        std::copy_n(reference.samples.begin() + static_cast<long>(pick * dim), dim,
                    rb.samples.begin() + static_cast<long>(i * dim));
      }
      value = distance(ra, rb, meta);
    }
    std::sort(resampled.begin(), resampled.end());
    point.ci_lo = resampled[static_cast<std::size_t>(0.025 * (resampled.size() - 1))];
    point.ci_hi = resampled[static_cast<std::size_t>(0.975 * (resampled.size() - 1))];
    study.points.push_back(point);
  }

  // Least squares of log wq on log eta over the positive distances.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int used = 0;
  for (const auto& point : study.points) {
    if (!(point.wq > 0.0)) continue;
    const double x = std::log(point.eta);
    const double y = std::log(point.wq);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used >= 3) {
    const double denom = used * sxx - sx * sx;
    if (denom > 0.0) {
      study.slope = (used * sxy - sx * sy) / denom;
      study.intercept = (sy - study.slope * sx) / used;
      study.slope_valid = true;
    }
  }
  return study;
}

}  // namespace flmc
