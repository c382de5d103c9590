#include "mecdep/spatial_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mecdep/errors.hpp"
#include "mecdep/parallel.hpp"

namespace mecdep::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double wrap_delta(double d, double window, bool torus) {
  d = std::abs(d);
  return torus ? std::min(d, window - d) : d;
}

double squared_distance(Point a, Point b, double window, bool torus) {
  double dx = wrap_delta(a.x - b.x, window, torus);
  double dy = wrap_delta(a.y - b.y, window, torus);
  return dx * dx + dy * dy;
}

// Uniform bucket grid over the BS points for nearest-neighbour queries.
class BsGrid {
 public:
  void build(const std::vector<Point>& pts, double window, bool torus, double density) {
    pts_ = &pts;
    window_ = window;
    torus_ = torus;
    double cell = 1.0 / std::sqrt(std::max(density, 1e-12));
    cells_ = std::clamp(static_cast<int>(window / cell), 1, 4096);
    cell_ = window / cells_;
    start_.assign(static_cast<std::size_t>(cells_) * cells_ + 1, 0);
    order_.resize(pts.size());
    for (const Point& q : pts) ++start_[index_of(q) + 1];
    for (std::size_t i = 1; i < start_.size(); ++i) start_[i] += start_[i - 1];
    fill_ = start_;
    for (std::size_t i = 0; i < pts.size(); ++i) order_[fill_[index_of(pts[i])]++] = static_cast<int>(i);
  }

  // Returns (index, squared distance) of the nearest BS.
  std::pair<int, double> nearest(Point q) const {
    const auto& pts = *pts_;
    int cx = coord(q.x);
    int cy = coord(q.y);
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int ring = 0;; ++ring) {
      if (2 * ring + 1 >= cells_) {
        // Ring covers the whole grid; finish with a full scan.
        for (std::size_t i = 0; i < pts.size(); ++i) {
          double d2 = squared_distance(q, pts[i], window_, torus_);
          if (d2 < best_d2) {
            best_d2 = d2;
            best = static_cast<int>(i);
          }
        }
        return {best, best_d2};
      }
      for (int dy = -ring; dy <= ring; ++dy) {
        bool edge_row = (dy == -ring || dy == ring);
        int step = edge_row ? 1 : 2 * ring;
        for (int dx = -ring; dx <= ring; dx += (step == 0 ? 1 : step)) {
          int gx = cx + dx;
          int gy = cy + dy;
          if (torus_) {
            gx = (gx % cells_ + cells_) % cells_;
            gy = (gy % cells_ + cells_) % cells_;
          } else if (gx < 0 || gy < 0 || gx >= cells_ || gy >= cells_) {
            continue;
          }
          std::size_t c = static_cast<std::size_t>(gy) * cells_ + gx;
          for (int k = start_[c]; k < start_[c + 1]; ++k) {
            int i = order_[k];
            double d2 = squared_distance(q, pts[i], window_, torus_);
            if (d2 < best_d2) {
              best_d2 = d2;
              best = i;
            }
          }
        }
      }
      double reach = ring * cell_;
      if (best >= 0 && best_d2 <= reach * reach) return {best, best_d2};
    }
  }

 private:
  int coord(double v) const { return std::clamp(static_cast<int>(v / cell_), 0, cells_ - 1); }
  std::size_t index_of(Point q) const {
    return static_cast<std::size_t>(coord(q.y)) * cells_ + coord(q.x);
  }

  const std::vector<Point>* pts_ = nullptr;
  double window_ = 0.0;
  bool torus_ = true;
  int cells_ = 1;
  double cell_ = 1.0;
  std::vector<int> start_;
  std::vector<int> fill_;
  std::vector<int> order_;
};

void sample_ppp_into(double intensity, double window, std::mt19937_64& rng,
                     std::vector<Point>& out) {
  out.clear();
  if (intensity <= 0.0) return;
  std::poisson_distribution<std::int64_t> count(intensity * window * window);
  std::uniform_real_distribution<double> coord(0.0, window);
  std::int64_t n = count(rng);
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    double x = coord(rng);
    double y = coord(rng);
    out.push_back({x, y});
  }
}

void validate_config(const SimConfig& cfg) {
  if (!(cfg.window_km > 0.0)) throw ConfigError("window_km must be > 0");
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
}

// Draws and resolves one realization, reusing out's buffers.
void realize(const SystemParams& p, const SimConfig& cfg, std::uint64_t trial, double max_p_a,
             Realization& out, BsGrid& grid) {
  std::mt19937_64 rng = trial_rng(cfg.seed, trial);
  const double window = cfg.window_km;
  const double rho = dbm_to_mw(p.rho_dbm);
  out.resampled = 0;
  for (;;) {
    sample_ppp_into(p.lambda_b, window, rng, out.bs);
    if (!out.bs.empty()) break;
    ++out.resampled;
    if (out.resampled > 1000) throw NumericError("window too small: no BS in 1000 draws");
  }
  grid.build(out.bs, window, cfg.torus, p.lambda_b);

  out.tagged_device = {window / 2.0, window / 2.0};
  auto [tagged_bs, tagged_d2] = grid.nearest(out.tagged_device);
  out.tagged_bs = tagged_bs;
  out.tagged_distance = std::sqrt(tagged_d2);

  sample_ppp_into(p.lambda_d / p.channels, window, rng, out.devices);
  std::size_t n = out.devices.size();
  out.activity_u.resize(n);
  out.fading.resize(n);
  out.serving.assign(n, -1);
  out.distance.assign(n, 0.0);
  out.tx_power.assign(n, 0.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  for (std::size_t i = 0; i < n; ++i) {
    out.activity_u[i] = unit(rng);
    out.fading[i] = expo(rng);
  }
  out.tagged_fading = expo(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (out.activity_u[i] >= max_p_a) continue;
    auto [j, d2] = grid.nearest(out.devices[i]);
    out.serving[i] = j;
    out.distance[i] = std::sqrt(d2);
    out.tx_power[i] = rho * std::pow(out.distance[i], p.eta);
  }
}

}  // namespace

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ trial));
}

double distance(Point a, Point b, double window_km, bool torus) {
  return std::sqrt(squared_distance(a, b, window_km, torus));
}

std::vector<Point> sample_ppp(double intensity_per_km2, double window_km, std::mt19937_64& rng) {
  if (!(intensity_per_km2 >= 0.0)) throw ConfigError("intensity must be >= 0");
  std::vector<Point> out;
  sample_ppp_into(intensity_per_km2, window_km, rng, out);
  return out;
}

void sample_realization(const SystemParams& p, const SimConfig& cfg, std::uint64_t trial,
                        double max_p_a, Realization& out) {
  validate_config(cfg);
  BsGrid grid;
  realize(p, cfg, trial, max_p_a, out, grid);
}

OspEstimate make_estimate(std::int64_t successes, std::int64_t trials, std::int64_t resampled) {
  OspEstimate e;
  e.trials = trials;
  e.resampled = resampled;
  e.resample_warning = resampled * 1000 > trials;
  if (trials <= 0) return e;
  double n = static_cast<double>(trials);
  e.mean = successes / n;
  e.std_error = trials == 1 ? 0.5 : std::sqrt(e.mean * (1.0 - e.mean) / n);
  e.ci95_low = std::clamp(e.mean - 1.96 * e.std_error, 0.0, 1.0);
  e.ci95_high = std::clamp(e.mean + 1.96 * e.std_error, 0.0, 1.0);
  return e;
}

OspGrid simulate_osp_grid(const SystemParams& p, const SimConfig& cfg,
                          const std::vector<double>& p_a_values,
                          const std::vector<double>& theta_db_values) {
  validate_config(cfg);
  for (double pa : p_a_values) {
    if (!(pa >= 0.0 && pa <= 1.0)) throw ConfigError("P_a values must lie in [0, 1]");
  }
  const std::size_t n_pa = p_a_values.size();
  const std::size_t n_theta = theta_db_values.size();
  double max_p_a = 0.0;
  for (double pa : p_a_values) max_p_a = std::max(max_p_a, pa);
  std::vector<double> theta_lin(n_theta);
  for (std::size_t k = 0; k < n_theta; ++k) theta_lin[k] = db_to_linear(theta_db_values[k]);
  const double rho = dbm_to_mw(p.rho_dbm);
  const double sigma2 = dbm_to_mw(p.sigma2_dbm);

  // Fixed-size chunks so the reduction is independent of the worker count.
  constexpr std::int64_t kChunk = 256;
  const std::size_t chunks = static_cast<std::size_t>((cfg.trials + kChunk - 1) / kChunk);
  std::vector<std::vector<std::int64_t>> chunk_success(chunks);
  std::vector<std::int64_t> chunk_resampled(chunks, 0);

  parallel_for(chunks, [&](std::size_t c) {
    std::vector<std::int64_t> success(n_pa * n_theta, 0);
    std::vector<double> interference(n_pa);
    Realization r;
    BsGrid grid;
    std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
    std::int64_t end = std::min(cfg.trials, begin + kChunk);
    for (std::int64_t t = begin; t < end; ++t) {
      realize(p, cfg, static_cast<std::uint64_t>(t), max_p_a, r, grid);
      chunk_resampled[c] += r.resampled;
      const Point bs0 = r.bs[static_cast<std::size_t>(r.tagged_bs)];
      std::fill(interference.begin(), interference.end(), 0.0);
      for (std::size_t i = 0; i < r.devices.size(); ++i) {
        if (r.serving[i] < 0) continue;
        double d2 = squared_distance(r.devices[i], bs0, cfg.window_km, cfg.torus);
        double path = std::pow(d2, -p.eta / 2.0);
        double rx = r.tx_power[i] * r.fading[i] * path;
        for (std::size_t j = 0; j < n_pa; ++j) {
          if (r.activity_u[i] < p_a_values[j]) interference[j] += rx;
        }
      }
      for (std::size_t j = 0; j < n_pa; ++j) {
        double sinr = rho * r.tagged_fading / (interference[j] + sigma2);
        for (std::size_t k = 0; k < n_theta; ++k) {
          if (sinr > theta_lin[k]) ++success[j * n_theta + k];
        }
      }
    }
    chunk_success[c] = std::move(success);
  });

  OspGrid grid_out;
  grid_out.p_a = p_a_values;
  grid_out.theta_db = theta_db_values;
  std::int64_t resampled = 0;
  for (auto v : chunk_resampled) resampled += v;
  grid_out.estimates.assign(n_pa, std::vector<OspEstimate>(n_theta));
  for (std::size_t j = 0; j < n_pa; ++j) {
    for (std::size_t k = 0; k < n_theta; ++k) {
      std::int64_t s = 0;
      for (const auto& cs : chunk_success) s += cs[j * n_theta + k];
      grid_out.estimates[j][k] = make_estimate(s, cfg.trials, resampled);
    }
  }
  return grid_out;
}

OspEstimate simulate_osp(const SystemParams& p, const SimConfig& cfg) {
  DerivedParams dp = derive(p);
  return simulate_osp_grid(p, cfg, {dp.p_a}, {p.theta_db}).estimates[0][0];
}

}  // namespace mecdep::sim
