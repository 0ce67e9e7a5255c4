#include "sixv/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <utility>

#include "sixv/edge_sampler.hpp"
#include "sixv/kernel.hpp"
#include "sixv/oracle.hpp"
#include "sixv/rng.hpp"

namespace sixv {

void check_trajectory(const Trajectory& t) {
  if (t.k < 1) throw std::invalid_argument("trajectory: K must be >= 1");
  if (t.y.empty() || t.y.size() != t.labels.size() + 1 || t.z1.size() != t.y.size())
    throw std::invalid_argument("trajectory: inconsistent lengths");
  if (t.z1[0] != 0) throw std::invalid_argument("trajectory: z1 must start at 0");
  for (const auto& v : t.y)
    if (v.size() != t.k) throw std::invalid_argument("trajectory: state dimension mismatch");
  for (std::size_t s = 0; s < t.labels.size(); ++s) {
    EdgeLabel label = t.labels[s];
    const Vertex& from = t.y[s];
    const Vertex& to = t.y[s + 1];
    if (is_loop(label)) {
      if (from != to) throw std::invalid_argument("trajectory: loop label between distinct states");
    } else {
      if (from == to) throw std::invalid_argument("trajectory: move label without a state change");
      auto cls = classify_move(from, to);
      if (!cls || *cls != label)
        throw std::invalid_argument("trajectory: consecutive states are not an edge of this label");
    }
    if (t.z1[s + 1] - t.z1[s] != base_increment(label))
      throw std::invalid_argument("trajectory: z1 increment disagrees with the label");
  }
}

std::vector<std::int64_t> default_z0(const Vertex& y0) {
  std::vector<std::int64_t> z0(static_cast<std::size_t>(y0.size()) + 1);
  z0[0] = 0;
  for (std::int64_t i = 1; i <= y0.size(); ++i)
    z0[static_cast<std::size_t>(i)] = z0[static_cast<std::size_t>(i - 1)] + y0.digit(i);
  return z0;
}

HeightField reconstruct_walk(std::span<const std::int64_t> z0, const Trajectory& traj) {
  check_trajectory(traj);
  auto k = traj.k;
  if (static_cast<std::int64_t>(z0.size()) != k + 1)
    throw std::invalid_argument("reconstruct_walk: z0 must have K+1 entries");
  for (std::int64_t i = 1; i <= k; ++i) {
    auto gap = z0[static_cast<std::size_t>(i)] - z0[static_cast<std::size_t>(i - 1)];
    if (gap != traj.y[0].digit(i))
      throw std::invalid_argument("reconstruct_walk: z0 increments disagree with Y(0)");
  }

  HeightField f;
  f.steps = traj.steps();
  f.walks = k + 1;
  f.data.resize(static_cast<std::size_t>((f.steps + 1) * f.walks));
  for (std::int64_t t = 0; t <= f.steps; ++t) {
    f.at(t, 1) = z0[0] + traj.z1[static_cast<std::size_t>(t)];
    for (std::int64_t i = 1; i <= k; ++i)
      f.at(t, i + 1) = f.at(t, i) + traj.y[static_cast<std::size_t>(t)].digit(i);
  }
  return f;
}

std::int64_t FieldSpec::value([[maybe_unused]] const Vertex& from,
                              [[maybe_unused]] const Vertex& to, EdgeLabel label) const {
  switch (kind) {
    case Kind::BaseIncrement: return base_increment(label);
    case Kind::Constant: return constant;
    case Kind::LabelTable: return table[static_cast<std::size_t>(label)];
  }
  throw std::logic_error("FieldSpec: bad kind");
}

namespace {

std::int64_t parse_whole_int(const std::string& s) {
  std::size_t pos = 0;
  std::int64_t v = std::stoll(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("field: trailing characters after integer");
  return v;
}

}  // namespace

FieldSpec FieldSpec::parse(const std::string& text) {
  FieldSpec f;
  if (text == "base-increment") return f;
  if (text.rfind("constant:", 0) == 0) {
    f.kind = Kind::Constant;
    f.constant = parse_whole_int(text.substr(9));
    return f;
  }
  if (text.rfind("table:", 0) == 0) {
    f.kind = Kind::LabelTable;
    std::array<bool, 4> seen{};
    std::string rest = text.substr(6);
    std::size_t start = 0;
    while (start <= rest.size()) {
      std::size_t comma = rest.find(',', start);
      std::string item = rest.substr(start, comma == std::string::npos ? comma : comma - start);
      std::size_t eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("field: table entries are LABEL=value");
      auto label = label_from_text(item.substr(0, eq));
      auto idx = static_cast<std::size_t>(label);
      if (seen[idx]) throw std::invalid_argument("field: duplicate table label");
      seen[idx] = true;
      f.table[idx] = parse_whole_int(item.substr(eq + 1));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!(seen[0] && seen[1] && seen[2] && seen[3]))
      throw std::invalid_argument("field: table needs all four labels E+,E-,L+,L-");
    return f;
  }
  throw std::invalid_argument("field: expected base-increment, constant:<c>, or table:<entries>");
}

std::string FieldSpec::to_text() const {
  switch (kind) {
    case Kind::BaseIncrement: return "base-increment";
    case Kind::Constant: return "constant:" + std::to_string(constant);
    case Kind::LabelTable:
      return "table:E+=" + std::to_string(table[0]) + ",E-=" + std::to_string(table[1]) +
             ",L+=" + std::to_string(table[2]) + ",L-=" + std::to_string(table[3]);
  }
  throw std::logic_error("FieldSpec: bad kind");
}

std::vector<std::int64_t> additive_functional(const Trajectory& traj, const EdgeField& field) {
  std::vector<std::int64_t> z(static_cast<std::size_t>(traj.steps()) + 1);
  z[0] = 0;
  for (std::size_t s = 0; s < traj.labels.size(); ++s)
    z[s + 1] = z[s] + field(traj.y[s], traj.y[s + 1], traj.labels[s]);
  return z;
}

std::vector<std::int64_t> additive_functional(const Trajectory& traj, const FieldSpec& field) {
  return additive_functional(traj, EdgeField([&field](const Vertex& a, const Vertex& b,
                                                      EdgeLabel l) { return field.value(a, b, l); }));
}

namespace {

void check_finite_config(const SimConfig& cfg) {
  if (cfg.infinite)
    throw std::invalid_argument("infinite vertices support single steps only, not chains");
  if (cfg.k < 1) throw std::invalid_argument("config: K must be >= 1");
  if (cfg.steps < 0) throw std::invalid_argument("config: steps must be >= 0");
  if (cfg.chains < 1) throw std::invalid_argument("config: chains must be >= 1");
  if (cfg.start && cfg.start->size() != cfg.k)
    throw std::invalid_argument("config: start vertex dimension differs from K");
}

Vertex chain_start(const SimConfig& cfg, RandomStream& rng) {
  if (cfg.start) return *cfg.start;
  return sample_stationary_vertex(cfg.k, rng);
}

}  // namespace

Trajectory run_chain(const SimConfig& cfg, std::int64_t chain_index) {
  check_finite_config(cfg);
  RandomStream rng = RandomStream::for_chain(cfg.seed, static_cast<std::uint64_t>(chain_index));

  Trajectory t;
  t.k = cfg.k;
  t.y.reserve(static_cast<std::size_t>(cfg.steps) + 1);
  t.labels.reserve(static_cast<std::size_t>(cfg.steps));
  t.z1.reserve(static_cast<std::size_t>(cfg.steps) + 1);

  Vertex cur = chain_start(cfg, rng);
  t.y.push_back(cur);
  t.z1.push_back(0);

  StepSampler sampler;
  for (std::int64_t s = 0; s < cfg.steps; ++s) {
    EdgeLabel label = sampler.step(cur, rng);
    t.labels.push_back(label);
    t.y.push_back(cur);
    t.z1.push_back(t.z1.back() + base_increment(label));
  }
  return t;
}

namespace {

// Same draw sequence as run_chain, keeping only the final z1.
std::int64_t final_z1(const SimConfig& cfg, std::int64_t chain, StepSampler& sampler) {
  RandomStream rng = RandomStream::for_chain(cfg.seed, static_cast<std::uint64_t>(chain));
  Vertex cur = chain_start(cfg, rng);
  std::int64_t z = 0;
  for (std::int64_t s = 0; s < cfg.steps; ++s) z += base_increment(sampler.step(cur, rng));
  return z;
}

double variance_of(const std::vector<double>& xs) {
  double n = static_cast<double>(xs.size());
  double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss / (n - 1.0);
}

}  // namespace

VarianceReport variance_report(const SimConfig& cfg, int threads) {
  check_finite_config(cfg);
  if (cfg.chains < 100)
    throw std::invalid_argument("variance_report: needs at least 100 chains");

  std::vector<double> z(static_cast<std::size_t>(cfg.chains));
  unsigned hw = std::thread::hardware_concurrency();
  auto nthreads = static_cast<std::int64_t>(threads > 0 ? threads : (hw ? hw : 1));
  nthreads = std::min(nthreads, cfg.chains);

  auto worker = [&](std::int64_t lo, std::int64_t hi) {
    StepSampler sampler;
    for (std::int64_t c = lo; c < hi; ++c)
      z[static_cast<std::size_t>(c)] = static_cast<double>(final_z1(cfg, c, sampler));
  };
  if (nthreads == 1) {
    worker(0, cfg.chains);
  } else {
    std::vector<std::thread> pool;
    std::int64_t per = (cfg.chains + nthreads - 1) / nthreads;
    for (std::int64_t t = 0; t < nthreads; ++t) {
      std::int64_t lo = t * per;
      std::int64_t hi = std::min(cfg.chains, lo + per);
      if (lo < hi) pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  VarianceReport r;
  r.k = cfg.k;
  r.steps = cfg.steps;
  r.chains = cfg.chains;
  r.seed = cfg.seed;
  r.variance = variance_of(z);
  // ratio is 0 by convention at steps = 0 (variance is identically 0 there)
  double norm =
      cfg.steps > 0 ? static_cast<double>(2 + cfg.k) / (2.0 * static_cast<double>(cfg.steps)) : 0.0;
  r.ratio = r.variance * norm;

  // percentile bootstrap on the normalized ratio; dedicated stream one past
  // the last chain index
  r.bootstrap_resamples = 1000;
  RandomStream boot = RandomStream::for_chain(cfg.seed, static_cast<std::uint64_t>(cfg.chains));
  std::vector<double> ratios(static_cast<std::size_t>(r.bootstrap_resamples));
  std::vector<double> resample(z.size());
  for (auto& ratio : ratios) {
    for (auto& v : resample)
      v = z[boot.uniform_index(static_cast<std::uint64_t>(z.size()))];
    ratio = variance_of(resample) * norm;
  }
  std::sort(ratios.begin(), ratios.end());
  auto b = static_cast<double>(r.bootstrap_resamples);
  r.ci_lower = ratios[static_cast<std::size_t>(std::floor(0.025 * b))];
  r.ci_upper = ratios[static_cast<std::size_t>(std::ceil(0.975 * b)) - 1];
  return r;
}

namespace {

template <class Step>
double time_steps(Vertex& cur, RandomStream& rng, std::int64_t steps, Step&& step) {
  std::int64_t warmup = std::min<std::int64_t>(steps, 64);
  int sink = 0;
  for (std::int64_t s = 0; s < warmup; ++s) sink += static_cast<int>(step(cur, rng));
  auto t0 = std::chrono::steady_clock::now();
  for (std::int64_t s = 0; s < steps; ++s) sink += static_cast<int>(step(cur, rng));
  auto t1 = std::chrono::steady_clock::now();
  volatile int keep = sink;
  (void)keep;
  return static_cast<double>(
             std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()) /
         static_cast<double>(steps);
}

}  // namespace

std::vector<BenchRow> bench_samplers(std::span<const std::int64_t> ks, std::int64_t cf_steps,
                                     std::int64_t naive_steps, std::uint64_t seed,
                                     std::int64_t naive_bound) {
  if (cf_steps < 1) throw std::invalid_argument("bench: cf_steps must be >= 1");
  std::vector<BenchRow> rows;
  for (auto k : ks) {
    if (k < 1) throw std::invalid_argument("bench: K must be >= 1");
    BenchRow row;
    row.k = k;

    RandomStream rng = RandomStream::for_chain(seed, static_cast<std::uint64_t>(k));
    Vertex cur = sample_stationary_vertex(k, rng);
    StepSampler sampler;
    row.cf_ns_per_step = time_steps(
        cur, rng, cf_steps, [&](Vertex& a, RandomStream& r) { return sampler.step(a, r); });

    if (k <= naive_bound && naive_steps >= 1) {
      Vertex ncur = sample_stationary_vertex(k, rng);
      row.naive_ns_per_step =
          time_steps(ncur, rng, naive_steps, [](Vertex& a, RandomStream& r) {
            oracle::NeighborSet nb = oracle::brute_neighbors(a);
            auto pick = r.uniform_index(static_cast<std::uint64_t>(nb.degree()));
            if (pick < nb.moves.size()) {
              a = nb.moves[pick].first;
              return nb.moves[pick].second;
            }
            return pick == nb.moves.size() ? EdgeLabel::PositiveLoop : EdgeLabel::NegativeLoop;
          });
      row.ratio = *row.naive_ns_per_step / row.cf_ns_per_step;
    }
    rows.push_back(row);
  }
  return rows;
}

double bench_loglog_slope(std::span<const BenchRow> rows) {
  if (rows.size() < 2) throw std::invalid_argument("bench: slope needs at least two rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    if (r.k < 1 || r.cf_ns_per_step <= 0)
      throw std::invalid_argument("bench: slope needs positive times");
    double x = std::log(static_cast<double>(r.k));
    double y = std::log(r.cf_ns_per_step);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  auto n = static_cast<double>(rows.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace sixv
