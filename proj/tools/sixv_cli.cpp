#include <bit>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sixv/contfrac.hpp"
#include "sixv/edge_sampler.hpp"
#include "sixv/io.hpp"
#include "sixv/kernel.hpp"
#include "sixv/oracle.hpp"
#include "sixv/rng.hpp"
#include "sixv/sim.hpp"
#include "sixv/vertex.hpp"

namespace {

using nlohmann::json;

struct GlobalOpts {
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool as_json = false;
  std::string out;
};

// stdout unless --out was given
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<std::int64_t> csv_blocks(const std::string& s, const char* what) {
  if (s.empty()) throw std::invalid_argument(std::string(what) + ": empty block list");
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    out.push_back(std::stoll(item, &pos));
    if (pos != item.size())
      throw std::invalid_argument(std::string(what) + ": bad integer '" + item + "'");
  }
  return out;
}

int cmd_neighbors(const GlobalOpts& g, const std::string& vertex) {
  sixv::Vertex a = sixv::Vertex::from_string(vertex);
  sixv::TransitionPmf pmf = sixv::transition_pmf(a);
  Sink sink(g.out);
  if (g.as_json) {
    json j{{"source", a.to_string()},
           {"K", a.size()},
           {"degree", sixv::degree_from_blocks(sixv::block_decomposition(a).m).str()},
           {"entries", sixv::pmf_to_json(pmf)}};
    sink.os() << j.dump() << '\n';
  } else {
    for (const auto& e : pmf.entries)
      sink.os() << sixv::label_text(e.label) << ' ' << e.target.to_string() << ' '
                << sixv::rational_to_string(e.prob) << '\n';
  }
  return 0;
}

int cmd_edge_sample(const GlobalOpts& g, std::int64_t k, std::int64_t count) {
  sixv::RandomStream rng(g.seed);
  Sink sink(g.out);
  json rows = json::array();
  for (std::int64_t i = 0; i < count; ++i) {
    auto [a, b, label] = sixv::sample_uniform_edge(k, rng);
    if (g.as_json) {
      rows.push_back(
          {{"a", a.to_string()}, {"b", b.to_string()}, {"label", sixv::label_text(label)}});
    } else {
      sink.os() << a.to_string() << ' ' << b.to_string() << ' ' << sixv::label_text(label)
                << '\n';
    }
  }
  if (g.as_json) sink.os() << rows.dump() << '\n';
  return 0;
}

struct TailOpts {
  std::string blocks;
  std::string prefix;
  std::string period;
  std::int64_t m = 1;
  std::string mode = "exact";
  double tol = 1e-12;
};

int cmd_tail(const GlobalOpts& g, const TailOpts& o) {
  Sink sink(g.out);
  if (o.mode == "exact" || o.mode == "float") {
    auto blocks = csv_blocks(o.blocks, "--blocks");
    if (o.mode == "float") {
      std::vector<double> tails;
      sixv::tail_values_double(blocks, tails);
      if (o.m < 1 || o.m > static_cast<std::int64_t>(blocks.size()) + 1)
        throw std::invalid_argument("--m out of range");
      double x = tails[static_cast<std::size_t>(o.m - 1)];
      if (g.as_json) {
        sink.os() << json{{"m", o.m}, {"x", x}}.dump() << '\n';
      } else {
        sink.os().precision(17);
        sink.os() << "x_" << o.m << " = " << x << '\n';
      }
      return 0;
    }
    sixv::TailTable table(blocks);
    const sixv::Rational& x = table.x(o.m);
    if (g.as_json) {
      json j{{"m", o.m},
             {"num", numerator(x).str()},
             {"den", denominator(x).str()},
             {"x", sixv::to_double(x)}};
      sink.os() << j.dump() << '\n';
    } else {
      sink.os() << "x_" << o.m << " = " << sixv::rational_to_string(x) << " ("
                << sixv::to_double(x) << ")\n";
    }
    return 0;
  }
  if (o.mode == "bracket") {
    std::vector<std::int64_t> prefix, period;
    if (!o.prefix.empty()) prefix = csv_blocks(o.prefix, "--prefix");
    if (!o.period.empty()) period = csv_blocks(o.period, "--period");
    sixv::PeriodicBlockStream stream(prefix, period);
    sixv::TailBracket br = sixv::tail_bracket_infinite(stream, o.m, o.tol);
    if (g.as_json) {
      json j{{"m", o.m},
             {"lower_num", numerator(br.lower).str()},
             {"lower_den", denominator(br.lower).str()},
             {"upper_num", numerator(br.upper).str()},
             {"upper_den", denominator(br.upper).str()},
             {"lower", sixv::to_double(br.lower)},
             {"upper", sixv::to_double(br.upper)},
             {"width", sixv::to_double(br.width())},
             {"depth", br.depth}};
      sink.os() << j.dump() << '\n';
    } else {
      sink.os().precision(17);
      sink.os() << "x_" << o.m << " in [" << sixv::to_double(br.lower) << ", "
                << sixv::to_double(br.upper) << "], width " << sixv::to_double(br.width())
                << ", depth " << br.depth << '\n';
    }
    return 0;
  }
  throw std::invalid_argument("--mode must be exact, float, or bracket");
}

struct StepOpts {
  std::string vertex;
  std::string prefix;
  std::string period;
  std::int64_t window = 0;
  std::string first_sign = "+";
  double tol = 1e-9;
};

int cmd_step(const GlobalOpts& g, const StepOpts& o) {
  Sink sink(g.out);
  sixv::RandomStream rng(g.seed);
  if (!o.vertex.empty()) {
    sixv::Vertex a = sixv::Vertex::from_string(o.vertex);
    auto [label, b] = sixv::sample_step(a, rng);
    if (g.as_json) {
      json j{{"label", sixv::label_text(label)},
             {"target", b.to_string()},
             {"z1_increment", sixv::base_increment(label)}};
      sink.os() << j.dump() << '\n';
    } else {
      sink.os() << sixv::label_text(label) << ' ' << b.to_string() << " z1 "
                << (sixv::base_increment(label) > 0 ? "+1" : "-1") << '\n';
    }
    return 0;
  }

  // infinite vertex: blocks = prefix then period repeating; resolve the
  // first `window` blocks, stream the rest
  std::vector<std::int64_t> prefix, period;
  if (!o.prefix.empty()) prefix = csv_blocks(o.prefix, "--prefix");
  if (!o.period.empty()) period = csv_blocks(o.period, "--period");
  if (prefix.empty() && period.empty())
    throw std::invalid_argument("step: need --vertex or --prefix/--period");
  if (o.first_sign != "+" && o.first_sign != "-")
    throw std::invalid_argument("--first-sign must be + or -");

  auto window = o.window > 0
                    ? o.window
                    : static_cast<std::int64_t>(prefix.empty() ? period.size() : prefix.size());
  sixv::PeriodicBlockStream stream(prefix, period);
  sixv::BlockDecomposition bd;
  bd.first_sign = o.first_sign == "+" ? 1 : -1;
  bd.s.push_back(0);
  for (std::int64_t i = 0; i < window; ++i) {
    auto b = stream.next();
    if (!b) throw std::invalid_argument("step: window longer than the block sequence");
    bd.m.push_back(*b);
    bd.s.push_back(bd.s.back() + *b);
  }

  sixv::InfiniteStepOutcome out = sixv::sample_step_infinite(bd, stream, o.tol, rng);
  std::string label = "none";
  json flips = json::object();
  for (std::size_t i = 0; i < out.eps.size(); ++i) {
    if (!out.eps[i]) continue;
    if (label == "none")
      label = bd.sign(static_cast<std::int64_t>(i) + 1) == 1 ? "E+" : "E-";
    flips[std::to_string(i + 1)] = out.pos[i];
  }
  if (g.as_json) {
    std::string eps;
    for (auto e : out.eps) eps.push_back(e ? '1' : '0');
    json j{{"eps", eps},
           {"E", flips},
           {"label", label == "none" ? json(nullptr) : json(label)},
           {"consumed_depth", out.consumed_depth}};
    sink.os() << j.dump() << '\n';
  } else {
    sink.os() << "label " << label << " flips " << flips.dump() << " consumed_depth "
              << out.consumed_depth << '\n';
  }
  return 0;
}

struct VerifyOpts {
  std::int64_t max_k = 5;
  std::int64_t exhaustive_edges = 5;
};

int cmd_verify(const GlobalOpts& g, const VerifyOpts& o) {
  Sink sink(g.out);
  json checks = json::array();
  bool all_ok = true;
  auto report = [&](const std::string& name, std::int64_t k, bool ok) {
    checks.push_back({{"check", name}, {"K", k}, {"ok", ok}});
    if (!g.as_json) sink.os() << (ok ? "ok" : "FAIL") << ": " << name << " (K=" << k << ")\n";
    all_ok = all_ok && ok;
  };

  for (std::int64_t k = 1; k <= o.max_k; ++k) {
    bool pmf_ok = true, deg_ok = true;
    sixv::Vertex a(k);
    std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t i = 0;;) {
      auto nb = sixv::oracle::brute_neighbors(a);
      auto pmf = sixv::transition_pmf(a);
      sixv::BigInt deg =
          sixv::degree_from_blocks(sixv::block_decomposition(a).m);
      deg_ok = deg_ok && deg == nb.degree();

      sixv::Rational uniform(sixv::BigInt(1), deg);
      std::map<std::pair<sixv::Vertex, int>, sixv::Rational> got;
      for (const auto& e : pmf.entries) {
        pmf_ok = pmf_ok && e.prob == uniform;
        got[{e.target, static_cast<int>(e.label)}] += e.prob;
      }
      pmf_ok = pmf_ok && pmf.entries.size() == static_cast<std::size_t>(nb.degree());
      for (const auto& [b, label] : nb.moves)
        pmf_ok = pmf_ok && got.count({b, static_cast<int>(label)}) == 1;
      pmf_ok = pmf_ok && pmf.total_mass() == 1;

      if (++i == total) break;
      a.flip_digit(std::countr_zero(i) + 1);
    }
    report("transition pmf uniform over brute neighbors", k, pmf_ok);
    report("degree identity vs brute scan", k, deg_ok);
  }

  for (std::int64_t k = 1; k <= o.max_k; ++k) {
    sixv::BigInt sum = 0;
    sixv::Vertex a(k);
    std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t i = 0;;) {
      sum += sixv::degree_from_blocks(sixv::block_decomposition(a).m);
      if (++i == total) break;
      a.flip_digit(std::countr_zero(i) + 1);
    }
    report("degree sum equals 2*3^K", k, sum == 2 * sixv::pow3(k));
  }

  for (std::int64_t k = 1; k <= o.exhaustive_edges; ++k) {
    // stationarity edge by edge: pi(a) * P(b|a) = 1/(2*3^K)
    bool ok = true;
    sixv::Rational per_edge(sixv::BigInt(1), 2 * sixv::pow3(k));
    sixv::Vertex a(k);
    std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t i = 0;;) {
      auto pmf = sixv::transition_pmf(a);
      sixv::Rational pi(sixv::degree_from_blocks(sixv::block_decomposition(a).m),
                        2 * sixv::pow3(k));
      for (const auto& e : pmf.entries) ok = ok && pi * e.prob == per_edge;
      if (++i == total) break;
      a.flip_digit(std::countr_zero(i) + 1);
    }
    report("stationary flow constant on every edge", k, ok);

    auto sampler_pmf = sixv::oracle::exact_sampler_pmf(k);
    bool uniform_ok =
        sampler_pmf.size() == static_cast<std::size_t>(2 * sixv::pow3(k).convert_to<std::int64_t>());
    for (const auto& [edge, mass] : sampler_pmf) uniform_ok = uniform_ok && mass == per_edge;
    report("edge sampler exactly uniform on all edges", k, uniform_ok);
  }

  if (g.as_json) {
    sink.os() << json{{"checks", checks}, {"ok", all_ok}}.dump() << '\n';
  } else {
    sink.os() << (all_ok ? "all checks passed" : "verification FAILED") << '\n';
  }
  return all_ok ? 0 : 1;
}

struct SimOpts {
  std::string config;
  std::int64_t k = 0;
  std::int64_t steps = -1;
  std::int64_t chains = 0;
  std::string start;
  std::string field;
  int threads = 0;
};

sixv::SimConfig make_config(const GlobalOpts& g, const SimOpts& o) {
  sixv::SimConfig cfg;
  if (!o.config.empty()) cfg = sixv::load_config(o.config);
  if (o.k > 0) cfg.k = o.k;
  if (o.steps >= 0) cfg.steps = o.steps;
  if (o.chains > 0) cfg.chains = o.chains;
  if (!o.start.empty()) cfg.start = sixv::Vertex::from_string(o.start);
  if (!o.field.empty()) cfg.field = sixv::FieldSpec::parse(o.field);
  if (g.seed_given || cfg.seed == 0) cfg.seed = g.seed;
  if (!g.out.empty()) cfg.out = g.out;
  return cfg;
}

int cmd_simulate(const GlobalOpts& g, const SimOpts& o) {
  sixv::SimConfig cfg = make_config(g, o);
  if (cfg.chains == 1) {
    sixv::Trajectory t = sixv::run_chain(cfg, 0);
    Sink sink(cfg.out);
    sixv::write_trajectory(sink.os(), t, cfg.seed);
    return 0;
  }
  if (cfg.out.empty())
    throw std::invalid_argument("simulate: multiple chains need --out (one file per chain)");
  for (std::int64_t c = 0; c < cfg.chains; ++c) {
    sixv::Trajectory t = sixv::run_chain(cfg, c);
    std::ofstream f(cfg.out + ".chain" + std::to_string(c));
    if (!f) throw std::runtime_error("cannot open output file: " + cfg.out);
    sixv::write_trajectory(f, t, cfg.seed);
  }
  return 0;
}

int cmd_variance(const GlobalOpts& g, const SimOpts& o) {
  sixv::SimConfig cfg = make_config(g, o);
  sixv::VarianceReport r = sixv::variance_report(cfg, o.threads);
  Sink sink(g.out);
  if (g.as_json) {
    json j{{"exploratory", true},
           {"K", r.k},
           {"steps", r.steps},
           {"chains", r.chains},
           {"seed", r.seed},
           {"variance", r.variance},
           {"normalized_ratio", r.ratio},
           {"ci_lower", r.ci_lower},
           {"ci_upper", r.ci_upper},
           {"bootstrap_resamples", r.bootstrap_resamples}};
    sink.os() << j.dump() << '\n';
  } else {
    sink.os() << "exploratory variance report (normalization target from prior work; "
                 "not verified here)\n"
              << "K " << r.k << " steps " << r.steps << " chains " << r.chains << " seed "
              << r.seed << '\n'
              << "variance " << r.variance << '\n'
              << "normalized ratio Var*(2+K)/(2n) " << r.ratio << '\n'
              << "bootstrap 95% CI [" << r.ci_lower << ", " << r.ci_upper << "] ("
              << r.bootstrap_resamples << " resamples)\n";
  }
  return 0;
}

struct BenchOpts {
  std::string ks = "8,16,32,64,128,256,512,1024,2048,4096";
  std::int64_t cf_steps = 20000;
  std::int64_t naive_steps = 5;
  std::int64_t naive_bound = 20;
};

int cmd_bench(const GlobalOpts& g, const BenchOpts& o) {
  auto ks = csv_blocks(o.ks, "--ks");
  auto rows = sixv::bench_samplers(ks, o.cf_steps, o.naive_steps, g.seed, o.naive_bound);
  Sink sink(g.out);
  if (g.as_json) {
    json jrows = json::array();
    for (const auto& r : rows) {
      json j{{"K", r.k}, {"cf_ns_per_step", r.cf_ns_per_step}};
      j["naive_ns_per_step"] = r.naive_ns_per_step ? json(*r.naive_ns_per_step) : json(nullptr);
      j["ratio"] = r.ratio ? json(*r.ratio) : json(nullptr);
      jrows.push_back(std::move(j));
    }
    sink.os() << json{{"rows", jrows}, {"loglog_slope", sixv::bench_loglog_slope(rows)}}.dump()
              << '\n';
  } else {
    sink.os() << "K\tcf ns/step\tnaive ns/step\tratio\n";
    for (const auto& r : rows) {
      sink.os() << r.k << '\t' << r.cf_ns_per_step << '\t';
      if (r.naive_ns_per_step)
        sink.os() << *r.naive_ns_per_step << '\t' << *r.ratio << '\n';
      else
        sink.os() << "-\t-\n";
    }
    sink.os() << "log-log slope of cf time vs K: " << sixv::bench_loglog_slope(rows) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random walks on the signed-digit multigraphs G_K"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "RNG seed (default 0)");
  app.add_flag("--json", g.as_json, "JSON output");
  app.add_option("--out", g.out, "write output to PATH instead of stdout");

  auto* neighbors = app.add_subcommand("neighbors", "exact one-step distribution from a vertex");
  std::string vertex;
  neighbors->add_option("--vertex", vertex, "vertex as a +- string")->required();

  auto* step = app.add_subcommand("step", "sample one kernel step");
  StepOpts step_opts;
  step->add_option("--vertex", step_opts.vertex, "finite vertex as a +- string");
  step->add_option("--prefix", step_opts.prefix, "infinite vertex: leading block lengths (csv)");
  step->add_option("--period", step_opts.period, "infinite vertex: repeating block lengths (csv)");
  step->add_option("--window", step_opts.window, "blocks to resolve (default: prefix length)");
  step->add_option("--first-sign", step_opts.first_sign, "sign of block 1 (+ or -)");
  step->add_option("--tol", step_opts.tol, "initial tail bracket width");

  auto* edge = app.add_subcommand("edge-sample", "uniform random edges of G_K");
  std::int64_t edge_k = 0, edge_count = 1;
  edge->add_option("--k", edge_k, "dimension K")->required();
  edge->add_option("--count", edge_count, "number of edges");

  auto* tail = app.add_subcommand("tail", "continued-fraction tails x_m");
  TailOpts tail_opts;
  tail->add_option("--blocks", tail_opts.blocks, "block lengths (csv)");
  tail->add_option("--m", tail_opts.m, "tail index (default 1)");
  tail->add_option("--mode", tail_opts.mode, "exact | float | bracket");
  tail->add_option("--prefix", tail_opts.prefix, "bracket mode: leading blocks (csv)");
  tail->add_option("--period", tail_opts.period, "bracket mode: repeating blocks (csv)");
  tail->add_option("--tol", tail_opts.tol, "bracket mode: target width");

  auto* verify = app.add_subcommand("verify", "exhaustive small-K checks against brute force");
  VerifyOpts verify_opts;
  verify->add_option("--max-k", verify_opts.max_k, "largest K for pmf/degree checks");
  verify->add_option("--exhaustive-edges", verify_opts.exhaustive_edges,
                     "largest K for per-edge checks");

  auto* simulate = app.add_subcommand("simulate", "run chains, write JSON-lines trajectories");
  SimOpts sim_opts;
  for (auto* cmd : {simulate, app.add_subcommand("variance", "across-chain variance report")}) {
    cmd->add_option("--config", sim_opts.config, "config file (JSON or key=value)");
    cmd->add_option("--k", sim_opts.k, "dimension K");
    cmd->add_option("--steps", sim_opts.steps, "steps per chain");
    cmd->add_option("--chains", sim_opts.chains, "number of chains");
    cmd->add_option("--start", sim_opts.start, "start vertex (default: stationary draw)");
    cmd->add_option("--field", sim_opts.field,
                    "additive field: base-increment | constant:<c> | table:<entries>");
    cmd->add_option("--threads", sim_opts.threads, "worker threads (0 = hardware)");
  }
  auto* variance = app.get_subcommand("variance");

  auto* bench = app.add_subcommand("bench", "per-step timing of the two samplers");
  BenchOpts bench_opts;
  bench->add_option("--ks", bench_opts.ks, "dimensions to time (csv)");
  bench->add_option("--cf-steps", bench_opts.cf_steps, "steps for the fast arm");
  bench->add_option("--naive-steps", bench_opts.naive_steps, "steps for the brute arm");
  bench->add_option("--naive-bound", bench_opts.naive_bound, "largest K for the brute arm");

  for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  g.seed_given = app.count("--seed") > 0;

  try {
    if (app.got_subcommand(neighbors)) return cmd_neighbors(g, vertex);
    if (app.got_subcommand(step)) return cmd_step(g, step_opts);
    if (app.got_subcommand(edge)) return cmd_edge_sample(g, edge_k, edge_count);
    if (app.got_subcommand(tail)) return cmd_tail(g, tail_opts);
    if (app.got_subcommand(verify)) return cmd_verify(g, verify_opts);
    if (app.got_subcommand(simulate)) return cmd_simulate(g, sim_opts);
    if (app.got_subcommand(variance)) return cmd_variance(g, sim_opts);
    if (app.got_subcommand(bench)) return cmd_bench(g, bench_opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
