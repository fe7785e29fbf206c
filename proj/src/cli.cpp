#include "mhdlab/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mhdlab/io.hpp"
#include "mhdlab/verifier.hpp"

namespace mhdlab {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) throw ConfigError(ctx + ": unknown key '" + it.key() + "'");
  }
}

Grid parse_grid(const json& j) {
  check_keys(j, {"n", "sizes", "period"}, "grid");
  Grid g;
  g.n = j.at("n").get<int>();
  auto sizes = j.at("sizes").get<std::vector<int>>();
  if (static_cast<int>(sizes.size()) != g.n) throw ConfigError("grid: sizes must have n entries");
  for (int a = 0; a < g.n; ++a) g.sizes[a] = sizes[a];
  if (j.contains("period")) g.period = j.at("period").get<Real>();
  g.validate();
  return g;
}

ScenarioParams parse_scenario(const json& j, const std::optional<std::uint64_t>& seed_override) {
  check_keys(j, {"decay", "amplitude", "seed", "b_perturbation", "band_limit"}, "scenario");
  ScenarioParams p;
  if (j.contains("decay")) p.decay = j.at("decay").get<Real>();
  if (j.contains("amplitude")) p.amplitude = j.at("amplitude").get<Real>();
  if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("b_perturbation")) p.b_perturbation = j.at("b_perturbation").get<Real>();
  if (j.contains("band_limit")) p.band_limit = j.at("band_limit").get<int>();
  if (seed_override) p.seed = *seed_override;
  if (p.decay < 0.0 || p.amplitude < 0.0) throw ConfigError("scenario: negative decay/amplitude");
  return p;
}

struct Manifest {
  std::map<std::string, std::string> outputs;
  void add(const fs::path& path) {
    std::ostringstream h;
    h << std::hex << fnv1a_file(path);
    outputs[path.filename().string()] = h.str();
  }
};

class Writer {
public:
  Writer(const fs::path& dir, std::string command, const json& config, bool quiet)
      : dir_(dir), command_(std::move(command)), quiet_(quiet) {
    fs::create_directories(dir_);
    const std::string canon = config.dump();
    config_hash_ = fnv1a_bytes(canon.data(), canon.size());
    start_ = std::chrono::steady_clock::now();
  }

  void text(const std::string& name, const std::string& body) {
    write_text(dir_ / name, body);
    manifest_.add(dir_ / name);
    if (!quiet_) std::cout << "wrote " << (dir_ / name).string() << "\n";
  }
  template <class Fn>
  void artifact(const std::string& name, Fn&& dump) {
    dump(dir_ / name);
    manifest_.add(fs::path((dir_ / name).string() + ".bin"));
    manifest_.add(fs::path((dir_ / name).string() + ".json"));
    if (!quiet_) std::cout << "wrote " << (dir_ / name).string() << ".{bin,json}\n";
  }

  void finish() {
    const auto wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_);
    json m;
    std::ostringstream ch;
    ch << std::hex << config_hash_;
    m["command"] = command_;
    m["config_hash"] = ch.str();
    m["version"] = "0.1.0";
    m["wall_time_s"] = wall.count();
    json outs = json::object();
    std::uint64_t agg = 1469598103934665603ULL;
    for (const auto& [name, hash] : manifest_.outputs) {
      outs[name] = hash;
      agg = fnv1a_bytes(name.data(), name.size(), agg);
      agg = fnv1a_bytes(hash.data(), hash.size(), agg);
    }
    m["outputs"] = outs;
    std::ostringstream oh;
    oh << std::hex << agg;
    m["outputs_hash"] = oh.str();
    write_text(dir_ / "manifest.json", m.dump(2) + "\n");
  }

  const fs::path& dir() const { return dir_; }

private:
  fs::path dir_;
  std::string command_;
  bool quiet_;
  std::uint64_t config_hash_ = 0;
  Manifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(Real x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

int cmd_simulate_euler(const json& cfg, const CliOptions& opts, Writer& w) {
  check_keys(cfg, {"grid", "scenario", "dt", "t_end"}, "simulate-euler");
  const Grid grid = parse_grid(cfg.at("grid"));
  const ScenarioParams sp = parse_scenario(cfg.at("scenario"), opts.seed);
  const Real dt = cfg.at("dt").get<Real>();
  const Real t_end = cfg.at("t_end").get<Real>();
  if (dt <= 0.0 || t_end <= 0.0) throw ConfigError("simulate-euler: dt and t_end must be positive");
  const int nsteps = static_cast<int>(std::llround(t_end / dt));

  EulerState st = make_scenario(grid, sp);
  EulerRunResult run = run_euler(st, dt, nsteps);

  std::ostringstream csv;
  csv << "t,energy,div_v,div_b\n";
  for (size_t m = 0; m < run.history.size(); ++m) {
    csv << fmt(run.history[m].t) << ',' << fmt(run.energy[m]) << ','
        << fmt(spectral_divergence_norm(run.history[m].v)) << ','
        << fmt(spectral_divergence_norm(run.history[m].b)) << '\n';
  }
  w.text("energy.csv", csv.str());
  const EulerState& last = run.history.back();
  w.artifact("final_v0", [&](const fs::path& p) { dump_field(p, last.v[0]); });
  w.artifact("final_v1", [&](const fs::path& p) { dump_field(p, last.v[1]); });
  return 0;
}

int cmd_simulate_lagrangian(const json& cfg, const CliOptions& opts, Writer& w) {
  check_keys(cfg, {"grid", "scenario", "dt", "t_end", "pressure_tol", "record_every"},
             "simulate-lagrangian");
  const Grid grid = parse_grid(cfg.at("grid"));
  const ScenarioParams sp = parse_scenario(cfg.at("scenario"), opts.seed);
  const Real dt = cfg.at("dt").get<Real>();
  const Real t_end = cfg.at("t_end").get<Real>();
  CoupledOptions copts;
  if (cfg.contains("pressure_tol")) copts.pressure_tol = cfg.at("pressure_tol").get<Real>();
  if (cfg.contains("record_every")) copts.record_every = cfg.at("record_every").get<int>();

  const EulerState st = make_scenario(grid, sp);
  CoupledResult run = run_coupled(st.v, t_end, dt, copts);

  std::ostringstream csv;
  csv << "t,det_min,det_max,curl_residual,energy,removed_rhs_mean,pressure_iterations\n";
  for (const auto& row : run.diagnostics)
    csv << fmt(row.t) << ',' << fmt(row.det_min) << ',' << fmt(row.det_max) << ','
        << fmt(row.curl_residual) << ',' << fmt(row.energy) << ',' << fmt(row.removed_rhs_mean)
        << ',' << row.pressure_iterations << '\n';
  w.text("monitor.csv", csv.str());
  const DeformationState& last = run.states.back();
  w.artifact("final_H", [&](const fs::path& p) { dump_tensor(p, last.H); });
  w.artifact("final_Ht", [&](const fs::path& p) { dump_tensor(p, last.Ht); });
  w.artifact("final_q", [&](const fs::path& p) { dump_field(p, last.q); });
  return 0;
}

int cmd_cross_validate(const json& cfg, const CliOptions& opts, Writer& w) {
  check_keys(cfg, {"grid", "scenario", "dt", "t_end", "checkpoints", "pressure_tol"},
             "cross-validate");
  const Grid grid = parse_grid(cfg.at("grid"));
  const ScenarioParams sp = parse_scenario(cfg.at("scenario"), opts.seed);
  const Real dt = cfg.at("dt").get<Real>();
  const Real t_end = cfg.at("t_end").get<Real>();
  int checkpoints = cfg.contains("checkpoints") ? cfg.at("checkpoints").get<int>() : 5;
  const int nsteps = static_cast<int>(std::llround(t_end / dt));
  if (checkpoints < 1 || nsteps % checkpoints != 0)
    throw ConfigError("cross-validate: checkpoints must divide the step count");

  const EulerState st = make_scenario(grid, sp);

  CoupledOptions copts;
  if (cfg.contains("pressure_tol")) copts.pressure_tol = cfg.at("pressure_tol").get<Real>();
  copts.record_every = nsteps / checkpoints;
  CoupledResult lag = run_coupled(st.v, t_end, dt, copts);

  EulerRunResult eul = run_euler(st, dt, nsteps);
  std::vector<FlowMap> maps = advect_trajectories(eul.history, dt);

  const TensorField identity = TensorField::identity(grid);
  std::ostringstream csv;
  csv << "t,rel_l2_G,rel_l2_H,det_dev_max,blag_err_max\n";
  const int stride = nsteps / checkpoints;
  for (int cp = 0; cp <= checkpoints; ++cp) {
    const int step = cp * stride;
    const DeformationState& ls = lag.states[static_cast<size_t>(cp)];
    const TensorField href = flow_map_deformation(maps[static_cast<size_t>(step)]);
    Real num = 0.0, den_g = 0.0, den_h = 0.0;
    for (int c = 0; c < grid.n * grid.n; ++c) {
      num += (ls.H.comp[c].v - href.comp[c].v).square().sum();
      den_h += href.comp[c].v.square().sum();
      den_g += (href.comp[c].v - identity.comp[c].v).square().sum();
    }
    const Real det_dev = (det(href).v - 1.0).abs().maxCoeff();
    VectorField b_lag, v_lag;
    push_forward_fields(eul.history[static_cast<size_t>(step)], maps[static_cast<size_t>(step)],
                        b_lag, v_lag);
    Real blag_err = 0.0;
    for (int i = 0; i < grid.n; ++i)
      blag_err = std::max(blag_err, (b_lag[i].v - href(i, 0).v).abs().maxCoeff());
    csv << fmt(ls.t) << ',' << fmt(std::sqrt(num / std::max(den_g, 1e-300))) << ','
        << fmt(std::sqrt(num / std::max(den_h, 1e-300))) << ',' << fmt(det_dev) << ','
        << fmt(blag_err) << '\n';
  }
  w.text("comparison.csv", csv.str());
  return 0;
}

int cmd_picard(const json& cfg, const CliOptions& opts, Writer& w) {
  check_keys(cfg, {"grid", "scenario", "picard"}, "picard");
  const Grid grid = parse_grid(cfg.at("grid"));
  const ScenarioParams sp = parse_scenario(cfg.at("scenario"), opts.seed);
  const json& pj = cfg.at("picard");
  check_keys(pj,
             {"s", "theta", "eps", "T", "nt", "max_iters", "contraction_tol", "pressure_tol",
              "map_constant", "correct_u2_data", "cross_check"},
             "picard");
  PicardConfig pc;
  if (pj.contains("s")) pc.s = pj.at("s").get<Real>();
  if (pj.contains("theta")) pc.theta = pj.at("theta").get<Real>();
  if (pj.contains("eps")) pc.eps = pj.at("eps").get<Real>();
  if (pj.contains("T")) pc.T = pj.at("T").get<Real>();
  if (pj.contains("nt")) pc.nt = pj.at("nt").get<int>();
  if (pj.contains("max_iters")) pc.max_iters = pj.at("max_iters").get<int>();
  if (pj.contains("contraction_tol")) pc.contraction_tol = pj.at("contraction_tol").get<Real>();
  if (pj.contains("pressure_tol")) pc.pressure_tol = pj.at("pressure_tol").get<Real>();
  if (pj.contains("map_constant")) pc.map_constant = pj.at("map_constant").get<Real>();
  if (pj.contains("correct_u2_data")) pc.correct_u2_data = pj.at("correct_u2_data").get<bool>();
  pc.validate(grid.n);
  if (!(pc.s > 0.5 * (grid.n + 1)))
    throw ConfigError("picard: hypothesis s > (n+1)/2 violated");

  const EulerState st = make_scenario(grid, sp);
  PicardRunResult run = picard_iterate(pc, st.v);

  std::ostringstream csv;
  csv << "iteration,composite_norm,diff_norm,ratio\n";
  for (const auto& rec : run.records)
    csv << rec.iteration << ',' << fmt(rec.composite_norm) << ',' << fmt(rec.diff_norm) << ','
        << fmt(rec.ratio) << '\n';
  w.text("iterates.csv", csv.str());

  json rep;
  rep["window"] = run.window;
  rep["verdict"] = verdict_name(run.report.verdict);
  rep["rate"] = run.report.rate;
  if (!run.failure.empty()) rep["failure"] = run.failure;
  if (cfg.at("picard").contains("cross_check") &&
      cfg.at("picard").at("cross_check").get<bool>() &&
      run.report.verdict == ContractionVerdict::contracting) {
    rep["fixed_point_vs_coupled"] = picard_vs_coupled_error(run.fixed_point, st.v, pc.pressure_tol);
  }
  w.text("picard.json", rep.dump(2) + "\n");
  return 0;
}

int cmd_verify_estimate(const json& cfg, const CliOptions& opts, Writer& w) {
  check_keys(cfg, {"cases"}, "verify-estimate");
  std::vector<RatioReport> reports;
  for (const json& cj : cfg.at("cases")) {
    check_keys(cj, {"id", "n", "s", "theta", "eps", "a", "b", "members", "seed", "resolutions",
                    "sigma"},
               "lemma case");
    LemmaCase c;
    c.id = lemma_from_name(cj.at("id").get<std::string>());
    if (cj.contains("n")) c.n = cj.at("n").get<int>();
    if (cj.contains("s")) c.s = cj.at("s").get<Real>();
    if (cj.contains("theta")) c.theta = cj.at("theta").get<Real>();
    if (cj.contains("eps")) c.eps = cj.at("eps").get<Real>();
    if (cj.contains("a")) c.a = cj.at("a").get<Real>();
    if (cj.contains("b")) c.b = cj.at("b").get<Real>();
    if (cj.contains("members")) c.members = cj.at("members").get<int>();
    if (cj.contains("seed")) c.seed = cj.at("seed").get<std::uint64_t>();
    if (cj.contains("resolutions")) c.resolutions = cj.at("resolutions").get<std::vector<int>>();
    if (cj.contains("sigma")) c.sigma = cj.at("sigma").get<Real>();
    if (opts.seed) c.seed = *opts.seed;
    c.validate(); // hypothesis violations are config errors
    reports.push_back(convergence_sweep(c));
  }
  w.text("estimates.csv", ratio_report_csv(reports));
  w.text("estimates.json", ratio_report_json(reports));
  for (const auto& rep : reports)
    if (!rep.pass) return 1;
  return 0;
}

int cmd_norm(const json& cfg, const CliOptions&, Writer& w) {
  check_keys(cfg, {"input", "kind", "a", "b", "theta"}, "norm");
  const std::string kind = cfg.at("kind").get<std::string>();
  const Real a = cfg.contains("a") ? cfg.at("a").get<Real>() : 0.0;
  const Real b = cfg.contains("b") ? cfg.at("b").get<Real>() : 0.0;
  const Real theta = cfg.contains("theta") ? cfg.at("theta").get<Real>() : 0.0;
  const fs::path input = cfg.at("input").get<std::string>();
  Real value = 0.0;
  if (kind == "spatial") {
    value = sobolev_norm(load_field(input), a, b);
  } else if (kind == "spacetime") {
    value = wave_sobolev_norm(load_spacetime(input), NormSpec{a, b, theta});
  } else if (kind == "composite") {
    value = composite_norm(load_spacetime(input), NormSpec{a, b, theta});
  } else {
    throw ConfigError("norm: kind must be spatial, spacetime or composite");
  }
  json j;
  j["kind"] = kind;
  j["a"] = a;
  j["b"] = b;
  j["theta"] = theta;
  j["value"] = value;
  w.text("norm.json", j.dump(2) + "\n");
  std::cout.precision(17);
  std::cout << value << "\n";
  return 0;
}

int cmd_dump_cutoffs(const json& cfg, const CliOptions&, Writer& w) {
  check_keys(cfg, {"samples", "xmax"}, "dump-cutoffs");
  const int samples = cfg.contains("samples") ? cfg.at("samples").get<int>() : 1001;
  const Real xmax = cfg.contains("xmax") ? cfg.at("xmax").get<Real>() : 5.0;
  if (samples < 2) throw ConfigError("dump-cutoffs: need at least 2 samples");
  const CutoffProfile chi = make_cutoff_chi();
  const CutoffProfile phi = make_cutoff_phi();
  std::ostringstream csv;
  csv << "x,chi,phi\n";
  for (int i = 0; i < samples; ++i) {
    const Real x = -xmax + 2.0 * xmax * i / (samples - 1);
    csv << fmt(x) << ',' << fmt(chi(x)) << ',' << fmt(phi(x)) << '\n';
  }
  w.text("cutoffs.csv", csv.str());
  return 0;
}

} // namespace

int run_config(const CliOptions& opts) {
  json cfg;
  try {
    std::ifstream is(opts.config);
    if (!is) throw ConfigError("cannot open config: " + opts.config.string());
    is >> cfg;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    Writer w(opts.out, opts.command, cfg, opts.quiet);
    int rc = 0;
    if (opts.command == "simulate-euler")
      rc = cmd_simulate_euler(cfg, opts, w);
    else if (opts.command == "simulate-lagrangian")
      rc = cmd_simulate_lagrangian(cfg, opts, w);
    else if (opts.command == "cross-validate")
      rc = cmd_cross_validate(cfg, opts, w);
    else if (opts.command == "picard")
      rc = cmd_picard(cfg, opts, w);
    else if (opts.command == "verify-estimate")
      rc = cmd_verify_estimate(cfg, opts, w);
    else if (opts.command == "norm")
      rc = cmd_norm(cfg, opts, w);
    else if (opts.command == "dump-cutoffs")
      rc = cmd_dump_cutoffs(cfg, opts, w);
    else
      throw ConfigError("unknown subcommand: " + opts.command);
    w.finish();
    return rc;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    try {
      nlohmann::json diag;
      diag["error"] = e.what();
      write_text(opts.out / "diagnostics.json", diag.dump(2) + "\n");
    } catch (...) {
    }
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}

} // namespace mhdlab
