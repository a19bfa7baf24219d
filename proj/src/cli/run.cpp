#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "weylchar/cli.hpp"
#include "weylchar/climit.hpp"
#include "weylchar/dynamics.hpp"
#include "weylchar/error.hpp"
#include "weylchar/grid_io.hpp"
#include "weylchar/nctransform.hpp"
#include "weylchar/observables.hpp"
#include "weylchar/positivity.hpp"
#include "weylchar/repr.hpp"

namespace weylchar::cli {

using nlohmann::json;

namespace {

json matrix_json(const Eigen::MatrixXcd& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ri = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return {{"dim", m.rows()}, {"real", re}, {"imag", im}};
}

Eigen::MatrixXcd matrix_from(const json& o, int dim) {
  const json& re = o.at("real");
  const json im = o.value("imag", json::array());
  const int n = static_cast<int>(re.size());
  if (n != dim) throw DimensionError("observable matrix has " + std::to_string(n) + " rows, the state has " + std::to_string(dim));
  Eigen::MatrixXcd a(n, n);
  for (int r = 0; r < n; ++r) {
    if (re[r].size() != static_cast<std::size_t>(n)) throw DimensionError("observable matrix must be square");
    for (int c = 0; c < n; ++c) {
      const double i = im.empty() ? 0.0 : im.at(r).at(c).get<double>();
      a(r, c) = {re[r][c].get<double>(), i};
    }
  }
  return a;
}

// Named operators with exact matrix elements in `dim` levels.
Eigen::MatrixXcd named_operator(const std::string& name, double hbar, int dim) {
  const int big = dim + 2;
  const repr::TruncatedRep rep = repr::build_generators(hbar, big);
  Eigen::MatrixXcd a;
  if (name == "identity") a = Eigen::MatrixXcd::Identity(big, big);
  else if (name == "number") a = repr::lowering(big).adjoint() * repr::lowering(big);
  else if (name == "q") a = rep.qhat;
  else if (name == "p") a = rep.phat;
  else if (name == "q2") a = rep.qhat * rep.qhat;
  else if (name == "p2") a = rep.phat * rep.phat;
  else if (name == "qp_sym") a = 0.5 * (rep.qhat * rep.phat + rep.phat * rep.qhat);
  else throw DomainError("unknown operator '" + name + "'");
  return a.topLeftCorner(dim, dim);
}

cl::StateFamily family_from(const json& config) {
  const json& s = config.at("state");
  const std::string type = s.at("type").get<std::string>();
  if (type == "fock") return cl::fock_family(s.at("m").get<int>());
  if (type == "fock_energy") return cl::fock_energy_family(s.at("energy").get<double>());
  if (type == "oscillating") return cl::oscillating_family();
  if (type == "coherent") {
    states::PMixtureSpec spec;
    spec.atoms.push_back({s.at("q").get<double>(), s.at("p").get<double>(), 1.0});
    return cl::mixture_family(spec);
  }
  if (type == "p_mixture") return cl::mixture_family(mixture_from(s));
  throw DomainError("state.type '" + type + "' does not define an hbar family");
}

std::vector<double> schedule_from(const json& config) {
  const json cl = config.value("climit", json::object());
  if (!cl.contains("schedule")) return cl::geometric_schedule();
  const json& s = cl.at("schedule");
  if (s.is_array()) return s.get<std::vector<double>>();
  return cl::geometric_schedule(s.value("start", 1.0), s.value("ratio", 0.5), s.value("count", 6));
}

const char* kPlotScript = R"(#!/usr/bin/env python3
# Quick look at the grids written by weylchar. Usage: python3 plot.py
import json
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

FILES = %FILES%

for path in FILES:
    with open(path) as fh:
        meta = json.loads(fh.readline())
    data = np.loadtxt(path, delimiter=",", skiprows=2)
    m = int(meta["points"])
    x = data[:, 2].reshape(m, m)
    y = data[:, 3].reshape(m, m)
    if meta["value"] == "complex":
        z = np.hypot(data[:, 4], data[:, 5]).reshape(m, m)
        label = "|value|"
    else:
        z = data[:, 4].reshape(m, m)
        label = "value"
    names = ("eta", "xi") if meta["axes"] == "eta_xi" else ("q", "p")
    fig, ax = plt.subplots(figsize=(5, 4))
    im = ax.pcolormesh(x, y, z, shading="auto")
    fig.colorbar(im, ax=ax, label=label)
    ax.set_xlabel(names[0])
    ax.set_ylabel(names[1])
    ax.set_title(path)
    fig.tight_layout()
    fig.savefig(path.rsplit(".", 1)[0] + ".png", dpi=120)
    plt.close(fig)
)";

class Job {
 public:
  Job(const json& config, std::string out_dir)
      : config_(config), out_dir_(std::move(out_dir)), task_(config.at("task").get<std::string>()),
        hbar_(config.value("hbar", 1.0)), seed_(config.value("seed", std::uint64_t{0})) {}

  json run() {
    if (task_ == "char") return task_char();
    if (task_ == "invert") return task_invert();
    if (task_ == "pdcheck") return task_pdcheck();
    if (task_ == "wigner") return task_wigner();
    if (task_ == "climit") return task_climit();
    if (task_ == "mean") return task_mean();
    if (task_ == "evolve") return task_evolve();
    return task_oracle_compare();
  }

  const std::vector<std::string>& files() const { return files_; }
  const std::vector<std::string>& grid_files() const { return grid_files_; }

 private:
  std::string path(const std::string& name) const { return (std::filesystem::path(out_dir_) / name).string(); }

  json meta(const std::string& kind, double hbar) const {
    return {{"tool", "weylchar"}, {"task", task_}, {"kind", kind}, {"hbar", hbar}, {"config", config_}};
  }

  void grid_out(const std::string& name, const PhaseGrid& grid, const Eigen::MatrixXcd& values,
                const std::string& kind, double hbar) {
    io::write_grid(path(name), grid, values, meta(kind, hbar));
    files_.push_back(path(name));
    grid_files_.push_back(path(name));
  }

  void grid_out(const std::string& name, const PhaseGrid& grid, const Eigen::MatrixXd& values,
                const std::string& kind, double hbar) {
    io::write_grid(path(name), grid, values, meta(kind, hbar));
    files_.push_back(path(name));
    grid_files_.push_back(path(name));
  }

  void json_out(const std::string& name, json doc) {
    doc["meta"] = meta(name, hbar_);
    io::write_json(path(name), doc);
    files_.push_back(path(name));
  }

  // chi from the "input" grid file or by forward transform of the state.
  nct::CharFunction char_source() {
    if (config_.contains("input")) {
      const io::GridFile f = io::read_grid(config_.at("input").get<std::string>());
      if (f.grid.axes != Axes::eta_xi) throw DomainError("input: expected an (eta, xi) grid file");
      if (!f.meta.contains("hbar") || !f.meta.at("hbar").is_number()) throw IoError("input: metadata lacks hbar");
      return {f.meta.at("hbar").get<double>(), f.grid, f.values};
    }
    source_ = state_from(config_, hbar_);
    return nct::forward(*source_, grid_from(config_.at("grid"), Axes::eta_xi, &*source_));
  }

  json task_char() {
    const states::DensityMatrix rho = state_from(config_, hbar_);
    const nct::CharFunction chi = nct::forward(rho, grid_from(config_.at("grid"), Axes::eta_xi, &rho));
    const nct::CharInvariants inv = nct::check_invariants(chi);
    grid_out("char.csv", chi.grid, chi.values, "char", chi.hbar);
    const json metric{{"origin_error", inv.origin_error},
                      {"symmetry_error", inv.symmetry_error},
                      {"max_modulus", inv.max_modulus},
                      {"boundary_ratio", nct::boundary_ratio(chi.values)},
                      {"fock_dim", rho.dim()}};
    json_out("char_report.json", {{"invariants", metric}});
    return metric;
  }

  json task_invert() {
    const nct::CharFunction chi = char_source();
    const int dim = config_.value("fock_dim", source_ ? source_->dim() : 0);
    const nct::InverseResult res = nct::inverse(chi, dim);
    json report{{"boundary_ratio", res.report.boundary_ratio},
                {"hermiticity_residual", res.report.hermiticity_residual},
                {"trace_before", res.report.trace_before},
                {"min_eigenvalue", res.report.min_eigenvalue},
                {"clipped_weight", res.report.clipped_weight},
                {"repaired", res.report.repaired},
                {"fock_dim", dim}};
    if (source_ && source_->dim() == dim) {
      report["frobenius_error"] = (res.rho.data() - source_->data()).norm();
    }
    json density = matrix_json(res.rho.data());
    density["hbar"] = chi.hbar;
    json_out("density.json", density);
    json_out("invert_report.json", report);
    return report;
  }

  json task_pdcheck() {
    const nct::CharFunction chi = char_source();
    const json p = config_.value("pdcheck", json::object());
    const pd::Mode mode = pd::parse_mode(p.value("mode", "heisenberg"));
    pd::SamplerSpec sampler;
    sampler.kind = pd::parse_sampler(p.value("sampler", "random"));
    sampler.count = p.value("count", 64);
    sampler.radius = p.value("radius", 0.0);
    sampler.spacing = p.value("spacing", 0.0);
    const double tol = p.value("tol", pd::kDefaultPdTolerance);
    const int seeds = p.value("seeds", 1);
    const pd::PdFunction phi = pd::PdFunction::from_char(chi);
    json runs = json::array();
    bool positive = true;
    double worst = INFINITY;
    for (int k = 0; k < seeds; ++k) {
      sampler.seed = seed_ + static_cast<std::uint64_t>(k);
      const pd::PdReport r = pd::pd_check(phi, mode, sampler, tol);
      positive = positive && r.positive;
      worst = std::min(worst, r.min_eigenvalue / std::abs(r.gram_scale));
      runs.push_back({{"sampler_seed", r.sampler_seed},
                      {"sample_count", r.sample_count},
                      {"min_eigenvalue", r.min_eigenvalue},
                      {"gram_scale", r.gram_scale},
                      {"hermiticity_residual", r.hermiticity_residual},
                      {"verdict", r.verdict()}});
    }
    const json summary{{"mode", pd::mode_name(mode)},
                       {"sampler", sampler.kind == pd::SamplerSpec::Kind::random ? "random" : "lattice"},
                       {"tolerance", tol},
                       {"verdict", positive ? "positive" : "indefinite"},
                       {"worst_relative_eigenvalue", worst}};
    json_out("pdcheck_report.json", {{"summary", summary}, {"runs", runs}});
    return summary;
  }

  json task_wigner() {
    const nct::CharFunction chi = char_source();
    const nct::WignerFunction w = config_.contains("output_grid")
                                      ? nct::wigner(chi, grid_from(config_.at("output_grid"), Axes::q_p))
                                      : nct::wigner_fft(chi);
    grid_out("wigner.csv", w.grid, w.values, "wigner", chi.hbar);
    json metric{{"mass", w.mass},
                {"imag_residue", w.imag_residue},
                {"min", w.values.minCoeff()},
                {"max", w.values.maxCoeff()}};
    const int o = w.grid.origin();
    metric["value_at_origin"] = w.values(o, o);
    json_out("wigner_report.json", metric);
    return metric;
  }

  json task_climit() {
    const cl::StateFamily family = family_from(config_);
    const std::vector<double> schedule = schedule_from(config_);
    const PhaseGrid grid = grid_from(config_.at("grid"), Axes::eta_xi);
    const cl::LimitResult res = cl::limit_extrapolate(family, schedule, grid);
    grid_out("climit_last.csv", grid, res.last.values, "classical_char", schedule.back());
    grid_out("climit_extrapolated.csv", grid, res.extrapolated.values, "classical_char_extrapolated", 0.0);
    json report{{"family", family.name},
                {"hbars", res.hbars},
                {"differences", res.differences},
                {"ratios", res.ratios},
                {"converged", res.converged},
                {"classification", res.classification},
                {"extrapolation_points", res.extrapolation_points},
                {"extrapolation_change", res.extrapolation_change}};
    const json cl_cfg = config_.value("climit", json::object());
    if (cl_cfg.contains("invert")) {
      const json& inv = cl_cfg.at("invert");
      if (res.classification == "atomic at origin") {
        report["inversion"] = {{"atomic", true}, {"support", {0.0, 0.0}},
                               {"note", "limit is constant 1: point mass at the origin, not inverted numerically"}};
      } else {
        const PhaseGrid in_grid = inv.contains("grid") ? grid_from(inv.at("grid"), Axes::eta_xi) : grid;
        const PhaseGrid out_grid = grid_from(inv.at("output_grid"), Axes::q_p);
        const cl::ClassicalChar cc = inv.value("source", "last") == "last"
                                         ? cl::rescaled_char(family, schedule.back(), in_grid)
                                         : cl::limit_extrapolate(family, schedule, in_grid).extrapolated;
        cl::BochnerOptions opts;
        opts.singular = inv.value("singular", false);
        const cl::ClassicalDensity dens = cl::bochner_invert(cc, out_grid, opts);
        grid_out("climit_density.csv", dens.grid, dens.values, "classical_density", 0.0);
        double left = 0.0, right = 0.0;
        const double d2 = dens.grid.spacing() * dens.grid.spacing();
        for (int i = 0; i < dens.grid.points; ++i) {
          const double row = dens.values.row(i).sum() * d2;
          if (dens.grid.coord(i) < 0.0) left += row;
          else if (dens.grid.coord(i) > 0.0) right += row;
          else { left += 0.5 * row; right += 0.5 * row; }
        }
        report["inversion"] = {{"atomic", false},
                               {"mass", dens.mass},
                               {"mass_q_negative", left},
                               {"mass_q_positive", right},
                               {"repaired", dens.repaired},
                               {"min_before", dens.min_before},
                               {"imag_residue", dens.imag_residue},
                               {"singular", opts.singular}};
      }
    }
    json_out("climit_report.json", report);
    return {{"converged", res.converged},
            {"classification", res.classification},
            {"last_difference", res.differences.back()}};
  }

  json task_mean() {
    const states::DensityMatrix rho = state_from(config_, hbar_);
    const PhaseGrid grid = grid_from(config_.at("grid"), Axes::eta_xi, &rho);
    const json& o = config_.at("observable");
    const std::string name = o.at("operator").get<std::string>();
    const Eigen::MatrixXcd a = name == "matrix" ? matrix_from(o, rho.dim()) : named_operator(name, hbar_, rho.dim());
    const obs::ObservableFunction f = obs::from_operator(a, hbar_, grid);
    const nct::CharFunction chi = nct::forward(rho, grid);
    const obs::MeanValue m = obs::mean(f, chi);
    const double oracle = states::expectation(rho, a);
    const json metric{{"operator", name},
                      {"mean", m.value},
                      {"imag_residue", m.imag_residue},
                      {"trace_oracle", oracle},
                      {"difference", std::abs(m.value - oracle)},
                      {"reality_error", obs::reality_error(f.grid, f.values)}};
    json_out("mean_report.json", metric);
    return metric;
  }

  json task_evolve() {
    const states::DensityMatrix rho = state_from(config_, hbar_);
    const json& e = config_.at("evolve");
    const dyn::HamiltonianSpec h = hamiltonian_from(e.at("hamiltonian"));
    const nct::CharFunction chi0 = nct::forward(rho, grid_from(config_.at("grid"), Axes::eta_xi, &rho));
    dyn::EvolveOptions options;
    options.frames = e.value("frames", 2);
    if (e.value("oracle", false)) options.oracle_state = rho;
    const dyn::Evolution ev =
        dyn::evolve_char(chi0, h, e.at("t_final").get<double>(), e.at("steps").get<int>(), options);
    json frames = json::array();
    for (std::size_t k = 0; k < ev.frames.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "frame_%03zu.csv", k);
      grid_out(name, ev.frames[k].grid, ev.frames[k].values, "char_frame", chi0.hbar);
      frames.push_back({{"t", ev.frame_times[k]}, {"file", name}});
    }
    grid_out("evolve_final.csv", ev.chi.grid, ev.chi.values, "char", chi0.hbar);
    const dyn::EvolutionReport& r = ev.report;
    json manifest{{"method", r.method},
                  {"times", r.times},
                  {"drift", r.drift},
                  {"max_drift", r.max_drift},
                  {"oracle_deviation", r.oracle_deviation},
                  {"max_oracle_deviation", r.max_oracle_deviation},
                  {"error_estimate", r.error_estimate},
                  {"cfl_number", r.cfl_number},
                  {"max_shear", r.max_shear},
                  {"substeps", r.substeps},
                  {"max_boundary_ratio", r.max_boundary_ratio},
                  {"frames", frames}};
    json_out("manifest.json", manifest);
    json metric{{"method", r.method}, {"max_drift", r.max_drift}};
    if (options.oracle_state) metric["max_oracle_deviation"] = r.max_oracle_deviation;
    return metric;
  }

  json task_oracle_compare() {
    const states::DensityMatrix rho = state_from(config_, hbar_);
    const json& e = config_.at("evolve");
    const dyn::HamiltonianSpec h = hamiltonian_from(e.at("hamiltonian"));
    const dyn::OracleComparison c =
        dyn::oracle_evolve_compare(rho, h, e.at("t_final").get<double>(), e.at("steps").get<int>(),
                                   grid_from(config_.at("grid"), Axes::eta_xi, &rho));
    const json metric{{"max_deviation", c.max_deviation},
                      {"method", c.report.method},
                      {"max_drift", c.report.max_drift},
                      {"error_estimate", c.report.error_estimate},
                      {"substeps", c.report.substeps}};
    json_out("oracle_report.json", metric);
    return metric;
  }

  json config_;
  std::string out_dir_;
  std::string task_;
  double hbar_;
  std::uint64_t seed_;
  std::optional<states::DensityMatrix> source_;
  std::vector<std::string> files_;
  std::vector<std::string> grid_files_;
};

json error_doc(const std::string& kind, int code, const std::string& message) {
  return {{"status", "error"}, {"kind", kind}, {"exit_code", code}, {"message", message}};
}

}  // namespace

RunResult run(const json& config, const std::string& out_dir, bool emit_plotscript) {
  RunResult result;
  const std::vector<std::string> violations = validate(config);
  if (!violations.empty()) {
    result.exit_code = kValidation;
    result.summary = error_doc("validation", kValidation, "invalid configuration");
    result.summary["violations"] = violations;
    return result;
  }
  try {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());
    Job job(config, out_dir);
    const json metric = job.run();
    result.files = job.files();
    if (emit_plotscript) {
      json names = json::array();
      for (const auto& f : job.grid_files()) names.push_back(std::filesystem::path(f).filename().string());
      std::string script = kPlotScript;
      script.replace(script.find("%FILES%"), 7, names.dump());
      const std::string p = (std::filesystem::path(out_dir) / "plot.py").string();
      std::ofstream out(p, std::ios::binary);
      if (!out) throw IoError("cannot open '" + p + "' for writing");
      out << script;
      result.files.push_back(p);
    }
    result.summary = {{"status", "ok"}, {"task", config.at("task")}, {"metric", metric}, {"files", result.files}};
  } catch (const IoError& e) {
    result.exit_code = kIo;
    result.summary = error_doc("io", kIo, e.what());
  } catch (const ToleranceError& e) {
    result.exit_code = kNumerical;
    result.summary = error_doc("numerical", kNumerical, e.what());
  } catch (const DomainError& e) {
    result.exit_code = kValidation;
    result.summary = error_doc("validation", kValidation, e.what());
  } catch (const DimensionError& e) {
    result.exit_code = kValidation;
    result.summary = error_doc("validation", kValidation, e.what());
  } catch (const json::exception& e) {
    result.exit_code = kValidation;
    result.summary = error_doc("validation", kValidation, e.what());
  } catch (const std::exception& e) {
    result.exit_code = kNumerical;
    result.summary = error_doc("numerical", kNumerical, e.what());
  }
  return result;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"weylchar: characteristic functions on the Heisenberg-Weyl group"};
  std::string task, config_path, out_dir = ".";
  std::uint64_t seed = 0;
  bool plotscript = false;
  app.add_option("task", task, "Task to run")->required()->check(CLI::IsMember(task_names()));
  app.add_option("--config", config_path, "JSON job file")->required();
  app.add_option("--out", out_dir, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for random states and samplers (overrides the config)");
  app.add_flag("--emit-plotscript", plotscript, "Also write plot.py for the CSV grids");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << error_doc("validation", kValidation, e.what()).dump() << std::endl;
    return kValidation;
  }

  json config;
  {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::cout << error_doc("io", kIo, "cannot open config '" + config_path + "'").dump() << std::endl;
      return kIo;
    }
    try {
      config = json::parse(in);
    } catch (const json::parse_error& e) {
      std::cout << error_doc("validation", kValidation, std::string("config is not valid JSON: ") + e.what()).dump()
                << std::endl;
      return kValidation;
    }
  }
  if (config.is_object()) {
    if (config.contains("task") && config.at("task") != task) {
      json doc = error_doc("validation", kValidation, "invalid configuration");
      doc["violations"] = {"task: config names '" + config.at("task").dump() + "' but the command line asks for '" +
                           task + "'"};
      std::cout << doc.dump() << std::endl;
      return kValidation;
    }
    config["task"] = task;
    if (*seed_opt) config["seed"] = seed;
    else if (!config.contains("seed")) config["seed"] = 0;
  }
  const RunResult r = run(config, out_dir, plotscript);
  std::cout << r.summary.dump() << std::endl;
  return r.exit_code;
}

}  // namespace weylchar::cli
