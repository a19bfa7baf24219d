#include <algorithm>
#include <cmath>

#include "weylchar/cli.hpp"
#include "weylchar/error.hpp"

namespace weylchar::cli {

using nlohmann::json;

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names{"char",  "invert", "pdcheck", "wigner",
                                              "climit", "mean",  "evolve",  "oracle-compare"};
  return names;
}

namespace {

const std::vector<std::string> kStateTypes{"fock", "coherent", "p_mixture", "random", "fock_energy", "oscillating"};
const std::vector<std::string> kOperators{"identity", "number", "q", "p", "q2", "p2", "qp_sym", "matrix"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

class Checker {
 public:
  std::vector<std::string> out;

  void fail(const std::string& path, const std::string& what) { out.push_back(path + ": " + what); }

  // Returns true when the field exists and is numeric; records a violation otherwise.
  bool number(const json& obj, const std::string& key, const std::string& path, bool required) {
    if (!obj.is_object() || !obj.contains(key)) {
      if (required) fail(path, "missing");
      return false;
    }
    if (!obj.at(key).is_number()) {
      fail(path, "must be a number");
      return false;
    }
    if (!std::isfinite(obj.at(key).get<double>())) {
      fail(path, "must be finite");
      return false;
    }
    return true;
  }

  void positive(const json& obj, const std::string& key, const std::string& path, bool required) {
    if (number(obj, key, path, required) && !(obj.at(key).get<double>() > 0.0)) fail(path, "must be positive");
  }

  void nonnegative(const json& obj, const std::string& key, const std::string& path, bool required) {
    if (number(obj, key, path, required) && obj.at(key).get<double>() < 0.0) fail(path, "must be nonnegative");
  }

  bool integer(const json& obj, const std::string& key, const std::string& path, bool required, long lo) {
    if (!obj.is_object() || !obj.contains(key)) {
      if (required) fail(path, "missing");
      return false;
    }
    if (!obj.at(key).is_number_integer()) {
      fail(path, "must be an integer");
      return false;
    }
    if (obj.at(key).get<long>() < lo) {
      fail(path, "must be at least " + std::to_string(lo));
      return false;
    }
    return true;
  }

  bool object(const json& obj, const std::string& key, const std::string& path, bool required) {
    if (!obj.contains(key)) {
      if (required) fail(path, "missing");
      return false;
    }
    if (!obj.at(key).is_object()) {
      fail(path, "must be an object");
      return false;
    }
    return true;
  }

  void grid(const json& obj, const std::string& key, const std::string& path, bool required) {
    if (!object(obj, key, path, required)) return;
    const json& g = obj.at(key);
    // Only the top-level state grid can be sized from the state.
    if (path == "grid" && g.contains("extent") && g.at("extent").is_string()) {
      if (g.at("extent") != "auto") fail(path + ".extent", "must be a positive number or \"auto\"");
    } else {
      positive(g, "extent", path + ".extent", true);
    }
    if (integer(g, "points", path + ".points", false, 8) && g.at("points").get<long>() % 2 != 0) {
      fail(path + ".points", "must be even");
    }
  }

  void string_choice(const json& obj, const std::string& key, const std::string& path,
                     const std::vector<std::string>& choices, bool required) {
    if (!obj.contains(key)) {
      if (required) fail(path, "missing");
      return;
    }
    if (!obj.at(key).is_string() || !contains(choices, obj.at(key).get<std::string>())) {
      std::string list;
      for (const auto& c : choices) list += (list.empty() ? "" : ", ") + c;
      fail(path, "must be one of " + list);
    }
  }

  void state(const json& s, const std::string& task) {
    string_choice(s, "type", "state.type", kStateTypes, true);
    if (!s.contains("type") || !s.at("type").is_string()) return;
    const std::string type = s.at("type").get<std::string>();
    if ((type == "fock_energy" || type == "oscillating") && task != "climit" && task != "char") {
      fail("state.type", "'" + type + "' is only available for the char and climit tasks");
    }
    if (type == "fock") integer(s, "m", "state.m", true, 0);
    if (type == "coherent") {
      number(s, "q", "state.q", true);
      number(s, "p", "state.p", true);
    }
    if (type == "random") integer(s, "support", "state.support", false, 1);
    if (type == "fock_energy") positive(s, "energy", "state.energy", true);
    if (type == "p_mixture") mixture(s);
  }

  void mixture(const json& s) {
    const bool atoms = s.contains("atoms");
    const bool preset = s.contains("preset");
    if (atoms == preset) {
      fail("state", "p_mixture needs exactly one of 'atoms' or 'preset'");
      return;
    }
    if (atoms) {
      if (!s.at("atoms").is_array() || s.at("atoms").empty()) {
        fail("state.atoms", "must be a nonempty array");
        return;
      }
      double total = 0.0;
      for (std::size_t k = 0; k < s.at("atoms").size(); ++k) {
        const json& a = s.at("atoms")[k];
        const std::string p = "state.atoms[" + std::to_string(k) + "]";
        number(a, "q", p + ".q", true);
        number(a, "p", p + ".p", true);
        if (number(a, "weight", p + ".weight", true)) {
          if (a.at("weight").get<double>() < 0.0) fail(p + ".weight", "must be nonnegative");
          total += a.at("weight").get<double>();
        }
      }
      if (std::abs(total - 1.0) > 1e-12) fail("state.atoms", "weights must sum to 1");
      return;
    }
    string_choice(s, "preset", "state.preset", {"gaussian", "ring"}, true);
    if (!s.at("preset").is_string()) return;
    if (s.at("preset") == "gaussian") {
      number(s, "q0", "state.q0", false);
      number(s, "p0", "state.p0", false);
      positive(s, "sigma", "state.sigma", true);
      integer(s, "resolution", "state.resolution", false, 1);
    } else if (s.at("preset") == "ring") {
      positive(s, "radius", "state.radius", true);
      integer(s, "count", "state.count", true, 1);
    }
  }

  void hamiltonian(const json& h, const std::string& path) {
    const bool coeffs = h.contains("kinetic") || h.contains("potential");
    const bool named = h.contains("mass");
    if (coeffs == named) {
      fail(path, "give either 'kinetic'/'potential' coefficient lists or 'mass' (with optional 'omega', 'lambda')");
      return;
    }
    if (coeffs) {
      for (const char* key : {"kinetic", "potential"}) {
        if (!h.contains(key)) continue;
        const json& c = h.at(key);
        if (!c.is_array() || c.size() > 5) {
          fail(path + "." + key, "must be an array of at most 5 coefficients (degree <= 4)");
          continue;
        }
        for (const auto& x : c) {
          if (!x.is_number()) fail(path + "." + key, "coefficients must be numbers");
        }
      }
      return;
    }
    positive(h, "mass", path + ".mass", true);
    number(h, "omega", path + ".omega", false);
    number(h, "lambda", path + ".lambda", false);
  }
};

}  // namespace

std::vector<std::string> validate(const json& config) {
  Checker c;
  if (!config.is_object()) {
    c.fail("config", "must be a JSON object");
    return c.out;
  }
  std::string task;
  if (!config.contains("task") || !config.at("task").is_string()) {
    c.fail("task", "missing");
  } else {
    task = config.at("task").get<std::string>();
    if (!contains(task_names(), task)) c.fail("task", "unknown task '" + task + "'");
  }
  c.positive(config, "hbar", "hbar", false);
  c.integer(config, "seed", "seed", false, 0);
  c.integer(config, "fock_dim", "fock_dim", false, 1);

  const bool has_input = config.contains("input");
  if (has_input && !config.at("input").is_string()) c.fail("input", "must be a path string");
  if (has_input && task != "invert" && task != "pdcheck" && task != "wigner") {
    c.fail("input", "only the invert, pdcheck and wigner tasks read a grid file");
  }
  if (!has_input || task == "climit") {
    if (c.object(config, "state", "state", true)) c.state(config.at("state"), task);
    c.grid(config, "grid", "grid", true);
    if (task == "climit" && config.contains("grid") && config.at("grid").is_object() &&
        config.at("grid").contains("extent") && config.at("grid").at("extent").is_string()) {
      c.fail("grid.extent", "the climit grid is fixed across hbar and needs a number");
    }
  }
  if (task == "invert" && has_input) c.integer(config, "fock_dim", "fock_dim", true, 1);
  c.grid(config, "output_grid", "output_grid", false);

  if (task == "pdcheck" && c.object(config, "pdcheck", "pdcheck", false)) {
    const json& p = config.at("pdcheck");
    c.string_choice(p, "mode", "pdcheck.mode", {"heisenberg", "abelian"}, false);
    c.string_choice(p, "sampler", "pdcheck.sampler", {"random", "lattice"}, false);
    c.integer(p, "count", "pdcheck.count", false, 1);
    c.integer(p, "seeds", "pdcheck.seeds", false, 1);
    c.nonnegative(p, "tol", "pdcheck.tol", false);
    c.positive(p, "spacing", "pdcheck.spacing", false);
    c.positive(p, "radius", "pdcheck.radius", false);
  }

  if (task == "climit") {
    if (config.contains("climit") && !config.at("climit").is_object()) c.fail("climit", "must be an object");
    const json cl = config.value("climit", json::object());
    if (cl.is_object() && cl.contains("schedule")) {
      const json& s = cl.at("schedule");
      if (s.is_array()) {
        if (s.size() < 3) c.fail("climit.schedule", "needs at least 3 values");
        double prev = INFINITY;
        for (const auto& x : s) {
          if (!x.is_number() || !(x.get<double>() > 0.0) || !(x.get<double>() < prev)) {
            c.fail("climit.schedule", "must be strictly decreasing positive numbers");
            break;
          }
          prev = x.get<double>();
        }
      } else if (s.is_object()) {
        c.positive(s, "start", "climit.schedule.start", false);
        if (c.number(s, "ratio", "climit.schedule.ratio", false)) {
          const double r = s.at("ratio").get<double>();
          if (!(r > 0.0 && r < 1.0)) c.fail("climit.schedule.ratio", "must lie in (0, 1)");
        }
        c.integer(s, "count", "climit.schedule.count", false, 3);
      } else {
        c.fail("climit.schedule", "must be an array or an object");
      }
    }
    if (cl.is_object() && cl.contains("invert")) {
      if (!cl.at("invert").is_object()) {
        c.fail("climit.invert", "must be an object");
      } else {
        const json& inv = cl.at("invert");
        c.grid(inv, "grid", "climit.invert.grid", false);
        c.grid(inv, "output_grid", "climit.invert.output_grid", true);
        c.string_choice(inv, "source", "climit.invert.source", {"last", "extrapolated"}, false);
        if (inv.contains("singular") && !inv.at("singular").is_boolean()) {
          c.fail("climit.invert.singular", "must be a boolean");
        }
      }
    }
  }

  if (task == "mean" && c.object(config, "observable", "observable", true)) {
    const json& o = config.at("observable");
    c.string_choice(o, "operator", "observable.operator", kOperators, true);
    if (o.value("operator", "") == "matrix") {
      if (!o.contains("real") || !o.at("real").is_array()) c.fail("observable.real", "missing");
    }
  }

  if ((task == "evolve" || task == "oracle-compare") && c.object(config, "evolve", "evolve", true)) {
    const json& e = config.at("evolve");
    if (c.object(e, "hamiltonian", "evolve.hamiltonian", true)) c.hamiltonian(e.at("hamiltonian"), "evolve.hamiltonian");
    c.number(e, "t_final", "evolve.t_final", true);
    c.integer(e, "steps", "evolve.steps", true, 1);
    c.integer(e, "frames", "evolve.frames", false, 0);
    if (e.contains("oracle") && !e.at("oracle").is_boolean()) c.fail("evolve.oracle", "must be a boolean");
  }
  return c.out;
}

PhaseGrid grid_from(const json& grid, Axes axes, const states::DensityMatrix* rho) {
  const int points = grid.value("points", 128);
  if (grid.at("extent").is_string()) {
    if (rho == nullptr || axes != Axes::eta_xi) throw DomainError("extent \"auto\" needs a state and an (eta, xi) grid");
    return nct::fit_grid(*rho, points);
  }
  return PhaseGrid::make(grid.at("extent").get<double>(), points, axes);
}

states::PMixtureSpec mixture_from(const json& s) {
  if (s.contains("atoms")) {
    states::PMixtureSpec spec;
    for (const auto& a : s.at("atoms")) {
      spec.atoms.push_back({a.at("q").get<double>(), a.at("p").get<double>(), a.at("weight").get<double>()});
    }
    return spec;
  }
  if (s.at("preset") == "gaussian") {
    return states::gaussian_preset(s.value("q0", 0.0), s.value("p0", 0.0), s.at("sigma").get<double>(),
                                   s.value("resolution", 4));
  }
  return states::ring_preset(s.at("radius").get<double>(), s.at("count").get<int>());
}

states::DensityMatrix state_from(const json& config, double hbar) {
  const json& s = config.at("state");
  const std::string type = s.at("type").get<std::string>();
  const int requested = config.value("fock_dim", 0);
  auto dim_for = [&](int needed) {
    if (requested > 0 && requested < needed) {
      throw TruncationError("fock_dim " + std::to_string(requested) + " is below the " + std::to_string(needed) +
                            " levels this state needs");
    }
    return requested > 0 ? requested : std::max(needed, 32);
  };
  if (type == "fock") {
    const int m = s.at("m").get<int>();
    return states::fock_state(m, dim_for(m + 1), hbar);
  }
  if (type == "fock_energy") {
    const int m = static_cast<int>(std::lround(s.at("energy").get<double>() / hbar));
    return states::fock_state(m, dim_for(m + 1), hbar);
  }
  if (type == "coherent" || type == "oscillating") {
    const double q = type == "coherent" ? s.at("q").get<double>() : std::cos(1.0 / hbar);
    const double p = type == "coherent" ? s.at("p").get<double>() : 0.0;
    return states::coherent_state(q, p, dim_for(states::minimal_fock_dim(q, p, hbar)), hbar);
  }
  if (type == "random") {
    const int support = s.value("support", 5);
    return states::random_density(support, dim_for(support), hbar, config.value("seed", std::uint64_t{0}));
  }
  const states::PMixtureSpec spec = mixture_from(s);
  return states::p_mixture(spec, dim_for(states::minimal_fock_dim(spec, hbar)), hbar);
}

dyn::HamiltonianSpec hamiltonian_from(const json& h) {
  if (h.contains("mass")) {
    return dyn::HamiltonianSpec::anharmonic(h.at("mass").get<double>(), h.value("omega", 0.0), h.value("lambda", 0.0));
  }
  dyn::HamiltonianSpec spec;
  const json kinetic = h.value("kinetic", json::array());
  const json potential = h.value("potential", json::array());
  for (std::size_t k = 0; k < kinetic.size(); ++k) spec.kinetic[k] = kinetic[k].get<double>();
  for (std::size_t k = 0; k < potential.size(); ++k) spec.potential[k] = potential[k].get<double>();
  return spec;
}

}  // namespace weylchar::cli
