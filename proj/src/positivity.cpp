#include "weylchar/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "weylchar/error.hpp"

namespace weylchar::pd {

const char* mode_name(Mode mode) { return mode == Mode::heisenberg ? "heisenberg" : "abelian"; }

Mode parse_mode(const std::string& text) {
  if (text == "heisenberg") return Mode::heisenberg;
  if (text == "abelian") return Mode::abelian;
  throw DomainError("unknown positivity mode '" + text + "' (expected heisenberg or abelian)");
}

SamplerSpec::Kind parse_sampler(const std::string& text) {
  if (text == "random") return SamplerSpec::Kind::random;
  if (text == "lattice") return SamplerSpec::Kind::lattice;
  throw DomainError("unknown sampler '" + text + "' (expected random or lattice)");
}

PdFunction::PdFunction(double hbar, const PhaseGrid& grid, const Eigen::MatrixXcd& values)
    : hbar_(hbar), interp_(grid, values) {
  if (!(hbar > 0.0)) throw DomainError("PdFunction: hbar must be positive");
  if (grid.axes != Axes::eta_xi) throw DomainError("PdFunction: expected an (eta, xi) grid");
}

PdFunction PdFunction::from_char(const nct::CharFunction& chi) {
  return PdFunction(chi.hbar, chi.grid, chi.values);
}

cplx PdFunction::operator()(const hw::GroupElement& g) const {
  if (g.n() != 1) throw DimensionError("PdFunction: single-mode elements only");
  return std::polar(1.0, -hbar_ * g.s) * interp_(hbar_ * g.eta[0], hbar_ * g.xi[0]);
}

cplx PdFunction::abelian(const hw::GroupElement& g) const {
  if (g.n() != 1) throw DimensionError("PdFunction: single-mode elements only");
  return interp_(hbar_ * g.eta[0], hbar_ * g.xi[0]);
}

hw::GroupElement abelian_compose(const hw::GroupElement& a, const hw::GroupElement& b) {
  if (a.n() != b.n()) throw DimensionError("abelian_compose: dimension mismatch");
  hw::GroupElement out = hw::GroupElement::identity(a.n());
  for (int j = 0; j < a.n(); ++j) {
    out.eta[j] = a.eta[j] + b.eta[j];
    out.xi[j] = a.xi[j] + b.xi[j];
  }
  return out;
}

namespace {

template <class Compose>
Eigen::MatrixXcd build_gram(const GroupFunction& phi, const std::vector<hw::GroupElement>& elements,
                            Compose compose) {
  const int k = static_cast<int>(elements.size());
  if (k < 1) throw DomainError("gram_matrix: at least one element required");
  std::vector<hw::GroupElement> inverses;
  inverses.reserve(k);
  for (const auto& g : elements) inverses.push_back(hw::inverse(g));
  Eigen::MatrixXcd m(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) m(a, b) = phi(compose(inverses[a], elements[b]));
  return m;
}

}  // namespace

Eigen::MatrixXcd gram_matrix(const GroupFunction& phi, const std::vector<hw::GroupElement>& elements) {
  return build_gram(phi, elements, [](const hw::GroupElement& a, const hw::GroupElement& b) {
    return hw::multiply(a, b);
  });
}

Eigen::MatrixXcd abelian_gram_matrix(const GroupFunction& phi, const std::vector<hw::GroupElement>& elements) {
  return build_gram(phi, elements, [](const hw::GroupElement& a, const hw::GroupElement& b) {
    return abelian_compose(a, b);
  });
}

std::vector<hw::GroupElement> sample_elements(const SamplerSpec& spec, const PdFunction& phi) {
  if (spec.count < 1) throw DomainError("sampler: count must be positive");
  const PhaseGrid& grid = phi.grid();
  const double h = grid.spacing();
  const double hbar = phi.hbar();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi / hbar);

  auto snap = [&](double u) { return spec.snap ? h * std::round(u / h) : u; };
  std::vector<hw::GroupElement> out;
  out.reserve(spec.count);

  if (spec.kind == SamplerSpec::Kind::random) {
    const double radius = spec.radius > 0.0 ? spec.radius : 0.5 * grid.extent - h;
    if (!(radius > 0.0)) throw DomainError("sampler: radius must be positive");
    std::uniform_real_distribution<double> coord(-radius, radius);
    for (int k = 0; k < spec.count; ++k) {
      const double u = snap(coord(rng));
      const double v = snap(coord(rng));
      out.push_back(hw::GroupElement::single(phase(rng), u / hbar, v / hbar));
    }
    return out;
  }

  const int side = static_cast<int>(std::floor(std::sqrt(static_cast<double>(spec.count))));
  if (side < 1) throw DomainError("sampler: lattice needs at least one point");
  double step = spec.spacing > 0.0 ? spec.spacing : std::sqrt(hbar);
  if (spec.snap) step = h * std::max(1.0, std::round(step / h));
  for (int a = 0; a < side; ++a) {
    for (int b = 0; b < side; ++b) {
      const double u = snap((a - 0.5 * (side - 1)) * step);
      const double v = snap((b - 0.5 * (side - 1)) * step);
      out.push_back(hw::GroupElement::single(phase(rng), u / hbar, v / hbar));
    }
  }
  return out;
}

PdReport assess_gram(const Eigen::MatrixXcd& gram, double tol) {
  PdReport r;
  r.sample_count = static_cast<int>(gram.rows());
  r.tolerance = tol;
  r.hermiticity_residual = (gram - gram.adjoint()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd herm = 0.5 * (gram + gram.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = eig.eigenvalues().minCoeff();
  r.gram_scale = eig.eigenvalues().maxCoeff();
  r.positive = r.min_eigenvalue >= -tol * std::abs(r.gram_scale);
  return r;
}

PdReport pd_check(const GroupFunction& phi, Mode mode, const std::vector<hw::GroupElement>& elements,
                  double tol) {
  if (!(tol >= 0.0)) throw DomainError("pd_check: tolerance must be nonnegative");
  const Eigen::MatrixXcd gram =
      mode == Mode::heisenberg ? gram_matrix(phi, elements) : abelian_gram_matrix(phi, elements);
  PdReport r = assess_gram(gram, tol);
  r.mode = mode;
  return r;
}

PdReport pd_check(const PdFunction& phi, Mode mode, const SamplerSpec& sampler, double tol) {
  const auto elements = sample_elements(sampler, phi);
  GroupFunction f;
  if (mode == Mode::heisenberg) {
    f = [&phi](const hw::GroupElement& g) { return phi(g); };
  } else {
    f = [&phi](const hw::GroupElement& g) { return phi.abelian(g); };
  }
  PdReport r = pd_check(f, mode, elements, tol);
  r.sampler_seed = sampler.seed;
  return r;
}

}  // namespace weylchar::pd
