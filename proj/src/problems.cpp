#include "spectl/problems.hpp"

#include <cmath>
#include <numbers>

#include "spectl/matrix_market.hpp"
#include "spectl/random.hpp"

namespace spectl {

namespace {

double indicator(double t, double lo, double hi) { return (t >= lo && t <= hi) ? 1.0 : 0.0; }

double coefficient(const ProblemSpec& spec, double x, double y) {
  return spec.alpha0 + spec.alpha1 * indicator(x, spec.interval_lo, spec.interval_hi) *
                           indicator(y, spec.interval_lo, spec.interval_hi);
}

double cos_squared(double t) {
  const double c = std::cos(std::numbers::pi * t);
  return c * c;
}

void require_kind(const ProblemSpec& spec, ProblemKind kind) {
  if (spec.kind != kind) {
    throw Error(ErrorKind::InvalidArgument, std::string("problem kind is not ") +
                                                std::string(to_string(kind)));
  }
}

void require_grid(const GridSpec& g, Index min) {
  if (g.nx < min || g.ny < min) {
    throw Error(ErrorKind::InvalidArgument, "grid needs nx, ny >= " + std::to_string(min));
  }
}

// One-dimensional summation-by-parts first derivative on n points, spacing h.
RMatrix sbp_derivative(Index n, double h) {
  RMatrix d = RMatrix::Zero(n, n);
  d(0, 0) = -1.0 / h;
  d(0, 1) = 1.0 / h;
  for (Index i = 1; i + 1 < n; ++i) {
    d(i, i - 1) = -0.5 / h;
    d(i, i + 1) = 0.5 / h;
  }
  d(n - 1, n - 2) = -1.0 / h;
  d(n - 1, n - 1) = 1.0 / h;
  return d;
}

BlockPartition patches(Index nx, Index ny) {
  BlockPartition part;
  for (Index bj = 0; bj < ny; bj += 2) {
    for (Index bi = 0; bi < nx; bi += 2) {
      std::vector<Index> block;
      for (Index j = bj; j < std::min(ny, bj + 2); ++j)
        for (Index i = bi; i < std::min(nx, bi + 2); ++i) block.push_back(j * nx + i);
      part.blocks.push_back(std::move(block));
    }
  }
  return part;
}

}  // namespace

GridSpec GridSpec::advection(int r) {
  if (r < 0) throw Error(ErrorKind::InvalidArgument, "refinement must be >= 0");
  const Index n = Index{2} << r;
  return GridSpec{n, n, r};
}

GridSpec GridSpec::wave(int r) {
  if (r < 0) throw Error(ErrorKind::InvalidArgument, "refinement must be >= 0");
  const Index n = Index{3} << r;
  return GridSpec{n, n, r};
}

GridSpec GridSpec::rectangle(Index nx, Index ny) { return GridSpec{nx, ny, 0}; }

std::string_view to_string(ProblemKind kind) noexcept {
  switch (kind) {
    case ProblemKind::AdvectionReaction: return "advection";
    case ProblemKind::MixedWave: return "wave";
    case ProblemKind::Laplacian: return "laplacian";
    case ProblemKind::External: return "external";
    case ProblemKind::RandomPencil: return "random";
  }
  return "unknown";
}

ProblemKind parse_problem_kind(std::string_view name) {
  for (auto kind : {ProblemKind::AdvectionReaction, ProblemKind::MixedWave,
                    ProblemKind::Laplacian, ProblemKind::External, ProblemKind::RandomPencil}) {
    if (name == to_string(kind)) return kind;
  }
  throw Error(ErrorKind::ConfigError, "unknown problem '" + std::string(name) + "'");
}

ProblemSpec ProblemSpec::advection(int r) {
  ProblemSpec s;
  s.kind = ProblemKind::AdvectionReaction;
  s.grid = GridSpec::advection(r);
  return s;
}

ProblemSpec ProblemSpec::wave(int r, double dt) {
  ProblemSpec s;
  s.kind = ProblemKind::MixedWave;
  s.grid = GridSpec::wave(r);
  s.interval_lo = 0.2;
  s.interval_hi = 0.8;
  s.dt = dt;
  return s;
}

ProblemSpec ProblemSpec::laplacian(Index nx, Index ny) {
  ProblemSpec s;
  s.kind = ProblemKind::Laplacian;
  s.grid = GridSpec::rectangle(nx, ny);
  return s;
}

ProblemSpec ProblemSpec::random(Index n, std::uint64_t seed) {
  ProblemSpec s;
  s.kind = ProblemKind::RandomPencil;
  s.size = n;
  s.seed = seed;
  return s;
}

ProblemSpec ProblemSpec::external(std::string a_path, std::string m_path) {
  ProblemSpec s;
  s.kind = ProblemKind::External;
  s.matrix_path = std::move(a_path);
  s.preconditioner_path = std::move(m_path);
  return s;
}

AdvectionSystem advection_reaction_system(const ProblemSpec& spec) {
  require_kind(spec, ProblemKind::AdvectionReaction);
  require_grid(spec.grid, 1);
  const Index nx = spec.grid.nx;
  const Index ny = spec.grid.ny;
  const double hx = 1.0 / static_cast<double>(nx);
  const double hy = 1.0 / static_cast<double>(ny);
  const double w = spec.central_weight;
  const auto id = [nx](Index i, Index j) { return (j - 1) * nx + (i - 1); };

  AdvectionSystem sys{RMatrix::Zero(nx * ny, nx * ny), RVector::Zero(nx * ny)};
  for (Index j = 1; j <= ny; ++j) {
    for (Index i = 1; i <= nx; ++i) {
      const double x = static_cast<double>(i) * hx;
      const double y = static_cast<double>(j) * hy;
      const double bx = spec.zero_velocity ? 0.0 : cos_squared(y);
      const double by = spec.zero_velocity ? 0.0 : cos_squared(x);
      const Index row = id(i, j);
      double diag = coefficient(spec, x, y);

      // x direction, flow toward +x.
      const double up_x = -bx * (1.0 - 0.5 * w) / hx;
      const double down_x = bx * 0.5 * w / hx;
      diag += bx * (1.0 - w) / hx;
      if (i > 1) sys.a(row, id(i - 1, j)) += up_x;
      else sys.inflow_lift(row) -= up_x;
      if (i < nx) sys.a(row, id(i + 1, j)) += down_x;
      else diag += down_x;

      // y direction, flow toward +y.
      const double up_y = -by * (1.0 - 0.5 * w) / hy;
      const double down_y = by * 0.5 * w / hy;
      diag += by * (1.0 - w) / hy;
      if (j > 1) sys.a(row, id(i, j - 1)) += up_y;
      else sys.inflow_lift(row) -= up_y;
      if (j < ny) sys.a(row, id(i, j + 1)) += down_y;
      else diag += down_y;

      sys.a(row, row) += diag;
    }
  }
  return sys;
}

RMatrix advection_reaction_matrix(const ProblemSpec& spec) {
  return advection_reaction_system(spec).a;
}

RMatrix mixed_wave_matrix(const ProblemSpec& spec) {
  require_kind(spec, ProblemKind::MixedWave);
  require_grid(spec.grid, 1);
  const Index px = spec.grid.nx + 1;
  const Index py = spec.grid.ny + 1;
  const double hx = 1.0 / static_cast<double>(spec.grid.nx);
  const double hy = 1.0 / static_cast<double>(spec.grid.ny);
  const RMatrix dx = sbp_derivative(px, hx);
  const RMatrix dy = sbp_derivative(py, hy);
  const Index nodes = px * py;
  const double half = 0.5 * spec.dt;
  const auto node = [px](Index i, Index j) { return j * px + i; };

  RMatrix a = RMatrix::Identity(3 * nodes, 3 * nodes);
  for (Index j = 0; j < py; ++j) {
    for (Index i = 0; i < px; ++i) {
      const Index k = node(i, j);
      const double x = static_cast<double>(i) * hx;
      const double y = static_cast<double>(j) * hy;
      const double c = spec.constant_speed ? 1.0 : coefficient(spec, x, y);

      if (i == 0 || j == 0 || i == px - 1 || j == py - 1) {
        const double h = (i == 0 || i == px - 1) ? hx : hy;
        a(3 * k, 3 * k) += half * spec.penalty / h;
      }
      // p rows: (dt/2) grad u.
      for (Index q = 0; q < px; ++q) {
        if (dx(i, q) != 0.0) a(3 * k + 1, 3 * node(q, j)) += half * dx(i, q);
      }
      for (Index q = 0; q < py; ++q) {
        if (dy(j, q) != 0.0) a(3 * k + 2, 3 * node(i, q)) += half * dy(j, q);
      }
      // u row: (dt c/2) div p with div = -grad^T.
      for (Index q = 0; q < px; ++q) {
        if (dx(q, i) != 0.0) a(3 * k, 3 * node(q, j) + 1) -= half * c * dx(q, i);
      }
      for (Index q = 0; q < py; ++q) {
        if (dy(q, j) != 0.0) a(3 * k, 3 * node(i, q) + 2) -= half * c * dy(q, j);
      }
    }
  }
  return a;
}

RMatrix hpd_laplacian(const ProblemSpec& spec) {
  require_kind(spec, ProblemKind::Laplacian);
  require_grid(spec.grid, 1);
  const Index nx = spec.grid.nx;
  const Index ny = spec.grid.ny;
  RMatrix a = RMatrix::Zero(nx * ny, nx * ny);
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) {
      const Index k = j * nx + i;
      a(k, k) = 4.0;
      if (i > 0) a(k, k - 1) = -1.0;
      if (i + 1 < nx) a(k, k + 1) = -1.0;
      if (j > 0) a(k, k - nx) = -1.0;
      if (j + 1 < ny) a(k, k + nx) = -1.0;
    }
  }
  return a;
}

std::pair<RMatrix, RMatrix> random_pencil(Index n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "random pencil size must be >= 1");
  NormalStream stream(seed);
  const double shift = 2.0 * std::sqrt(static_cast<double>(n));
  RMatrix a = stream.matrix(n, n);
  a.diagonal().array() += shift;
  RMatrix m = a + stream.matrix(n, n);
  return {a, m};
}

std::pair<RMatrix, RMatrix> spectral_pencil(const CVector& lambdas, std::uint64_t seed) {
  const Index n = lambdas.size();
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "need at least one eigenvalue");
  RMatrix block = RMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const Complex l = lambdas(i);
    if (l.imag() == 0.0) {
      block(i, i) = l.real();
      continue;
    }
    if (i + 1 >= n || lambdas(i + 1) != std::conj(l)) {
      throw Error(ErrorKind::InvalidArgument, "complex eigenvalue without adjacent conjugate");
    }
    block(i, i) = block(i + 1, i + 1) = l.real();
    block(i, i + 1) = l.imag();
    block(i + 1, i) = -l.imag();
    ++i;
  }
  NormalStream stream(seed);
  RMatrix s = stream.matrix(n, n);
  s.diagonal().array() += 2.0 * std::sqrt(static_cast<double>(n));
  const RMatrix a = s * block * s.partialPivLu().inverse();
  return {a, RMatrix::Identity(n, n)};
}

BlockPartition problem_blocks(const ProblemSpec& spec, Index n) {
  switch (spec.kind) {
    case ProblemKind::AdvectionReaction:
    case ProblemKind::Laplacian:
      return patches(spec.grid.nx, spec.grid.ny);
    case ProblemKind::MixedWave:
      return BlockPartition::uniform(n, 3);
    case ProblemKind::RandomPencil:
      return BlockPartition::uniform(n, 2);
    case ProblemKind::External:
      break;
  }
  return BlockPartition::uniform(n, 1);
}

ProblemInstance build_problem(const ProblemSpec& spec) {
  ProblemInstance out;
  switch (spec.kind) {
    case ProblemKind::AdvectionReaction:
      out.a = to_complex(advection_reaction_matrix(spec));
      out.name = "advection r=" + std::to_string(spec.grid.refinement);
      break;
    case ProblemKind::MixedWave:
      out.a = to_complex(mixed_wave_matrix(spec));
      out.name = "wave r=" + std::to_string(spec.grid.refinement);
      break;
    case ProblemKind::Laplacian:
      out.a = to_complex(hpd_laplacian(spec));
      out.name = "laplacian " + std::to_string(spec.grid.nx) + "x" + std::to_string(spec.grid.ny);
      break;
    case ProblemKind::RandomPencil: {
      auto [a, m] = random_pencil(spec.size, spec.seed);
      out.a = to_complex(a);
      out.m = to_complex(m);
      out.name = "random n=" + std::to_string(spec.size) + " seed=" + std::to_string(spec.seed);
      break;
    }
    case ProblemKind::External:
      if (spec.matrix_path.empty()) {
        throw Error(ErrorKind::ConfigError, "external problem needs a matrix path");
      }
      out.a = load_matrix_market(spec.matrix_path);
      if (!spec.preconditioner_path.empty()) out.m = load_matrix_market(spec.preconditioner_path);
      out.name = spec.matrix_path;
      break;
  }
  out.blocks = problem_blocks(spec, out.a.rows());
  return out;
}

}  // namespace spectl
