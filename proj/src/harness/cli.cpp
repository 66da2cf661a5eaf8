#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "spectl/harness.hpp"

namespace spectl {

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> problem;
  std::optional<std::string> smoother;
  std::optional<std::string> nc;
  std::optional<std::string> nc_frac;
  std::optional<int> nu1;
  std::optional<int> nu2;
  bool real = false;
  std::optional<std::string> seeds;
  std::optional<std::string> out;
  std::optional<std::string> mtx_a;
  std::optional<std::string> mtx_m;
  std::optional<int> refine;
  std::optional<double> dt;
  std::optional<Index> n;
  std::optional<std::uint64_t> seed;
  std::optional<Index> nx;
  std::optional<Index> ny;
  std::optional<int> k_cap;
  std::optional<double> rtol;
  std::optional<std::string> format;
};

void add_flags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config, "JSON config file");
  cmd.add_option("--problem", f.problem, "advection | wave | laplacian | random | external");
  cmd.add_option("--smoother", f.smoother,
                 "jacobi | block_jacobi | rb_jacobi | block_rb_jacobi | given");
  cmd.add_option("--nc", f.nc, "coarse sizes, comma separated");
  cmd.add_option("--nc-frac", f.nc_frac, "coarse fractions of n, comma separated");
  cmd.add_option("--nu1", f.nu1, "pre-smoothing steps");
  cmd.add_option("--nu2", f.nu2, "post-smoothing steps");
  cmd.add_flag("--real", f.real, "use real-valued transfers");
  cmd.add_option("--seeds", f.seeds, "N (seeds 1..N) or a comma-separated seed list");
  cmd.add_option("--out", f.out, "output file (default stdout)");
  cmd.add_option("--mtx-a", f.mtx_a, "Matrix Market file for A");
  cmd.add_option("--mtx-m", f.mtx_m, "Matrix Market file for M");
  cmd.add_option("--refine", f.refine, "grid refinement r");
  cmd.add_option("--dt", f.dt, "wave time step");
  cmd.add_option("--n", f.n, "random pencil size");
  cmd.add_option("--seed", f.seed, "random pencil seed");
  cmd.add_option("--nx", f.nx, "grid size in x");
  cmd.add_option("--ny", f.ny, "grid size in y");
  cmd.add_option("--k-cap", f.k_cap, "iteration cap");
  cmd.add_option("--rtol", f.rtol, "relative residual stop");
  cmd.add_option("--format", f.format, "spectrum output: csv | json");
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !(is >> std::ws).eof()) {
      throw Error(ErrorKind::ConfigError, std::string("bad ") + what + " value '" + item + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw Error(ErrorKind::ConfigError, std::string("empty ") + what);
  return values;
}

RunConfig merge(const Flags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
  ProblemSpec& p = c.problem;

  if (f.problem) {
    const ProblemKind kind = parse_problem_kind(*f.problem);
    if (kind != p.kind) {
      const int r = f.refine.value_or(1);
      switch (kind) {
        case ProblemKind::AdvectionReaction: p = ProblemSpec::advection(r); break;
        case ProblemKind::MixedWave: p = ProblemSpec::wave(r, 1e-2); break;
        case ProblemKind::Laplacian: p = ProblemSpec::laplacian(8, 8); break;
        case ProblemKind::RandomPencil: p = ProblemSpec::random(6, 42); break;
        case ProblemKind::External: p = ProblemSpec::external(""); break;
      }
    }
  } else if ((f.mtx_a || f.mtx_m) && p.kind != ProblemKind::External) {
    p = ProblemSpec::external("");
  }
  if (f.refine) {
    if (*f.refine < 0 || *f.refine > 8) throw Error(ErrorKind::ConfigError, "--refine in [0, 8]");
    if (p.kind == ProblemKind::AdvectionReaction) p.grid = GridSpec::advection(*f.refine);
    if (p.kind == ProblemKind::MixedWave) p.grid = GridSpec::wave(*f.refine);
  }
  if (f.nx) p.grid.nx = p.grid.ny = *f.nx;
  if (f.ny) p.grid.ny = *f.ny;
  if (f.dt) p.dt = *f.dt;
  if (f.n) p.size = *f.n;
  if (f.seed) p.seed = *f.seed;
  if (f.mtx_a) p.matrix_path = *f.mtx_a;
  if (f.mtx_m) p.preconditioner_path = *f.mtx_m;

  if (f.smoother) c.smoother = parse_smoother_kind(*f.smoother);
  if (f.nc) {
    c.coarse_sizes = parse_list<Index>(*f.nc, "--nc");
    if (!f.nc_frac) c.coarse_fractions.clear();
  }
  if (f.nc_frac) {
    c.coarse_fractions = parse_list<double>(*f.nc_frac, "--nc-frac");
    if (!f.nc) c.coarse_sizes.clear();
  }
  if (f.nu1) c.nu1 = *f.nu1;
  if (f.nu2) c.nu2 = *f.nu2;
  if (f.real) c.real_mode = true;
  if (f.seeds) {
    const auto list = parse_list<std::uint64_t>(*f.seeds, "--seeds");
    if (list.size() == 1 && f.seeds->find(',') == std::string::npos) {
      c.seeds.clear();
      for (std::uint64_t s = 1; s <= list[0]; ++s) c.seeds.push_back(s);
      if (c.seeds.empty()) throw Error(ErrorKind::ConfigError, "--seeds must be >= 1");
    } else {
      c.seeds = list;
    }
  }
  if (f.out) c.out = *f.out;
  if (f.k_cap) c.k_cap = *f.k_cap;
  if (f.rtol) c.rtol = *f.rtol;
  if (f.format) c.format = *f.format;
  c.validate();
  return c;
}

void configure_logging(std::ostream& err) {
  static bool done = false;
  if (!done) {
    auto logger = spdlog::stderr_logger_st("spectl");
    spdlog::set_default_logger(logger);
    done = true;
  }
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("SPECTL_LOG");
  spdlog::level::level_enum level = spdlog::level::warn;
  if (env && *env) {
    level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string(env) != "off") {
      err << "warning: unknown SPECTL_LOG level '" << env << "', using warn\n";
      level = spdlog::level::warn;
    }
  }
  spdlog::set_level(level);
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::IoError:
    case ErrorKind::ParseError:
    case ErrorKind::UnsupportedField:
    case ErrorKind::BadCoarseDim:
    case ErrorKind::NotRealPencil:
    case ErrorKind::InvalidPartition:
      return kExitConfig;
    default:
      return kExitNumerical;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_logging(err);

  CLI::App app{"Optimal two-level transfer operators on dense matrix pencils", "spectl"};
  app.require_subcommand(1);
  Flags flags;
  using Verb = int (*)(const RunConfig&, std::ostream&);
  const std::vector<std::tuple<const char*, const char*, Verb>> verbs = {
      {"spectrum", "ordered generalized eigenvalues and deviations", &cmd_spectrum},
      {"verify", "run the theorem checks on the configured pencil", &cmd_verify},
      {"sweep", "bounds, norms and measured factors over a coarse-size grid", &cmd_sweep},
      {"run", "two-level iterations with convergence histories", &cmd_run},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, help, fn] : verbs) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_flags(*sub, flags);
    subs.push_back(sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    for (CLI::App* sub : subs) {
      if (sub->parsed()) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
      }
    }
    err << "error: " << e.what() << '\n' << app.help();
    return kExitConfig;
  }

  try {
    const RunConfig config = merge(flags);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      const Verb fn = std::get<2>(verbs[i]);
      if (config.out.empty()) return fn(config, out);
      std::ostringstream buffer;
      const int code = fn(config, buffer);
      std::ofstream file(config.out, std::ios::binary);
      if (!file || !(file << buffer.str())) {
        throw Error(ErrorKind::IoError, "cannot write '" + config.out + "'");
      }
      return code;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace spectl
