// Command-line front end: reproducible experiments over problem instances,
// with CSV outputs carrying a '#'-prefixed header block (tool version,
// resolved config, seed).  Identical config + seed gives byte-identical
// files; wall-clock timing is only emitted with --timing.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <eaqc/dynamics.hpp>
#include <eaqc/entanglement.hpp>
#include <eaqc/instance.hpp>
#include <eaqc/landscape.hpp>
#include <eaqc/meanfield.hpp>
#include <eaqc/rng.hpp>
#include <eaqc/spectrum.hpp>
#include <eaqc/symspace.hpp>
#include <eaqc/version.hpp>

namespace {

// distinct exit codes, one line on stderr per failure
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitGuard = 4;
constexpr int kExitCompute = 5;

struct InstanceSource {
  std::string file;
  std::string family;  // random | ferro | exactcover
  int M = 3;
  double K = 0.2;
  std::uint64_t seed = 1;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--instance", file, "instance JSON file (keys M, J, K)");
    cmd->add_option("--family", family, "named family: random | ferro | exactcover");
    cmd->add_option("--M", M, "number of logical sites for a named family");
    cmd->add_option("--K", K, "bias for the ferro family");
    cmd->add_option("--seed", seed, "seed for the random family");
  }

  eaqc::ProblemInstance resolve() const {
    if (!file.empty()) return eaqc::load_instance(file);
    if (family == "random") return eaqc::random_instance(M, seed);
    if (family == "ferro") return eaqc::ferromagnetic_instance(M, K);
    if (family == "exactcover") return eaqc::exact_cover_instance();
    throw CLI::ValidationError("--instance or a valid --family is required");
  }

  std::string describe() const {
    std::ostringstream ss;
    if (!file.empty())
      ss << "instance=" << file;
    else
      ss << "family=" << family << " M=" << M << " K=" << K << " seed=" << seed;
    return ss.str();
  }
};

std::string resolve_output(const std::string& path) {
  if (path.empty() || path == "-") return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  if (const char* dir = std::getenv("EAQC_OUT_DIR"))
    return (std::filesystem::path(dir) / p).string();
  return path;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    resolved_ = resolve_output(path);
    if (resolved_.empty() || resolved_ == "-") {
      os_ = &std::cout;
    } else {
      file_.open(resolved_);
      if (!file_) throw std::ios_base::failure("cannot open output file " + resolved_);
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::string resolved_;
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

void write_header(std::ostream& os, const std::string& subcommand,
                  const std::string& config, bool timing,
                  std::chrono::steady_clock::time_point t0) {
  os << "# tool: eaqc " << eaqc::kVersion << "\n";
  os << "# subcommand: " << subcommand << "\n";
  os << "# config: " << config << "\n";
  if (timing) {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    os << "# elapsed_s: " << secs << "\n";
  }
}

std::vector<int> parse_range(const std::string& spec) {
  // "1..7" or "1,3,5"
  std::vector<int> out;
  if (const auto dots = spec.find(".."); dots != std::string::npos) {
    const int lo = std::stoi(spec.substr(0, dots));
    const int hi = std::stoi(spec.substr(dots + 2));
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

std::vector<double> parse_list(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

const char* tag_name(eaqc::LevelTag t) {
  switch (t) {
    case eaqc::LevelTag::Equivalent: return "equivalent";
    case eaqc::LevelTag::Error: return "error";
    default: return "unresolved";
  }
}

std::string spins_to_string(const eaqc::SpinConfiguration& s) {
  std::ostringstream ss;
  ss << "(";
  for (int i = 0; i < s.size(); ++i) ss << (i ? "," : "") << (s(i) > 0 ? "+1" : "-1");
  ss << ")";
  return ss.str();
}

// Rejection-sample random instances until a critical-size predicate holds.
std::vector<eaqc::ProblemInstance> filtered_set(int M, int count, std::uint64_t seed,
                                                int nc_equal, int nc_greater,
                                                long& rejections) {
  std::vector<eaqc::ProblemInstance> set;
  rejections = 0;
  std::uint64_t draw = 0;
  while (static_cast<int>(set.size()) < count) {
    if (++draw > 2'000'000ULL)
      throw std::runtime_error("instance filter: rejection sampling exhausted");
    eaqc::ProblemInstance inst = eaqc::random_instance(M, eaqc::derived_seed(seed, draw));
    const auto nc = eaqc::critical_ensemble_size(inst);
    const bool keep = nc && ((nc_equal > 0 && *nc == nc_equal) ||
                             (nc_greater > 0 && *nc > nc_greater) ||
                             (nc_equal <= 0 && nc_greater <= 0));
    if (keep)
      set.push_back(std::move(inst));
    else
      ++rejections;
  }
  return set;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ensemble-encoded adiabatic annealing toolkit"};
  app.require_subcommand(1);
  bool timing = false;
  app.add_flag("--timing", timing, "include elapsed wall-clock in output headers");
  const auto t0 = std::chrono::steady_clock::now();

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  InstanceSource gen_src;
  gen_src.family = "random";
  gen_src.add_flags(gen);
  std::string gen_out = "-";
  gen->add_option("-o,--output", gen_out, "output path (default stdout)");

  // ---- landscape ----
  auto* lsc = app.add_subcommand("landscape", "classical corner analysis report");
  InstanceSource lsc_src;
  lsc_src.add_flags(lsc);
  int lsc_N = 1;
  std::string lsc_out = "-", lsc_traj;
  lsc->add_option("--N", lsc_N, "ensemble size for the Delta(N) line");
  lsc->add_option("-o,--output", lsc_out, "report path (default stdout)");
  lsc->add_option("--trajectories", lsc_traj, "CSV of corner-trajectory samples f(eps)");

  // ---- spectrum ----
  auto* spec = app.add_subcommand("spectrum", "low-lying spectrum over a lambda grid");
  InstanceSource spec_src;
  spec_src.add_flags(spec);
  int spec_N = 1, spec_L = 30, spec_grid = 101;
  std::string spec_out = "-";
  spec->add_option("--N", spec_N, "ensemble size");
  spec->add_option("--levels", spec_L, "number of levels (default 30)");
  spec->add_option("--grid", spec_grid, "lambda grid points (default 101)");
  spec->add_option("-o,--output", spec_out, "CSV path");

  // ---- mingap ----
  auto* mg = app.add_subcommand("mingap", "gap(lambda) scan and its minimum");
  InstanceSource mg_src;
  mg_src.add_flags(mg);
  int mg_N = 1, mg_grid = 101;
  bool mg_refine = false;
  std::string mg_out = "-";
  mg->add_option("--N", mg_N, "ensemble size");
  mg->add_option("--grid", mg_grid, "lambda grid points (default 101)");
  mg->add_flag("--refine", mg_refine, "golden-section refinement to 1e-4 in lambda");
  mg->add_option("-o,--output", mg_out, "CSV path");

  // ---- meanfield ----
  auto* mf = app.add_subcommand("meanfield", "self-consistent mean-field curve");
  InstanceSource mf_src;
  mf_src.add_flags(mf);
  int mf_grid = 101;
  std::string mf_out = "-";
  mf->add_option("--grid", mf_grid, "lambda grid points (default 101)");
  mf->add_option("-o,--output", mf_out, "CSV path");

  // ---- anneal ----
  auto* an = app.add_subcommand("anneal", "time-evolve the annealing protocol");
  InstanceSource an_src;
  an_src.add_flags(an);
  int an_N = 1;
  double an_tau = 100.0, an_gz = 0.0, an_gx = 0.0;
  long an_steps = 0;
  bool an_individual = false, an_normalized = false;
  std::string an_out = "-", an_levels;
  an->add_option("--N", an_N, "ensemble size");
  an->add_option("--tau", an_tau, "sweep time");
  an->add_option("--gamma-z", an_gz, "S^z dephasing rate");
  an->add_option("--gamma-x", an_gx, "S^x dephasing rate");
  an->add_option("--steps", an_steps, "RK4 steps (default max(1e4, 100*tau))");
  an->add_flag("--individual", an_individual,
               "per-qubit dephasing on the full 2^(NM) space");
  an->add_flag("--normalized-export", an_normalized,
               "normalize the level export so the maximum is 1");
  an->add_option("-o,--output", an_out, "run summary CSV path");
  an->add_option("--levels-out", an_levels, "per-level distribution CSV path");

  // ---- batch ----
  auto* ba = app.add_subcommand("batch", "mean error over a filtered instance set");
  int ba_M = 3, ba_count = 10, ba_nc = 0, ba_ncgt = 0, ba_threads = 1;
  std::uint64_t ba_seed = 1;
  double ba_gz = 0.0, ba_gx = 0.0;
  long ba_steps = 0;
  std::string ba_N = "1..5", ba_tau = "100", ba_out = "-", ba_raw;
  ba->add_option("--M", ba_M, "number of logical sites");
  ba->add_option("--count", ba_count, "instances in the set");
  ba->add_option("--filter-nc", ba_nc, "keep instances with critical size == value");
  ba->add_option("--filter-nc-gt", ba_ncgt, "keep instances with critical size > value");
  ba->add_option("--seed", ba_seed, "base seed for the instance set");
  ba->add_option("--N", ba_N, "ensemble sizes, e.g. 1..7 or 1,3,5");
  ba->add_option("--tau", ba_tau, "sweep times, comma separated");
  ba->add_option("--gamma-z", ba_gz, "S^z dephasing rate");
  ba->add_option("--gamma-x", ba_gx, "S^x dephasing rate");
  ba->add_option("--steps", ba_steps, "RK4 steps override");
  ba->add_option("--threads", ba_threads, "worker pool size");
  ba->add_option("-o,--output", ba_out, "mean-error CSV path");
  ba->add_option("--raw-out", ba_raw, "per-cell raw CSV path");

  // ---- negativity ----
  auto* ng = app.add_subcommand("negativity", "inter-ensemble logarithmic negativity");
  InstanceSource ng_src;
  ng_src.family = "ferro";
  ng_src.M = 2;
  ng_src.K = 0.1;
  ng_src.add_flags(ng);
  int ng_N = 2, ng_samples = 61;
  double ng_tau = 60.0, ng_gz = 1e-4, ng_gx = 0.0;
  long ng_steps = 0;
  std::string ng_out = "-";
  ng->add_option("--N", ng_N, "ensemble size");
  ng->add_option("--tau", ng_tau, "sweep time");
  ng->add_option("--gamma-z", ng_gz, "S^z dephasing rate");
  ng->add_option("--gamma-x", ng_gx, "S^x dephasing rate");
  ng->add_option("--samples", ng_samples, "number of sampled times");
  ng->add_option("--steps", ng_steps, "RK4 steps override");
  ng->add_option("-o,--output", ng_out, "CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const eaqc::ProblemInstance inst = gen_src.resolve();
      Output out(gen_out);
      out.stream() << eaqc::serialize_instance(inst) << "\n";
      return 0;
    }

    if (lsc->parsed()) {
      const eaqc::ProblemInstance inst = lsc_src.resolve();
      const eaqc::LandscapeSummary ls = eaqc::analyze_landscape(inst);
      Output out(lsc_out);
      auto& os = out.stream();
      write_header(os, "landscape", lsc_src.describe() + " N=" + std::to_string(lsc_N),
                   timing, t0);
      os.precision(12);
      os << "sigma_star: " << spins_to_string(ls.sigma_star) << "\n";
      os << "eps0: " << ls.eps0 << "\n";
      os << "eps1: " << ls.eps1 << "\n";
      os << "ground_degeneracy: " << ls.ground_degeneracy << "\n";
      os << "first_excited_degeneracy: " << ls.first_excited_degeneracy << "\n";
      if (ls.delta) {
        os << "delta: " << *ls.delta << "\n";
        os << "Delta(N=" << lsc_N << "): " << lsc_N * (ls.eps1 - ls.eps0) << "\n";
        os << "N_c: " << *ls.critical_size << "\n";
      } else {
        os << "delta: undefined (degenerate ground corner)\n";
        os << "N_c: undefined\n";
      }
      if (!lsc_traj.empty()) {
        Output tout(lsc_traj);
        auto& ts = tout.stream();
        write_header(ts, "landscape-trajectories", lsc_src.describe(), timing, t0);
        ts << "corner_index,eps,f\n";
        ts.precision(12);
        const int M = inst.size();
        for (std::uint32_t bits = 1; bits < (1u << M); ++bits) {
          Eigen::VectorXi n(M);
          for (int i = 0; i < M; ++i) n(i) = (bits >> (M - 1 - i)) & 1u;
          for (int s = 0; s <= 50; ++s) {
            const double eps = s / 50.0;
            ts << bits << "," << eps << ","
               << eaqc::corner_trajectory_energy(inst, ls.sigma_star, n, eps) << "\n";
          }
        }
      }
      return 0;
    }

    if (spec->parsed()) {
      const eaqc::ProblemInstance inst = spec_src.resolve();
      Output out(spec_out);
      auto& os = out.stream();
      write_header(os, "spectrum",
                   spec_src.describe() + " N=" + std::to_string(spec_N) +
                       " levels=" + std::to_string(spec_L) +
                       " grid=" + std::to_string(spec_grid),
                   timing, t0);
      const long dim = eaqc::symspace_dim(inst.size(), spec_N);
      const int L = static_cast<int>(std::min<long>(spec_L, dim));
      const int Lsolve = static_cast<int>(std::min<long>(std::max(L, 2), dim));
      os << "lambda";
      for (int l = 0; l < L; ++l) os << ",E" << l;
      os << ",gap\n";
      os.precision(12);
      for (double lambda : eaqc::lambda_grid(spec_grid)) {
        const auto H = eaqc::hamiltonian(inst, spec_N, lambda);
        const auto r = eaqc::eigensystem(H, Lsolve);
        os << lambda;
        for (int l = 0; l < L; ++l) os << "," << r.values(l);
        os << "," << (r.values(1) - r.values(0)) << "\n";
      }
      return 0;
    }

    if (mg->parsed()) {
      const eaqc::ProblemInstance inst = mg_src.resolve();
      Output out(mg_out);
      auto& os = out.stream();
      write_header(os, "mingap",
                   mg_src.describe() + " N=" + std::to_string(mg_N) +
                       " grid=" + std::to_string(mg_grid) +
                       (mg_refine ? " refine=1" : " refine=0"),
                   timing, t0);
      const auto grid = eaqc::lambda_grid(mg_grid);
      os.precision(12);
      const auto res = eaqc::min_gap(inst, mg_N, grid, mg_refine);
      os << "# lambda_star: " << res.lambda_star << "\n";
      os << "# gap_min: " << res.gap_min << "\n";
      os << "lambda,gap\n";
      for (double lambda : grid)
        os << lambda << "," << eaqc::gap(inst, mg_N, lambda) << "\n";
      return 0;
    }

    if (mf->parsed()) {
      const eaqc::ProblemInstance inst = mf_src.resolve();
      Output out(mf_out);
      auto& os = out.stream();
      write_header(os, "meanfield", mf_src.describe() + " grid=" + std::to_string(mf_grid),
                   timing, t0);
      os << "lambda";
      for (int i = 1; i <= inst.size(); ++i) os << ",z" << i;
      os << ",E_mf_per_N,mf_gap\n";
      os.precision(12);
      for (const auto& p : eaqc::mf_curve(inst, eaqc::lambda_grid(mf_grid))) {
        os << p.lambda;
        for (int i = 0; i < p.z.size(); ++i) os << "," << p.z(i);
        os << "," << p.energy_per_site << "," << p.gap << "\n";
      }
      return 0;
    }

    if (an->parsed()) {
      const eaqc::ProblemInstance inst = an_src.resolve();
      const eaqc::Schedule sched{an_tau};
      eaqc::RunResult r;
      if (an_individual) {
        if (an_gx != 0.0)
          throw CLI::ValidationError("--individual supports --gamma-z only");
        r = eaqc::evolve_individual_dephasing(inst, an_N, sched, an_gz, an_steps);
      } else if (an_gz == 0.0 && an_gx == 0.0) {
        r = eaqc::evolve_pure(inst, an_N, sched, an_steps);
      } else {
        r = eaqc::evolve_lindblad(inst, an_N, sched, an_gz, an_gx, an_steps);
      }
      Output out(an_out);
      auto& os = out.stream();
      write_header(os, "anneal",
                   an_src.describe() + " N=" + std::to_string(an_N) + " tau=" +
                       std::to_string(an_tau) + " gamma_z=" + std::to_string(an_gz) +
                       " gamma_x=" + std::to_string(an_gx) +
                       (an_individual ? " individual=1" : ""),
                   timing, t0);
      os << "N,tau,gamma_z,gamma_x,success,error,steps,norm_drift\n";
      os.precision(12);
      os << an_N << "," << an_tau << "," << an_gz << "," << an_gx << "," << r.success
         << "," << r.error << "," << r.steps << "," << r.norm_drift << "\n";
      if (!an_levels.empty()) {
        const auto dist = eaqc::final_distribution(r, an_normalized);
        Output lout(an_levels);
        auto& ls = lout.stream();
        write_header(ls, "anneal-levels", an_src.describe(), timing, t0);
        ls << "level_index,energy,probability,tag\n";
        ls.precision(12);
        for (int l = 0; l < dist.energies.size(); ++l)
          ls << l << "," << dist.energies(l) << "," << dist.probabilities(l) << ","
             << tag_name(dist.tags[l]) << "\n";
      }
      return 0;
    }

    if (ba->parsed()) {
      long rejections = 0;
      const auto set = filtered_set(ba_M, ba_count, ba_seed, ba_nc, ba_ncgt, rejections);
      const auto Ns = parse_range(ba_N);
      const auto taus = parse_list(ba_tau);
      const auto cells =
          eaqc::batch_errors(set, Ns, taus, ba_gz, ba_gx, ba_threads, ba_steps);
      const std::string config =
          "M=" + std::to_string(ba_M) + " count=" + std::to_string(ba_count) +
          " filter_nc=" + std::to_string(ba_nc) +
          " filter_nc_gt=" + std::to_string(ba_ncgt) + " seed=" + std::to_string(ba_seed) +
          " N=" + ba_N + " tau=" + ba_tau + " gamma_z=" + std::to_string(ba_gz) +
          " gamma_x=" + std::to_string(ba_gx) +
          " rejections=" + std::to_string(rejections);
      if (!ba_raw.empty()) {
        Output rout(ba_raw);
        auto& rs = rout.stream();
        write_header(rs, "batch-raw", config, timing, t0);
        rs << "instance_id,N,tau,gamma_z,gamma_x,success,error,steps,norm_drift,failed\n";
        rs.precision(12);
        for (const auto& c : cells)
          rs << c.instance_id << "," << c.N << "," << c.tau << "," << c.gamma_z << ","
             << c.gamma_x << "," << c.success << "," << c.error << "," << c.steps << ","
             << c.norm_drift << "," << (c.failed ? 1 : 0) << "\n";
      }
      Output out(ba_out);
      auto& os = out.stream();
      write_header(os, "batch", config, timing, t0);
      os << "N,tau,mean_error,cells,failed\n";
      os.precision(12);
      for (int N : Ns)
        for (double tau : taus) {
          double sum = 0.0;
          int cnt = 0, failed = 0;
          for (const auto& c : cells)
            if (c.N == N && c.tau == tau) {
              if (c.failed)
                ++failed;
              else {
                sum += c.error;
                ++cnt;
              }
            }
          os << N << "," << tau << "," << (cnt ? sum / cnt : 0.0) << "," << cnt << ","
             << failed << "\n";
        }
      return 0;
    }

    if (ng->parsed()) {
      const eaqc::ProblemInstance inst = ng_src.resolve();
      const auto series = eaqc::negativity_trace(inst, ng_N, eaqc::Schedule{ng_tau},
                                                 ng_gz, ng_gx, ng_samples, ng_steps);
      Output out(ng_out);
      auto& os = out.stream();
      write_header(os, "negativity",
                   ng_src.describe() + " N=" + std::to_string(ng_N) + " tau=" +
                       std::to_string(ng_tau) + " gamma_z=" + std::to_string(ng_gz) +
                       " gamma_x=" + std::to_string(ng_gx),
                   timing, t0);
      os << "t,lambda,log_negativity,N\n";
      os.precision(12);
      for (const auto& s : series)
        os << s.t << "," << s.lambda << "," << s.value << "," << ng_N << "\n";
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "error: guard: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: compute: " << e.what() << "\n";
    return kExitCompute;
  }
  return 0;
}
