// Batch front-end: JSON in, JSON/TSV out.
//
// Exit codes: 0 success, 1 verification failure, 2 input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ultrametrica/abhyankar.hpp"
#include "ultrametrica/berkovich.hpp"
#include "ultrametrica/errors.hpp"
#include "ultrametrica/gleason.hpp"
#include "ultrametrica/io.hpp"
#include "ultrametrica/verify.hpp"

namespace um = ultrametrica;
using um::io::json;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kInputError = 2;

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    um::io::write_file(out, j);
  }
}

json norm_json(const um::SeriesElement& f) {
  auto n = um::gauss_norm(f);
  json out = {{"floor", um::io::to_json(f.floor())}, {"exact", f.is_exact()}};
  if (n) {
    out["norm"] = um::io::to_json(*n);
    out["weight"] = n->weight();
  } else {
    // nothing above the floor: either exactly zero or only bounded by it
    out["norm"] = um::io::to_json(um::Value::zero(f.profile()));
    out["below_floor"] = !f.is_exact();
  }
  return out;
}

um::Value t_floor(const um::ProfilePtr& prof, const std::string& text) {
  return um::Value(prof, um::ExponentVec(prof->n()).with_head(um::Rational::parse(text)));
}

um::io::Config load_config(const std::string& path) {
  std::string source = path;
  if (source.empty()) {
    if (const char* env = std::getenv("ULTRAMETRICA_CONFIG")) source = env;
  }
  if (source.empty()) return um::io::config_from_json(json::object());
  return um::io::config_from_json(um::io::read_file(source));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ultrametrica: series over perfectoid fields, Berkovich points, Gleason surjections"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;
  app.add_option("--out", out, "write the result here instead of stdout");

  std::string file, file2, op, floor_text;

  auto* norm = app.add_subcommand("norm", "Gauss norm of a series element");
  norm->add_option("file", file, "series JSON")->required();

  auto* invert = app.add_subcommand("invert", "inverse of a unit up to a floor |t|^a");
  invert->add_option("file", file, "series JSON")->required();
  invert->add_option("--floor", floor_text, "t-exponent a of the target floor")->required();

  auto* arith = app.add_subcommand("arith", "add, sub or mul of two series elements");
  arith->add_option("op", op)->required()->check(CLI::IsMember({"add", "sub", "mul"}));
  arith->add_option("a", file)->required();
  arith->add_option("b", file2)->required();

  auto* classify = app.add_subcommand("classify", "type of a point of the closed disk");
  classify->add_option("file", file, "point JSON")->required();

  std::string config_path, tsv_path, beta_path;
  std::size_t trials = 20;
  std::optional<std::size_t> depth;
  std::optional<std::uint64_t> seed;
  auto* verify = app.add_subcommand("surject-verify", "preimages under the standard surjection, checked at precision");
  verify->add_option("--config", config_path, "config JSON (falls back to $ULTRAMETRICA_CONFIG)");
  verify->add_option("--trials", trials, "number of random targets")->check(CLI::Range(1, 100000));
  verify->add_option("--depth", depth, "schedule depth");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--tsv", tsv_path, "residual-vs-step table");
  verify->add_option("--beta", beta_path, "check this series element instead of random targets");

  std::optional<long> n_vars, ell;
  auto* abh = app.add_subcommand("abhyankar", "d_K, Abhyankar test and Temkin factorization of a tower point");
  abh->add_option("file", file, "tower JSON")->required();
  abh->add_option("--n-vars", n_vars, "variables of a surjection, for the bound check");
  abh->add_option("--l", ell, "transcendence degree of the target, for the bound check");

  auto* gleason = app.add_subcommand("gleason", "Gleason schedules");
  gleason->require_subcommand(1);
  auto* build = gleason->add_subcommand("build", "build and certify a schedule");
  std::size_t n = 1, gdepth = 10;
  std::int64_t p = 2;
  int margin = 1;
  std::string kind;
  build->add_option("--n", n, "number of variables")->check(CLI::Range(1, 8));
  build->add_option("--depth", gdepth, "number of steps")->check(CLI::Range(1, 200));
  build->add_option("--p", p, "characteristic");
  build->add_option("--tail-margin", margin, "tail bound margin")->check(CLI::Range(1, 1000));
  build->add_option("--kind", kind, "plus, minus or standard")->check(CLI::IsMember({"plus", "minus", "standard"}));
  build->add_option("--out", out, "schedule JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (norm->parsed()) {
      emit(norm_json(um::io::series_from_json(um::io::read_file(file))), out);
      return kOk;
    }
    if (invert->parsed()) {
      auto f = um::io::series_from_json(um::io::read_file(file));
      auto g = um::invert(f, t_floor(f.profile(), floor_text));
      emit(um::io::to_json(g), out);
      return kOk;
    }
    if (arith->parsed()) {
      auto a = um::io::series_from_json(um::io::read_file(file));
      auto b = um::io::series_from_json(um::io::read_file(file2));
      auto r = op == "add" ? um::add(a, b) : op == "sub" ? um::sub(a, b) : um::mul(a, b);
      emit(um::io::to_json(r), out);
      return kOk;
    }
    if (classify->parsed()) {
      auto pt = um::io::point_from_json(um::io::read_file(file));
      const auto inv = um::point_invariants(pt);
      emit({{"type", um::to_string(um::classify(pt))},
            {"invariants",
             {{"value_rank_increment", inv.value_rank_increment},
              {"residue_trdeg_increment", inv.residue_trdeg_increment},
              {"semi_immediate", inv.semi_immediate}}},
            {"topologically_simple", um::to_string(um::is_topologically_simple(pt))}},
           out);
      return kOk;
    }
    if (verify->parsed()) {
      auto cfg = load_config(config_path);
      if (depth) cfg.depth = *depth;
      if (seed) cfg.seed = *seed;
      if (cfg.exponents > cfg.depth) cfg.exponents = cfg.depth;
      std::optional<um::SeriesElement> beta;
      if (!beta_path.empty()) beta = um::io::series_from_json(um::io::read_file(beta_path), cfg.profile);
      auto rep = um::surject_verify(cfg, trials, beta);
      emit(um::to_json(rep), out);
      if (!tsv_path.empty()) {
        std::ofstream tsv(tsv_path);
        if (!tsv) throw um::io::InputError(tsv_path + ": cannot write");
        tsv << um::residual_tsv(rep);
      }
      std::cerr << rep.passed() << "/" << rep.trials.size() << " trials passed in " << rep.seconds << " s\n";
      return rep.failed() == 0 ? kOk : kVerifyFailed;
    }
    if (abh->parsed()) {
      auto tower = um::io::tower_from_json(um::io::read_file(file));
      auto fac = um::factor_temkin(tower);
      json radii = json::array();
      for (const auto& r : fac.polyradius) radii.push_back(um::io::to_json(r));
      json rem = json::array();
      for (const auto& r : fac.remainder) {
        rem.push_back({r.value_rank_increment, r.residue_trdeg_increment, r.semi_immediate});
      }
      json res = {{"m", tower.dim()},
                  {"d_K", um::d_K(tower)},
                  {"is_abhyankar", um::is_abhyankar(tower)},
                  {"B", fac.B},
                  {"polyradius", radii},
                  {"remainder", rem},
                  {"kernel_height", fac.kernel_height}};
      if (n_vars.has_value() != ell.has_value()) throw um::io::InputError("--n-vars and --l go together");
      bool ok = true;
      if (n_vars) {
        ok = um::check_main_theorem_bound(*n_vars, *ell);
        res["bound_check"] = {{"n_vars", *n_vars}, {"l", *ell}, {"holds", ok}};
      }
      emit(res, out);
      return ok ? kOk : kVerifyFailed;
    }
    if (build->parsed()) {
      if (!um::is_prime(p)) throw um::io::InputError("--p must be prime");
      if (kind.empty()) kind = n == 1 ? "plus" : "standard";
      if (kind != "standard" && n != 1) throw um::io::InputError("--kind " + kind + " needs --n 1");
      auto prof = um::RadiusProfile::free(p, n, um::max_p_power(p));
      um::ScheduleOptions opt;
      opt.tail_margin = margin;
      std::shared_ptr<um::GleasonSchedule> held;
      std::optional<um::SurjectionSpec> spec;
      if (kind == "plus") {
        held = um::build_gplus(prof, gdepth, opt).schedule;
      } else if (kind == "minus") {
        held = um::build_gminus(prof, um::standard_c_exponent(prof), gdepth, opt).schedule;
      } else {
        spec.emplace(prof, gdepth, opt);
      }
      const um::GleasonSchedule* sched = held ? held.get() : &spec->schedule();
      json j = um::io::to_json(*sched);
      json certs = json::array();
      bool ok = true;
      for (std::size_t m = 1; m <= gdepth; ++m) {
        auto cert = um::is_adapted(sched->adapted_element(m, gdepth), sched->step(m).omega);
        ok = ok && cert.passed() && sched->step(m).all_conditions();
        certs.push_back(um::io::to_json(cert));
      }
      j["certificates"] = certs;
      j["all_passed"] = ok;
      emit(j, out);
      return ok ? kOk : kVerifyFailed;
    }
  } catch (const um::InvariantError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerifyFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
