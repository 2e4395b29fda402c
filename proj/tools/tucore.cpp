// Command-line front end: game generation, core approximation, exact
// references, metrics, benchmark tables and allocation checks.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tucore/approx.hpp"
#include "tucore/bench.hpp"
#include "tucore/errors.hpp"
#include "tucore/game.hpp"
#include "tucore/metrics.hpp"
#include "tucore/oracle.hpp"
#include "tucore/polytope.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kEmptyCore = 3, kSolverFailure = 4 };

struct EmptyCore {
  std::string what;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    tucore::write_text(path, text);
  }
}

tucore::Allocation parse_allocation(const std::string& text) {
  std::vector<double> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw tucore::DomainError("bad allocation entry '" + item + "'");
    }
  }
  if (xs.empty()) throw tucore::DomainError("empty allocation");
  return Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Core approximation for TU cooperative games"};
  app.require_subcommand(1);

  // generate
  std::string gen_model, gen_out;
  int gen_n = 0;
  double gen_beta = 0.75;
  auto* generate = app.add_subcommand("generate", "Write a model game to a JSON file");
  generate->add_option("--model", gen_model, "savings | nonconvex | museum")->required();
  generate->add_option("--n", gen_n, "Number of players")->required();
  generate->add_option("--beta", gen_beta, "Non-convex model: weight when player n joins");
  generate->add_option("--out", gen_out, "Output path (stdout if omitted)");

  // approximate
  std::string ap_game, ap_out, ap_scheme = "rand";
  int ap_k = 500, ap_workers = 1;
  std::uint64_t ap_seed = 0;
  double ap_eps = 1e-6;
  bool ap_no_timing = false;
  auto* approximate = app.add_subcommand("approximate", "Sample k directions and collect core vertices");
  approximate->add_option("--game", ap_game)->required();
  approximate->add_option("--k", ap_k, "Number of directions");
  approximate->add_option("--scheme", ap_scheme, "det | rand");
  approximate->add_option("--seed", ap_seed);
  approximate->add_option("--perturbation", ap_eps, "Sign scheme perturbation");
  approximate->add_option("--workers", ap_workers);
  approximate->add_option("--out", ap_out);
  approximate->add_flag("--no-timing,--deterministic", ap_no_timing, "Omit timing fields");

  // exact
  std::string ex_game, ex_out, ex_method = "auto";
  int ex_stall = 5000, ex_workers = 1;
  std::uint64_t ex_seed = 0;
  auto* exact = app.add_subcommand("exact", "Reference vertex set");
  exact->add_option("--game", ex_game)->required();
  exact->add_option("--method", ex_method, "auto | naive | marginal | saturation")
      ->check(CLI::IsMember({"auto", "naive", "marginal", "saturation"}));
  exact->add_option("--stall", ex_stall, "Saturation: consecutive unproductive draws before stopping");
  exact->add_option("--seed", ex_seed, "Saturation seed");
  exact->add_option("--workers", ex_workers, "Naive enumeration workers");
  exact->add_option("--out", ex_out);

  // metrics
  std::string me_approx, me_exact, me_out;
  bool me_no_timing = false;
  auto* metrics = app.add_subcommand("metrics", "EPR, VR and RDC of an approximation");
  metrics->add_option("--approx", me_approx)->required();
  metrics->add_option("--exact", me_exact)->required();
  metrics->add_option("--out", me_out);
  metrics->add_flag("--no-timing,--deterministic", me_no_timing, "Omit timing fields");

  // bench
  std::string be_config, be_out, be_format = "csv";
  bool be_no_timing = false;
  auto* bench = app.add_subcommand("bench", "Run an experiment config and write the table");
  bench->add_option("--config", be_config)->required();
  bench->add_option("--out", be_out, "Output path (config out_path, else stdout)");
  bench->add_option("--format", be_format)->check(CLI::IsMember({"csv", "text"}));
  bench->add_flag("--no-timing,--deterministic", be_no_timing, "Leave time columns blank");

  // check
  std::string ch_game, ch_alloc, ch_approx;
  auto* check = app.add_subcommand("check", "Is an allocation in the core?");
  check->add_option("--game", ch_game)->required();
  check->add_option("--alloc", ch_alloc, "Comma-separated allocation")->required();
  check->add_option("--approx", ch_approx, "Approximated vertex set");

  // shapley
  std::string sh_game;
  auto* shapley = app.add_subcommand("shapley", "Shapley value");
  shapley->add_option("--game", sh_game)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*generate) {
      std::unique_ptr<tucore::TUGame> game;
      if (gen_model == "nonconvex") {
        game = std::make_unique<tucore::TUGame>(tucore::make_nonconvex_game(gen_n, gen_beta));
      } else {
        game = std::make_unique<tucore::TUGame>(tucore::build_model_game(gen_model, gen_n));
      }
      emit(gen_out, tucore::game_to_json(*game));
    } else if (*approximate) {
      const auto game = tucore::load_game(ap_game);
      tucore::DirectionScheme scheme{tucore::parse_scheme(ap_scheme), ap_seed, ap_eps};
      const auto result = tucore::approximate_core(game, ap_k, scheme, ap_workers);
      if (result.core_empty) throw EmptyCore{"core of " + game.label() + " is empty"};
      emit(ap_out, tucore::result_to_json(result, !ap_no_timing));
    } else if (*exact) {
      const auto game = tucore::load_game(ex_game);
      if (!tucore::check_nonempty(game)) throw EmptyCore{"core of " + game.label() + " is empty"};
      tucore::VertexSet set;
      if (ex_method == "naive") {
        set = tucore::enumerate_vertices_naive(game, ex_workers);
      } else if (ex_method == "marginal") {
        set = tucore::enumerate_marginal_vectors(game);
      } else if (ex_method == "saturation") {
        set = tucore::saturation_reference(game, {ex_stall, ex_seed});
      } else {
        tucore::ReferenceKind used;
        set = tucore::reference_vertices(game, ex_stall, ex_seed, &used);
        std::cerr << "reference: " << tucore::reference_name(used) << ", " << set.size() << " vertices\n";
      }
      emit(ex_out, tucore::vertex_set_to_json(set));
    } else if (*metrics) {
      const auto approx = tucore::load_vertex_set(me_approx);
      const auto ref = tucore::load_vertex_set(me_exact);
      if (ref.empty()) throw EmptyCore{"exact vertex set is empty"};
      const double grand = ref.points.front().sum();
      const auto report = tucore::compute_metrics(approx, ref, grand);
      emit(me_out, tucore::metrics_to_json(report, !me_no_timing));
    } else if (*bench) {
      const auto config = tucore::load_config(be_config);
      const auto report = tucore::run_experiment(config);
      std::ostringstream os;
      tucore::emit_table(report.rows, be_format == "csv" ? tucore::TableStyle::kCsv : tucore::TableStyle::kText, os,
                         !be_no_timing);
      emit(be_out.empty() ? config.out_path : be_out, os.str());
      std::cerr << "checked " << report.points_checked << " sampled points, " << report.points_outside
                << " outside the core\n";
    } else if (*check) {
      const auto game = tucore::load_game(ch_game);
      const auto x = parse_allocation(ch_alloc);
      std::optional<tucore::VertexSet> approx;
      if (!ch_approx.empty()) approx = tucore::load_vertex_set(ch_approx);
      const auto v = tucore::check_allocation(game, x, approx ? &*approx : nullptr);
      std::cout << "exact: " << (v.exact_in ? "IN" : "OUT") << "\n";
      if (v.approx_in) std::cout << "approx: " << (*v.approx_in ? "IN" : "OUT") << "\n";
      std::cout << "max_violation: " << fmt(v.max_violation) << "\n";
    } else if (*shapley) {
      const auto game = tucore::load_game(sh_game);
      const auto phi = tucore::shapley_value(game);
      for (Eigen::Index i = 0; i < phi.size(); ++i) std::cout << (i ? "," : "") << fmt(phi[i]);
      std::cout << "\n";
    }
  } catch (const EmptyCore& e) {
    std::cerr << "error: " << e.what << "\n";
    return kEmptyCore;
  } catch (const tucore::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const tucore::SchemaError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const tucore::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const tucore::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const tucore::CapacityError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
