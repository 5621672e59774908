// Command-line front end: simulation, sampling, Fermat-Weber estimation,
// model fitting/prediction, evaluation, and MCMC chain diagnostics.
//
// Exit codes: 0 success, 1 usage error, 2 data/runtime error.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trop/chains.hpp"
#include "trop/dataset.hpp"
#include "trop/evaluation.hpp"
#include "trop/fermat_weber.hpp"
#include "trop/kernels.hpp"
#include "trop/regression.hpp"
#include "trop/rng.hpp"
#include "trop/sampling.hpp"
#include "trop/torus.hpp"
#include "trop/tree.hpp"

namespace {

using nlohmann::json;
using namespace trop;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write output file '" + path + "'");
  return out;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateOpts {
  int leaves = 10;
  int per_class = 200;
  std::vector<double> ratios = {0.1, 1.0, 10.0};
  double pop_size = 1.0;
  double birth_rate = 1.0;
  std::uint64_t seed = 42;
  std::string out_dir = ".";
  bool write_newick = false;
  int threads = 1;
};

void simulate_one_ratio(const SimulateOpts& opt, double ratio) {
  const Rng base = Rng(opt.seed).stream("R").stream(format_double(ratio));
  const double depth = ratio * opt.pop_size;

  std::vector<SpeciesTree> species;
  for (int cls = 0; cls < 2; ++cls) {
    Rng rng = base.stream("species").stream(static_cast<std::uint64_t>(cls));
    const Tree topology = yule_tree(opt.leaves, opt.birth_rate, rng);
    species.push_back(make_species_tree(scale_to_depth(topology, depth), opt.pop_size));
  }

  Dataset data;
  for (int cls = 0; cls < 2; ++cls) {
    const Rng class_stream = base.stream("genetrees").stream(static_cast<std::uint64_t>(cls));
    for (int i = 0; i < opt.per_class; ++i) {
      Rng rng = class_stream.stream(static_cast<std::uint64_t>(i));
      const DistanceVector dv = cophenetic_vector(msc_gene_tree(species[cls], rng));
      if (data.leaf_order.empty()) data.leaf_order = dv.leaf_order;
      data.append(cls, dv.values);
    }
  }

  const std::string tag = "R" + format_double(ratio);
  const std::filesystem::path dir(opt.out_dir);
  write_dataset_csv((dir / ("genetrees_" + tag + ".csv")).string(), data);

  json meta;
  meta["m"] = opt.leaves;
  meta["e"] = data.e;
  meta["R"] = ratio;
  meta["pop_size"] = opt.pop_size;
  meta["species_depth"] = depth;
  meta["per_class"] = opt.per_class;
  meta["seed"] = opt.seed;
  meta["leaf_order"] = data.leaf_order;
  auto meta_out = open_out((dir / ("genetrees_" + tag + ".json")).string());
  meta_out << meta.dump(2) << "\n";

  if (opt.write_newick) {
    for (int cls = 0; cls < 2; ++cls) {
      auto out = open_out((dir / ("species" + std::to_string(cls) + "_" + tag + ".nwk")).string());
      out << write_newick(species[cls].tree) << "\n";
    }
  }
}

int cmd_simulate(const SimulateOpts& opt) {
  std::filesystem::create_directories(opt.out_dir);
  if (opt.threads > 1) {
    std::vector<std::future<void>> jobs;
    std::size_t next = 0;
    while (next < opt.ratios.size()) {
      jobs.clear();
      for (int t = 0; t < opt.threads && next < opt.ratios.size(); ++t, ++next)
        jobs.push_back(std::async(std::launch::async, simulate_one_ratio, opt, opt.ratios[next]));
      for (auto& j : jobs) j.get();
    }
  } else {
    for (const double r : opt.ratios) simulate_one_ratio(opt, r);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

struct SampleOpts {
  int e = 3;
  double sigma = 1.0;
  std::vector<double> center;
  int n = 100;
  int label = 0;
  std::uint64_t seed = 42;
  std::string out;
};

int cmd_sample(const SampleOpts& opt) {
  std::vector<double> center = opt.center;
  if (center.empty()) center.assign(static_cast<std::size_t>(opt.e), 0.0);
  if (center.size() != static_cast<std::size_t>(opt.e))
    throw std::runtime_error("--center must list exactly e coordinates");
  const TropicalLaplace dist{TorusPoint(center), opt.sigma};
  Rng rng = Rng(opt.seed).stream("sample");
  Dataset data;
  for (int i = 0; i < opt.n; ++i)
    data.append(opt.label, sample_tropical_laplace(dist, rng).coords());
  write_dataset_csv(opt.out, data);
  return 0;
}

// ---------------------------------------------------------------------------
// fw
// ---------------------------------------------------------------------------

struct FwOpts {
  std::string data;
  std::string label = "all";
  double step0 = 0.0;
  int max_iters = 1000;
  double tol = 0.0;
  std::string out;
};

int cmd_fw(const FwOpts& opt) {
  Dataset data = read_dataset_csv(opt.data);
  if (opt.label == "0" || opt.label == "1") data = data.with_label(opt.label == "1" ? 1 : 0);
  if (data.n == 0) throw std::runtime_error("no rows selected from " + opt.data);
  const FwConfig cfg{opt.step0, opt.max_iters, opt.tol};
  const FwResult res = fw_solve(PointsView{data.x.data(), data.n, data.e}, cfg);
  json j;
  j["point"] = res.point.coords();
  j["objective"] = res.objective;
  j["certified"] = res.certified;
  j["iterations"] = res.iterations;
  if (!res.gradient.empty()) j["gradient"] = res.gradient;
  j["n"] = data.n;
  j["e"] = data.e;
  auto out = open_out(opt.out);
  out << j.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// fit / predict / evaluate
// ---------------------------------------------------------------------------

struct FitOpts {
  std::string model = "two";
  std::string data;
  std::string out;
  std::string prior = "balanced";
  double step0 = 0.0;
  int max_iters = 1000;
};

int cmd_fit(const FitOpts& opt) {
  const Dataset data = read_dataset_csv(opt.data);
  const bool empirical = opt.prior == "empirical";
  const FwConfig cfg{opt.step0, opt.max_iters, 0.0};
  Model model;
  if (opt.model == "one") model = fit_one_species(data, cfg, empirical);
  else if (opt.model == "two") model = fit_two_species(data, cfg, empirical);
  else model = fit_classical_baseline(data);
  save_model(opt.out, model);
  return 0;
}

struct PredictOpts {
  std::string model_file;
  std::string data;
  std::string out;
};

int cmd_predict(const PredictOpts& opt) {
  const Model model = load_model(opt.model_file);
  const Dataset data = read_dataset_csv(opt.data);
  auto out = open_out(opt.out);
  out << "prob,class\n";
  for (std::size_t i = 0; i < data.n; ++i) {
    const double p = predict_proba(model, data.row(i));
    out << format_double(p) << ',' << classify(model, data.row(i)) << "\n";
  }
  return 0;
}

struct EvaluateOpts {
  std::string model_file;
  std::string data;
  std::string out;
  std::string roc_out;
  std::string pp_out;
  std::string geometry = "tropical";
  std::string law = "laplace";
};

int cmd_evaluate(const EvaluateOpts& opt) {
  const Model model = load_model(opt.model_file);
  const Dataset data = read_dataset_csv(opt.data);

  std::vector<double> scores(data.n);
  for (std::size_t i = 0; i < data.n; ++i) scores[i] = h_model(model, data.row(i));
  const RocCurve roc = roc_and_auc(scores, data.y);

  std::size_t wrong0 = 0, wrong1 = 0, n0 = 0, n1 = 0;
  for (std::size_t i = 0; i < data.n; ++i) {
    const int c = scores[i] >= 0 ? 1 : 0;
    if (data.y[i] == 0) {
      ++n0;
      wrong0 += (c != 0);
    } else {
      ++n1;
      wrong1 += (c != 1);
    }
  }

  json j;
  j["n"] = data.n;
  j["e"] = data.e;
  j["auc"] = roc.auc;
  j["misclassification_rate"] = static_cast<double>(wrong0 + wrong1) / static_cast<double>(data.n);
  j["class0_error"] = static_cast<double>(wrong0) / static_cast<double>(n0);
  j["class1_error"] = static_cast<double>(wrong1) / static_cast<double>(n1);

  const stats::Geometry geometry =
      opt.geometry == "euclidean" ? stats::Geometry::euclidean : stats::Geometry::tropical;
  const stats::RadialLaw law =
      opt.law == "gaussian" ? stats::RadialLaw::gaussian : stats::RadialLaw::laplace;

  std::vector<std::pair<int, GammaFit>> fits;
  if (const auto* two = std::get_if<TwoSpeciesModel>(&model)) {
    j["model"] = "two_species";
    const double d_centers = tropical_distance(two->omega0, two->omega1);
    j["center_distance"] = d_centers;
    j["generalization_upper_bound"] =
        two_species_upper_bound(static_cast<int>(data.e), d_centers, two->sigma);
    fits.emplace_back(0, gamma_fit_diagnostic(data.with_label(0), two->omega0, geometry, law));
    fits.emplace_back(1, gamma_fit_diagnostic(data.with_label(1), two->omega1, geometry, law));
  } else if (const auto* one = std::get_if<OneSpeciesModel>(&model)) {
    j["model"] = "one_species";
    const ErrorIntervals theory =
        one_species_error(static_cast<int>(data.e), one->sigma0, one->sigma1, 0.0);
    j["theory_class0_error"] = theory.class0.first;
    j["theory_class1_error"] = theory.class1.first;
    j["theory_mean_error"] = theory.mean.first;
    fits.emplace_back(0, gamma_fit_diagnostic(data.with_label(0), one->omega, geometry, law));
    fits.emplace_back(1, gamma_fit_diagnostic(data.with_label(1), one->omega, geometry, law));
  } else {
    j["model"] = "classical";
  }

  for (const auto& [cls, fit] : fits) {
    json f;
    f["sigma_hat"] = fit.sigma_hat;
    f["ks"] = fit.ks;
    j["gamma_fit_class" + std::to_string(cls)] = f;
  }

  auto out = open_out(opt.out);
  out << j.dump(2) << "\n";

  if (!opt.roc_out.empty()) {
    auto roc_file = open_out(opt.roc_out);
    roc_file << "threshold,fpr,tpr\n";
    for (std::size_t i = 0; i < roc.fpr.size(); ++i)
      roc_file << format_double(roc.thresholds[i]) << ',' << format_double(roc.fpr[i]) << ','
               << format_double(roc.tpr[i]) << "\n";
  }
  if (!opt.pp_out.empty() && !fits.empty()) {
    auto pp_file = open_out(opt.pp_out);
    pp_file << "class,theoretical,empirical\n";
    for (const auto& [cls, fit] : fits)
      for (const auto& [theory, empirical] : fit.pp)
        pp_file << cls << ',' << format_double(theory) << ',' << format_double(empirical) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// diagnose-chains
// ---------------------------------------------------------------------------

struct DiagnoseOpts {
  std::string chain_a;
  std::string chain_b;
  long long diagnfreq = 100;
  double frac = 0.3;
  double min_freq = 0.1;
  std::string sd = "population";
  std::uint64_t seed = 42;
  std::string out;
};

int cmd_diagnose(const DiagnoseOpts& opt) {
  const TreeChain a = load_chain(opt.chain_a);
  const TreeChain b = load_chain(opt.chain_b);
  const SdConvention convention =
      opt.sd == "sample" ? SdConvention::sample : SdConvention::population;
  const auto rows = diagnose(a, b, opt.diagnfreq, opt.frac, opt.min_freq, convention, opt.seed);
  auto out = open_out(opt.out);
  out << "iteration,asdsf,auc\n";
  for (const auto& row : rows)
    out << row.iteration << ',' << format_double(row.asdsf_value) << ','
        << format_double(row.auc) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tropical logistic regression over phylogenetic tree space"};
  app.require_subcommand(1);

  SimulateOpts sim;
  auto* simulate = app.add_subcommand(
      "simulate", "multispecies-coalescent gene tree datasets for a sweep of R = depth/N");
  simulate->add_option("--leaves,-m", sim.leaves, "leaves per tree")->check(CLI::Range(4, 1000));
  simulate->add_option("--per-class,-n", sim.per_class, "gene trees per class")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--ratios,-R", sim.ratios, "R = species depth / population size values")
      ->expected(-1);
  simulate->add_option("--pop-size,-N", sim.pop_size, "effective population size")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--birth-rate", sim.birth_rate, "Yule birth rate")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "random seed");
  simulate->add_option("--out-dir", sim.out_dir, "output directory")->required();
  simulate->add_flag("--write-newick", sim.write_newick, "also write the species trees");
  simulate->add_option("--threads", sim.threads, "parallel R values")->check(CLI::Range(1, 64));

  SampleOpts smp;
  auto* sample = app.add_subcommand("sample", "draw from the tropical Laplace distribution");
  sample->add_option("--e", smp.e, "dimension")->check(CLI::Range(2, 10000));
  sample->add_option("--sigma", smp.sigma, "dispersion")->check(CLI::PositiveNumber);
  sample->add_option("--center", smp.center, "center coordinates (default the origin)")
      ->expected(-1);
  sample->add_option("--n", smp.n, "number of draws")->check(CLI::PositiveNumber);
  sample->add_option("--label", smp.label, "label column value")->check(CLI::Range(0, 1));
  sample->add_option("--seed", smp.seed, "random seed");
  sample->add_option("--out", smp.out, "output CSV")->required();

  FwOpts fw;
  auto* fwc = app.add_subcommand("fw", "tropical Fermat-Weber point of a dataset");
  fwc->add_option("--data", fw.data, "input CSV")->required();
  fwc->add_option("--label", fw.label, "rows to use: 0, 1 or all")
      ->check(CLI::IsMember({"0", "1", "all"}));
  fwc->add_option("--step0", fw.step0, "initial step (0 = auto)");
  fwc->add_option("--max-iters", fw.max_iters, "iteration budget")->check(CLI::PositiveNumber);
  fwc->add_option("--tol", fw.tol, "early-stop step threshold");
  fwc->add_option("--out", fw.out, "output JSON")->required();

  FitOpts fit;
  auto* fitc = app.add_subcommand("fit", "fit a classifier");
  fitc->add_option("--model", fit.model, "one | two | classical")
      ->check(CLI::IsMember({"one", "two", "classical"}));
  fitc->add_option("--data", fit.data, "training CSV")->required();
  fitc->add_option("--out", fit.out, "model JSON")->required();
  fitc->add_option("--prior", fit.prior, "balanced | empirical")
      ->check(CLI::IsMember({"balanced", "empirical"}));
  fitc->add_option("--step0", fit.step0, "Fermat-Weber initial step (0 = auto)");
  fitc->add_option("--max-iters", fit.max_iters, "Fermat-Weber iteration budget")
      ->check(CLI::PositiveNumber);

  PredictOpts pred;
  auto* predc = app.add_subcommand("predict", "per-row probabilities and classes");
  predc->add_option("--model-file", pred.model_file, "model JSON")->required();
  predc->add_option("--data", pred.data, "input CSV")->required();
  predc->add_option("--out", pred.out, "output CSV")->required();

  EvaluateOpts eval;
  auto* evalc = app.add_subcommand("evaluate", "AUC, error rates, bounds and radius-law fits");
  evalc->add_option("--model-file", eval.model_file, "model JSON")->required();
  evalc->add_option("--data", eval.data, "labeled CSV")->required();
  evalc->add_option("--out", eval.out, "output JSON")->required();
  evalc->add_option("--roc-out", eval.roc_out, "optional ROC points CSV");
  evalc->add_option("--pp-out", eval.pp_out, "optional pp-plot points CSV");
  evalc->add_option("--geometry", eval.geometry, "tropical | euclidean")
      ->check(CLI::IsMember({"tropical", "euclidean"}));
  evalc->add_option("--law", eval.law, "laplace | gaussian")
      ->check(CLI::IsMember({"laplace", "gaussian"}));

  DiagnoseOpts diag;
  auto* diagc = app.add_subcommand("diagnose-chains", "ASDSF and AUC convergence diagnostics");
  diagc->add_option("--chain-a", diag.chain_a, "first chain file (Nexus or Newick lines)")
      ->required();
  diagc->add_option("--chain-b", diag.chain_b, "second chain file")->required();
  diagc->add_option("--diagnfreq", diag.diagnfreq, "checkpoint spacing in iterations")
      ->check(CLI::PositiveNumber);
  diagc->add_option("--frac", diag.frac, "kept tail fraction");
  diagc->add_option("--min-freq", diag.min_freq, "minimum split frequency");
  diagc->add_option("--sd", diag.sd, "population | sample standard deviation")
      ->check(CLI::IsMember({"population", "sample"}));
  diagc->add_option("--seed", diag.seed, "random seed for the train/test split");
  diagc->add_option("--out", diag.out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (sample->parsed()) return cmd_sample(smp);
    if (fwc->parsed()) return cmd_fw(fw);
    if (fitc->parsed()) return cmd_fit(fit);
    if (predc->parsed()) return cmd_predict(pred);
    if (evalc->parsed()) return cmd_evaluate(eval);
    if (diagc->parsed()) return cmd_diagnose(diag);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
