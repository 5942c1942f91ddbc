// SPDX-License-Identifier: Apache-2.0
//
// metriclab: distances between finite metric spaces, reduction gadgets,
// distance games and randomized bound suites, all behind one binary.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "metriclab/games.hpp"
#include "metriclab/gh.hpp"
#include "metriclab/hausdorff.hpp"
#include "metriclab/hl.hpp"
#include "metriclab/json_io.hpp"
#include "metriclab/random_instances.hpp"
#include "metriclab/reductions.hpp"
#include "metriclab/suites.hpp"

namespace {

using metriclab::Error;
using metriclab::io::json;

constexpr int kExitFailures = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitBudget = 3;

struct Options {
  std::string mode = "float";
  uint64_t seed = 0;
  std::optional<uint64_t> budget;
  bool requireExact = false;
  bool parallel = false;
  std::string output;
  std::string report;
};

bool rationalMode(const Options& opt) {
  if (const char* env = std::getenv("METRICLAB_MODE")) return std::string(env) == "rational";
  return opt.mode == "rational";
}

void emit(const json& doc, const std::string& path) {
  if (path.empty())
    std::cout << doc.dump(2) << "\n";
  else
    metriclab::io::write_json_file(path, doc);
}

std::vector<int> parseIndexList(const std::string& s) {
  std::vector<int> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    out.push_back(std::stoi(s.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

int cmdDist(const std::string& kind, const std::string& fileA, const std::string& fileB,
            const std::string& subsetA, const std::string& subsetB, double eps,
            const Options& opt) {
  metriclab::SearchOptions search;
  search.budget = opt.budget;
  search.parallel = opt.parallel;

  json doc;
  bool exact = true;
  if (kind == "hausdorff") {
    if (rationalMode(opt)) {
      auto M = metriclab::io::rational_space_from_json(metriclab::io::read_json_file(fileA));
      doc["value"] =
          metriclab::hausdorff(M, parseIndexList(subsetA), parseIndexList(subsetB)).toString();
    } else {
      auto M = metriclab::io::space_from_json(metriclab::io::read_json_file(fileA));
      doc["value"] = metriclab::hausdorff(M, parseIndexList(subsetA), parseIndexList(subsetB));
    }
  } else if (kind == "hl") {
    auto M = metriclab::io::space_from_json(metriclab::io::read_json_file(fileA));
    auto N = metriclab::io::space_from_json(metriclab::io::read_json_file(fileB));
    auto res = metriclab::hl_close(M, N, eps);
    doc["eps"] = eps;
    doc["witness_found"] = res.witness.has_value();
    doc["complete"] = res.complete;
    if (res.witness) doc["witness"] = metriclab::io::witness_to_json(*res.witness);
  } else if (kind == "gh" || kind == "gh-bij") {
    if (rationalMode(opt)) {
      auto M = metriclab::io::rational_space_from_json(metriclab::io::read_json_file(fileA));
      auto N = metriclab::io::rational_space_from_json(metriclab::io::read_json_file(fileB));
      auto cert = kind == "gh" ? metriclab::gh_exact(M, N, search)
                               : metriclab::gh_bijection(M, N, search);
      doc = metriclab::io::certificate_to_json(cert);
      exact = cert.exact;
    } else {
      auto M = metriclab::io::space_from_json(metriclab::io::read_json_file(fileA));
      auto N = metriclab::io::space_from_json(metriclab::io::read_json_file(fileB));
      auto cert = kind == "gh" ? metriclab::gh_exact(M, N, search)
                               : metriclab::gh_bijection(M, N, search);
      doc = metriclab::io::certificate_to_json(cert);
      exact = cert.exact;
    }
  } else if (kind == "lip") {
    auto M = metriclab::io::space_from_json(metriclab::io::read_json_file(fileA));
    auto N = metriclab::io::space_from_json(metriclab::io::read_json_file(fileB));
    auto cert = metriclab::lipschitz_exact(M, N, search);
    doc = metriclab::io::certificate_to_json(cert);
    exact = cert.exact;
  } else {
    throw Error("UnknownDistance", "dist kind must be gh|gh-bij|lip|hausdorff|hl");
  }
  emit(doc, opt.output);
  if (opt.requireExact && !exact) return kExitBudget;
  return 0;
}

int cmdReduce(const std::string& gadget, const std::string& input, double p, int copies, int kMin,
              int kMax, const std::string& paramsFile, const Options& opt) {
  json provenance;
  provenance["construction"] = gadget;
  metriclab::MetricSpace out;
  if (gadget == "separate") {
    auto M = metriclab::io::space_from_json(metriclab::io::read_json_file(input));
    out = metriclab::reductions::separate(M, {p, copies});
    provenance["p"] = p;
    provenance["copies"] = copies;
  } else if (gadget == "bound") {
    auto M = metriclab::io::space_from_json(metriclab::io::read_json_file(input));
    out = metriclab::reductions::bound(M);
  } else if (gadget == "lip-gadget" || gadget == "hl-gadget") {
    auto M = metriclab::io::space_from_json(metriclab::io::read_json_file(input));
    metriclab::reductions::LevelGadgetParams params{kMin, gadget == "hl-gadget" ? 0 : kMax};
    out = gadget == "hl-gadget" ? metriclab::reductions::hl_gadget(M, params)
                                : metriclab::reductions::lipschitz_gadget(M, params);
    provenance["kMin"] = params.kMin;
    provenance["kMax"] = params.kMax;
  } else if (gadget == "bm-gadget" || gadget == "kadets-gadget") {
    auto nu = metriclab::io::norm_from_json(metriclab::io::read_json_file(input));
    if (paramsFile.empty()) throw Error("MissingParams", "--params <file> is required");
    json pj = metriclab::io::read_json_file(paramsFile);
    if (gadget == "bm-gadget") {
      metriclab::reductions::BmGadgetParams params;
      params.vectors = pj["vectors"].get<std::vector<std::vector<double>>>();
      if (pj.contains("c")) params.c = pj["c"].get<std::vector<double>>();
      if (pj.contains("rationals"))
        for (const auto& r : pj["rationals"])
          params.rationals.push_back({r[0].get<long long>(), r[1].get<long long>()});
      out = metriclab::reductions::bm_gadget(nu, params);
    } else {
      metriclab::reductions::KadetsGadgetParams params;
      params.spherePoints = pj["spherePoints"].get<std::vector<std::vector<double>>>();
      params.families = pj["families"].get<std::vector<std::vector<int>>>();
      out = metriclab::reductions::kadets_gadget(nu, params);
    }
    provenance["params"] = pj;
  } else {
    throw Error("UnknownGadget",
                "gadget must be separate|bound|lip-gadget|hl-gadget|bm-gadget|kadets-gadget");
  }
  json doc = metriclab::io::space_to_json(out);
  doc["provenance"] = provenance;
  emit(doc, opt.output);
  return 0;
}

int cmdGame(const std::string& fileA, const std::string& fileB, int depth, bool duality,
            const Options& opt) {
  auto M = metriclab::io::space_from_json(metriclab::io::read_json_file(fileA));
  auto N = metriclab::io::space_from_json(metriclab::io::read_json_file(fileB));
  json doc;
  if (duality) {
    auto rep = metriclab::games::duality_check(M, N);
    doc["value"] = rep.stabilizedValue;
    doc["depth"] = rep.stabilizationDepth;
    doc["stable"] = true;
    doc["matchesGH"] = rep.matchesGH;
    doc["gh"] = rep.ghValue;
  } else {
    metriclab::games::GameSolver solver(M, N);
    double v = solver.value({}, {}, depth);
    double vNext = solver.value({}, {}, depth + 1);
    doc["value"] = v;
    doc["depth"] = depth;
    doc["stable"] = std::fabs(v - vNext) <= 1e-12;
  }
  emit(doc, opt.output);
  return 0;
}

int cmdSuite(const std::string& name, int trials, const Options& opt) {
  auto rep = metriclab::suites::run_suite(name, trials, opt.seed);
  json doc = metriclab::suites::report_to_json(rep);
  if (!opt.report.empty()) metriclab::io::write_json_file(opt.report, doc);
  std::cout << rep.suite << ": " << rep.failures.size() << " failures in " << rep.trials
            << " trials, worst margin " << rep.worstMargin << "\n";
  return rep.failures.empty() ? 0 : kExitFailures;
}

int cmdGen(int points, double lo, double hi, const Options& opt) {
  if (rationalMode(opt)) {
    auto m = metriclab::random_rational_space(points, metriclab::Rat::parse(std::to_string(lo)),
                                              metriclab::Rat::parse(std::to_string(hi)), 4,
                                              opt.seed);
    emit(metriclab::io::space_to_json(m), opt.output);
  } else {
    auto m = metriclab::random_space({points, lo, hi, opt.seed});
    emit(metriclab::io::space_to_json(m), opt.output);
  }
  return 0;
}

int cmdValidate(const std::string& file, const Options& opt) {
  json doc = metriclab::io::read_json_file(file);
  json out;
  if (rationalMode(opt)) {
    auto m = metriclab::io::rational_space_from_json(doc);
    out["valid"] = true;
    out["n"] = m.n;
  } else {
    auto m = metriclab::io::space_from_json(doc);
    out["valid"] = true;
    out["n"] = m.n;
  }
  emit(out, opt.output);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"distances between finite metric spaces, reduction gadgets and distance games"};
  app.require_subcommand(1);

  Options opt;
  std::string fileA, fileB, kind, gadget, suiteName, subsetA, subsetB, paramsFile;
  double eps = 0.1, p = 1.0, lo = 1.0, hi = 2.0;
  int copies = 2, kMin = 0, kMax = 0, depth = 4, trials = 10, points = 4;
  uint64_t budgetFlag = 0;
  bool duality = false;

  auto addMode = [&](CLI::App* sub) {
    sub->add_option("--mode", opt.mode, "numeric mode: float|rational")
        ->check(CLI::IsMember({"float", "rational"}));
  };
  auto addSeed = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed, "64-bit seed for all randomness");
  };

  auto* validate = app.add_subcommand("validate", "validate a metric-space document");
  validate->add_option("file", fileA)->required();
  validate->add_option("-o", opt.output, "write the result to a file");
  addMode(validate);

  auto* dist = app.add_subcommand("dist", "compute a distance certificate");
  dist->add_option("kind", kind, "gh|gh-bij|lip|hausdorff|hl")->required();
  dist->add_option("A", fileA)->required();
  dist->add_option("B", fileB);
  dist->add_option("--eps", eps, "closeness parameter for hl");
  dist->add_option("--budget", budgetFlag, "node limit for the search");
  dist->add_flag("--require-exact", opt.requireExact, "exit 3 unless the search completed");
  dist->add_flag("--parallel", opt.parallel, "OpenMP search (float mode)");
  dist->add_option("--subset-a", subsetA, "comma-separated indices (hausdorff)");
  dist->add_option("--subset-b", subsetB, "comma-separated indices (hausdorff)");
  dist->add_option("-o", opt.output);
  addMode(dist);

  auto* reduce = app.add_subcommand("reduce", "construct a reduction gadget");
  reduce->add_option("gadget", gadget, "separate|bound|lip-gadget|hl-gadget|bm-gadget|kadets-gadget")
      ->required();
  reduce->add_option("input", fileA)->required();
  reduce->add_option("--p", p, "added separation (separate)");
  reduce->add_option("--copies", copies, "copies per point (separate)");
  reduce->add_option("--kmin", kMin, "lowest level (lip/hl gadget)");
  reduce->add_option("--kmax", kMax, "highest level (lip gadget)");
  reduce->add_option("--params", paramsFile, "params document (bm/kadets gadget)");
  reduce->add_option("-o", opt.output);

  auto* game = app.add_subcommand("game", "finite-depth distance game");
  game->add_option("A", fileA)->required();
  game->add_option("B", fileB)->required();
  game->add_option("--depth", depth);
  game->add_flag("--duality", duality, "expand until stable and compare with gh");
  game->add_option("-o", opt.output);

  auto* suite = app.add_subcommand("suite", "run a randomized bound suite");
  suite->add_option("name", suiteName)->required();
  suite->add_option("--trials", trials);
  suite->add_option("--report", opt.report, "write the JSON report here");
  addSeed(suite);

  auto* gen = app.add_subcommand("gen", "generate a random valid instance");
  gen->add_option("--points", points);
  gen->add_option("--lo", lo);
  gen->add_option("--hi", hi);
  gen->add_option("-o", opt.output);
  addSeed(gen);
  addMode(gen);

  CLI11_PARSE(app, argc, argv);
  if (dist->count("--budget")) opt.budget = budgetFlag;

  try {
    if (validate->parsed()) return cmdValidate(fileA, opt);
    if (dist->parsed()) return cmdDist(kind, fileA, fileB, subsetA, subsetB, eps, opt);
    if (reduce->parsed()) return cmdReduce(gadget, fileA, p, copies, kMin, kMax, paramsFile, opt);
    if (game->parsed()) return cmdGame(fileA, fileB, depth, duality, opt);
    if (suite->parsed()) return cmdSuite(suiteName, trials, opt);
    if (gen->parsed()) return cmdGen(points, lo, hi, opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return 0;
}
