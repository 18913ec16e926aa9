// Command-line front end for the dpkmeans library. Talks to the library
// exclusively through the C interface.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dpkmeans.h"

using nlohmann::json;

namespace {

[[noreturn]] void die(const std::string& context) {
  std::cerr << "error: " << context << ": " << dpkm_last_error() << "\n";
  std::exit(1);
}

void write_file(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    std::exit(1);
  }
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    std::exit(1);
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  void report(const std::string& phase) const {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    std::cerr << phase << ": " << ms << " ms\n";
  }
};

std::string gnuplot_script(const std::string& agg_csv_path) {
  std::ostringstream os;
  os << "# gnuplot script for sweep aggregates\n"
     << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set logscale x\n"
     << "set xlabel 'n'\n"
     << "set ylabel 'normalized objective'\n"
     << "plot '" << agg_csv_path
     << "' using 1:11 with linespoints title 'objective', \\\n"
     << "     '" << agg_csv_path
     << "' using 1:13 with lines title 'trivial baseline'\n";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-round differentially private k-means benchmark tool"};
  app.require_subcommand(1);

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "Generate a synthetic mixture dataset");
  uint64_t g_n = 1000, g_seed = 0;
  int g_d = 10, g_k = 4;
  double g_r = 10.0;
  std::string g_out = "-";
  gen->add_option("--n", g_n, "number of points");
  gen->add_option("--d", g_d, "dimension");
  gen->add_option("--k", g_k, "number of mixture centers");
  gen->add_option("--r", g_r, "separation scale (> 2)");
  gen->add_option("--seed", g_seed, "random seed");
  gen->add_option("--out", g_out, "output CSV path")->required();

  // ---- run ----
  auto* run = app.add_subcommand("run", "Run one private clustering");
  std::string r_input, r_out = "-", r_model = "local", r_variant = "net-tree";
  int r_k = 2, r_dprime = 0;
  double r_eps = 1.0, r_delta = 1e-6, r_alpha = 1.0, r_beta = 0.1, r_tree_a = 0.0;
  uint64_t r_seed = 0;
  run->add_option("--input", r_input, "input CSV dataset")->required();
  run->add_option("--model", r_model, "local | shuffle | exact")
      ->check(CLI::IsMember({"local", "shuffle", "exact"}));
  run->add_option("--variant", r_variant, "net-tree | lsh")
      ->check(CLI::IsMember({"net-tree", "lsh"}));
  run->add_option("--k", r_k, "number of centers");
  run->add_option("--epsilon", r_eps, "privacy budget");
  run->add_option("--delta", r_delta, "privacy failure probability");
  run->add_option("--alpha", r_alpha, "multiplicative accuracy target");
  run->add_option("--beta", r_beta, "failure probability");
  run->add_option("--seed", r_seed, "random seed");
  run->add_option("--dprime", r_dprime, "projection dimension override");
  run->add_option("--tree-a", r_tree_a, "tree expansion parameter override");
  run->add_option("--out", r_out, "output JSON path");

  // ---- sweep ----
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep plan");
  std::string s_plan, s_rows = "sweep_runs.csv", s_agg = "sweep_agg.csv",
              s_plot;
  sweep->add_option("--plan", s_plan, "plan file (key=v1,v2,... lines)")
      ->required();
  sweep->add_option("--out-rows", s_rows, "per-run CSV output");
  sweep->add_option("--out-agg", s_agg, "aggregate CSV output");
  sweep->add_option("--gnuplot", s_plot, "also write a gnuplot script here");

  // ---- baseline ----
  auto* base = app.add_subcommand("baseline", "Trivial and noised baselines");
  std::string b_input, b_out = "-";
  int b_k = 2;
  double b_eps = 1.0, b_delta = 1e-6;
  uint64_t b_seed = 0;
  base->add_option("--input", b_input, "input CSV dataset")->required();
  base->add_option("--k", b_k, "number of centers");
  base->add_option("--epsilon", b_eps, "privacy budget");
  base->add_option("--delta", b_delta, "privacy failure probability");
  base->add_option("--seed", b_seed, "random seed");
  base->add_option("--out", b_out, "output JSON path");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    Timer t;
    json cfg = {{"n", g_n}, {"d", g_d}, {"k", g_k}, {"r", g_r}, {"seed", g_seed}};
    dpkm_dataset* data = nullptr;
    if (dpkm_dataset_generate(cfg.dump().c_str(), &data) != DPKM_OK)
      die("gen");
    if (dpkm_dataset_save_csv(data, g_out.c_str()) != DPKM_OK) die("save");
    dpkm_dataset_free(data);
    t.report("gen");
    return 0;
  }

  if (run->parsed()) {
    Timer t;
    dpkm_dataset* data = nullptr;
    if (dpkm_dataset_load_csv(r_input.c_str(), &data) != DPKM_OK) die("load");
    t.report("load");
    json cfg = {{"model", r_model}, {"variant", r_variant}, {"k", r_k},
                {"epsilon", r_eps}, {"delta", r_delta},     {"alpha", r_alpha},
                {"beta", r_beta},   {"seed", r_seed}};
    if (r_dprime > 0) cfg["dprime"] = r_dprime;
    if (r_tree_a > 0.0) cfg["tree_a"] = r_tree_a;
    char* result = nullptr;
    Timer t2;
    if (dpkm_run(data, cfg.dump().c_str(), &result) != DPKM_OK) die("run");
    t2.report("cluster");
    write_file(r_out, result);
    dpkm_string_free(result);
    dpkm_dataset_free(data);
    return 0;
  }

  if (sweep->parsed()) {
    Timer t;
    const std::string plan = read_file(s_plan);
    char* rows = nullptr;
    char* agg = nullptr;
    if (dpkm_sweep(plan.c_str(), &rows, &agg) != DPKM_OK) die("sweep");
    write_file(s_rows, rows);
    write_file(s_agg, agg);
    if (!s_plot.empty()) write_file(s_plot, gnuplot_script(s_agg));
    dpkm_string_free(rows);
    dpkm_string_free(agg);
    t.report("sweep");
    return 0;
  }

  if (base->parsed()) {
    Timer t;
    dpkm_dataset* data = nullptr;
    if (dpkm_dataset_load_csv(b_input.c_str(), &data) != DPKM_OK) die("load");
    json cfg = {{"k", b_k}, {"epsilon", b_eps}, {"delta", b_delta},
                {"seed", b_seed}};
    char* result = nullptr;
    if (dpkm_baseline(data, cfg.dump().c_str(), &result) != DPKM_OK)
      die("baseline");
    write_file(b_out, result);
    dpkm_string_free(result);
    dpkm_dataset_free(data);
    t.report("baseline");
    return 0;
  }
  return 0;
}
