#include "dpkmeans.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include <nlohmann/json.hpp>

#include "dpkm/bench.hpp"
#include "dpkm/pipeline.hpp"

using nlohmann::json;

struct dpkm_dataset {
  dpkm::Dataset data;
};

namespace {

thread_local std::string g_last_error;

dpkm_status fail(dpkm_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json centers_json(const dpkm::CenterSet& centers) {
  json out = json::array();
  for (const auto& c : centers) out.push_back(c);
  return out;
}

template <typename Fn>
dpkm_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return DPKM_OK;
  } catch (const std::invalid_argument& e) {
    return fail(DPKM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const json::exception& e) {
    return fail(DPKM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::runtime_error& e) {
    return fail(DPKM_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(DPKM_ERR_INTERNAL, e.what());
  }
}

}  // namespace

extern "C" {

const char* dpkm_last_error(void) { return g_last_error.c_str(); }

dpkm_status dpkm_dataset_generate(const char* config_json, dpkm_dataset** out) {
  if (!config_json || !out)
    return fail(DPKM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const json cfg = json::parse(config_json);
    dpkm::MixtureConfig mc;
    mc.n = cfg.value("n", mc.n);
    mc.dim = cfg.value("d", mc.dim);
    mc.k = cfg.value("k", mc.k);
    mc.r = cfg.value("r", mc.r);
    mc.seed = cfg.value("seed", mc.seed);
    auto* handle = new dpkm_dataset{dpkm::generate_mixture(mc)};
    *out = handle;
  });
}

dpkm_status dpkm_dataset_load_csv(const char* path, dpkm_dataset** out) {
  if (!path || !out) return fail(DPKM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new dpkm_dataset{dpkm::load_csv(path)}; });
}

dpkm_status dpkm_dataset_save_csv(const dpkm_dataset* d, const char* path) {
  if (!d || !path) return fail(DPKM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { dpkm::save_csv(d->data, path); });
}

size_t dpkm_dataset_size(const dpkm_dataset* d) {
  return d ? d->data.rows.size() : 0;
}

int dpkm_dataset_dim(const dpkm_dataset* d) { return d ? d->data.dim : 0; }

void dpkm_dataset_free(dpkm_dataset* d) { delete d; }

dpkm_status dpkm_run(const dpkm_dataset* d, const char* config_json,
                     char** result_json) {
  if (!d || !config_json || !result_json)
    return fail(DPKM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const json cfg = json::parse(config_json);
    const std::string model = cfg.value("model", "local");
    const std::string variant = cfg.value("variant", "net-tree");
    const int k = cfg.value("k", 2);
    const double eps = cfg.value("epsilon", 1.0);
    const double delta = cfg.value("delta", 1e-6);
    const double alpha = cfg.value("alpha", 1.0);
    const double beta = cfg.value("beta", 0.1);
    const uint64_t seed = cfg.value("seed", 0ull);

    dpkm::ClusteringResult res;
    if (variant == "lsh") {
      dpkm::LshConfig lc;
      lc.k = k;
      lc.epsilon = eps;
      lc.seed = seed;
      lc.exact = model == "exact";
      lc.split_levels = cfg.value("lsh_split_levels", lc.split_levels);
      lc.hist_frac = cfg.value("lsh_hist_frac", lc.hist_frac);
      if (model == "shuffle")
        throw std::invalid_argument("lsh variant supports local/exact models");
      res = dpkm::lsh_private_kmeans(d->data, lc);
    } else if (variant == "net-tree") {
      std::optional<int> dprime;
      std::optional<double> tree_a;
      if (cfg.contains("dprime")) dprime = cfg["dprime"].get<int>();
      if (cfg.contains("tree_a")) tree_a = cfg["tree_a"].get<double>();
      const dpkm::PipelineConfig pc = dpkm::PipelineConfig::derive(
          d->data.rows.size(), d->data.dim, k, eps, delta, alpha, beta, seed,
          dprime, tree_a);
      const dpkm::Model m = model == "local"     ? dpkm::Model::kLocal
                            : model == "shuffle" ? dpkm::Model::kShuffle
                            : model == "exact"   ? dpkm::Model::kExact
                                                 : throw std::invalid_argument(
                                                       "unknown model: " + model);
      res = dpkm::run_pipeline(d->data, pc, m);
    } else {
      throw std::invalid_argument("unknown variant: " + variant);
    }

    json out;
    out["config"] = cfg;
    out["n"] = d->data.rows.size();
    out["d"] = d->data.dim;
    out["centers"] = centers_json(res.centers);
    out["objective"] = res.objective;
    out["normalized_objective"] = res.normalized_objective;
    out["diagnostics"] = json::parse(res.diagnostics_json);
    *result_json = dup_string(out.dump(2) + "\n");
  });
}

dpkm_status dpkm_baseline(const dpkm_dataset* d, const char* config_json,
                          char** result_json) {
  if (!d || !config_json || !result_json)
    return fail(DPKM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const json cfg = json::parse(config_json);
    const int k = cfg.value("k", 2);
    const double eps = cfg.value("epsilon", 1.0);
    const double delta = cfg.value("delta", 1e-6);
    const uint64_t seed = cfg.value("seed", 0ull);
    json out;
    out["config"] = cfg;
    out["n"] = d->data.rows.size();
    out["d"] = d->data.dim;
    out["trivial"] = dpkm::trivial_baseline(d->data);
    out["naive"] = dpkm::naive_baseline(d->data, k, eps, delta, seed);
    *result_json = dup_string(out.dump(2) + "\n");
  });
}

dpkm_status dpkm_sweep(const char* plan_text, char** rows_csv, char** agg_csv) {
  if (!plan_text || !rows_csv || !agg_csv)
    return fail(DPKM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto settings = dpkm::parse_sweep_plan(plan_text);
    const auto rows = dpkm::run_sweep(settings);
    *rows_csv = dup_string(dpkm::sweep_rows_csv(rows));
    *agg_csv = dup_string(dpkm::sweep_aggregate_csv(rows));
  });
}

void dpkm_string_free(char* s) { std::free(s); }

}  // extern "C"
