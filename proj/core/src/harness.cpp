#include "osc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "osc/baselines.hpp"
#include "osc/csv.hpp"
#include "osc/search_tree.hpp"

namespace osc {
namespace {

using nlohmann::json;

const std::vector<std::string> kKnownKeys = {
    "algorithm", "objective", "n",    "trials", "seed",    "noise",  "smoothness",
    "nu1",       "rho",       "c_num", "p",     "c",       "c1",     "delta",
    "b",         "rho_max",   "m",    "checkpoint_stride", "out", "threads"};

template <typename T>
T get_as(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

std::uint64_t get_count(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number_unsigned()) {
    throw ConfigError(std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

void merge(ExperimentConfig& cfg, const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object of key/value pairs");
  std::vector<std::string> unknown;
  for (const auto& [key, _] : doc.items()) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
      unknown.push_back(key);
    }
  }
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (const std::string& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }
  if (doc.contains("algorithm")) cfg.algorithm = get_as<std::string>(doc, "algorithm");
  if (doc.contains("objective")) cfg.objective = get_as<std::string>(doc, "objective");
  if (doc.contains("n")) cfg.n = get_count(doc, "n");
  if (doc.contains("trials")) cfg.trials = static_cast<std::uint32_t>(get_count(doc, "trials"));
  if (doc.contains("seed")) cfg.seed = get_count(doc, "seed");
  if (doc.contains("noise")) cfg.noise = get_as<double>(doc, "noise");
  if (doc.contains("smoothness")) {
    const auto kind = get_as<std::string>(doc, "smoothness");
    if (kind == "exponential" || kind == "exp") {
      cfg.smoothness_kind = SmoothnessFn::Kind::exponential;
    } else if (kind == "polynomial" || kind == "poly") {
      cfg.smoothness_kind = SmoothnessFn::Kind::polynomial;
    } else {
      throw ConfigError("field 'smoothness' must be 'exponential' or 'polynomial', got '" + kind +
                        "'");
    }
  }
  if (doc.contains("nu1")) cfg.nu1 = get_as<double>(doc, "nu1");
  if (doc.contains("rho")) cfg.rho = get_as<double>(doc, "rho");
  if (doc.contains("c_num")) cfg.c_num = get_as<double>(doc, "c_num");
  if (doc.contains("p")) cfg.p = get_as<double>(doc, "p");
  if (doc.contains("c")) cfg.schedule.c = get_as<double>(doc, "c");
  if (doc.contains("c1")) cfg.schedule.c1 = get_as<double>(doc, "c1");
  if (doc.contains("delta")) cfg.schedule.delta = get_as<double>(doc, "delta");
  if (doc.contains("b")) cfg.schedule.b = get_as<double>(doc, "b");
  if (doc.contains("rho_max")) cfg.rho_max = get_as<double>(doc, "rho_max");
  if (doc.contains("m")) cfg.m = static_cast<std::uint32_t>(get_count(doc, "m"));
  if (doc.contains("checkpoint_stride")) cfg.checkpoint_stride = get_count(doc, "checkpoint_stride");
  if (doc.contains("out")) cfg.out = get_as<std::string>(doc, "out");
  if (doc.contains("threads")) cfg.threads = static_cast<unsigned>(get_count(doc, "threads"));
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

bool is_poo(const std::string& algorithm) { return algorithm.rfind("poo-", 0) == 0; }

}  // namespace

SmoothnessFn ExperimentConfig::smoothness() const {
  return smoothness_kind == SmoothnessFn::Kind::exponential ? SmoothnessFn::exponential(nu1, rho)
                                                            : SmoothnessFn::polynomial(c_num, p);
}

NoiseModel ExperimentConfig::noise_model() const { return {noise, schedule.b}; }

std::uint64_t ExperimentConfig::effective_stride() const {
  if (checkpoint_stride != 0) return checkpoint_stride;
  return std::max<std::uint64_t>(1, (n + 199) / 200);
}

const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names = {"vhct", "hct", "thoo", "poo-hct", "poo-vhct"};
  return names;
}

void validate(const ExperimentConfig& cfg) {
  const auto& algos = algorithm_names();
  require(!cfg.algorithm.empty(), "field 'algorithm' is required");
  require(std::find(algos.begin(), algos.end(), cfg.algorithm) != algos.end(),
          "field 'algorithm': unknown algorithm '" + cfg.algorithm + "'");
  require(!cfg.objective.empty(), "field 'objective' is required");
  const auto& objs = objective_names();
  require(std::find(objs.begin(), objs.end(), cfg.objective) != objs.end(),
          "field 'objective': unknown objective '" + cfg.objective + "'");
  require(cfg.n >= 1, "field 'n' must be >= 1");
  require(cfg.trials >= 1, "field 'trials' must be >= 1");
  require(cfg.noise >= 0.0, "field 'noise' must be >= 0");
  require(cfg.schedule.b > 0.0, "field 'b' must be > 0");
  require(cfg.noise <= cfg.schedule.b / 2.0, "field 'noise' must be <= b/2");
  require(cfg.nu1 > 0.0, "field 'nu1' must be > 0");
  require(cfg.rho > 0.0 && cfg.rho < 1.0, "field 'rho' must lie in (0, 1)");
  require(cfg.c_num > 0.0, "field 'c_num' must be > 0");
  require(cfg.p > 0.0, "field 'p' must be > 0");
  require(cfg.schedule.c > 0.0, "field 'c' must be > 0");
  require(cfg.schedule.c1 > 0.0, "field 'c1' must be > 0");
  require(cfg.schedule.delta > 0.0 && cfg.schedule.delta < 1.0, "field 'delta' must lie in (0, 1)");
  require(cfg.rho_max > 0.0 && cfg.rho_max < 1.0, "field 'rho_max' must lie in (0, 1)");
  require(cfg.m >= 1, "field 'm' must be >= 1");
  require(cfg.out.size() > 0, "field 'out' must not be empty");
  if (cfg.algorithm == "thoo" || is_poo(cfg.algorithm)) {
    require(cfg.smoothness_kind == SmoothnessFn::Kind::exponential,
            "field 'smoothness': " + cfg.algorithm + " requires exponential smoothness");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  merge(cfg, parse_json(text));
  validate(cfg);
  return cfg;
}

void apply_overrides(ExperimentConfig& cfg, std::string_view json_object) {
  merge(cfg, parse_json(json_object));
}

std::string to_json(const ExperimentConfig& cfg) {
  json doc = json::object();
  doc["algorithm"] = cfg.algorithm;
  doc["objective"] = cfg.objective;
  doc["n"] = cfg.n;
  doc["trials"] = cfg.trials;
  doc["seed"] = cfg.seed;
  doc["noise"] = cfg.noise;
  doc["smoothness"] =
      cfg.smoothness_kind == SmoothnessFn::Kind::exponential ? "exponential" : "polynomial";
  doc["nu1"] = cfg.nu1;
  doc["rho"] = cfg.rho;
  doc["c_num"] = cfg.c_num;
  doc["p"] = cfg.p;
  doc["c"] = cfg.schedule.c;
  doc["c1"] = cfg.schedule.c1;
  doc["delta"] = cfg.schedule.delta;
  doc["b"] = cfg.schedule.b;
  doc["rho_max"] = cfg.rho_max;
  doc["m"] = cfg.m;
  doc["checkpoint_stride"] = cfg.effective_stride();
  doc["out"] = cfg.out;
  return doc.dump(2) + "\n";
}

std::string config_hash(const ExperimentConfig& cfg) {
  ExperimentConfig canonical = cfg;
  canonical.seed = 0;
  canonical.trials = 1;
  canonical.out = "-";
  canonical.checkpoint_stride = 1;
  canonical.threads = 0;
  const std::string text = to_json(canonical);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::unique_ptr<Optimizer> make_optimizer(const ExperimentConfig& cfg, const Domain& domain) {
  const std::string& a = cfg.algorithm;
  if (a == "vhct") {
    return std::make_unique<SearchTree>(Algorithm::vhct, domain, cfg.smoothness(), cfg.schedule);
  }
  if (a == "hct") {
    return std::make_unique<SearchTree>(Algorithm::hct, domain, cfg.smoothness(), cfg.schedule);
  }
  if (a == "thoo") return std::make_unique<TruncatedHoo>(domain, cfg.smoothness(), cfg.schedule);
  if (is_poo(a)) {
    MetaConfig meta;
    meta.rho_max = cfg.rho_max;
    meta.num_instances = cfg.m;
    meta.nu1 = cfg.nu1;
    meta.base = a == "poo-vhct" ? BaseKind::vhct : BaseKind::hct;
    return std::make_unique<ParallelOptimistic>(meta, domain, cfg.schedule);
  }
  throw ConfigError("unknown algorithm '" + a + "'");
}

RegretTrace run_trial(const ExperimentConfig& cfg, const ObjectiveSpec& objective,
                      std::uint32_t trial) {
  const std::uint64_t seed = cfg.seed + trial;
  auto optimizer = make_optimizer(cfg, objective.domain);
  Rng rng(seed, Stream::noise);
  RegretTrace trace =
      run_trace(*optimizer, objective, cfg.noise_model(), cfg.n, rng, f_star_oracle(objective));
  trace.meta.algorithm = cfg.algorithm;
  trace.meta.seed = seed;
  trace.meta.config_hash = config_hash(cfg);
  return trace;
}

void write_trial_csv(std::ostream& out, const RegretTrace& trace, std::uint32_t trial) {
  const std::size_t dim = trace.records.empty() ? 0 : trace.records.front().x.size();
  out << "trial,t,h,i";
  for (std::size_t k = 1; k <= dim; ++k) out << ",x" << k;
  out << ",reward,f_value,cum_regret,cum_pseudo_regret\n";
  for (const TraceRecord& r : trace.records) {
    out << trial << ',' << r.t << ',' << r.node.h << ',' << r.node.i;
    for (const double v : r.x) out << ',' << format_double(v);
    out << ',' << format_double(r.reward) << ',' << format_double(r.f_value) << ','
        << format_double(r.cum_regret) << ',' << format_double(r.cum_pseudo_regret) << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const AggregateCurve& curve) {
  out << "t,mean_cum_regret,std_cum_regret,mean_avg_regret\n";
  for (const AggregatePoint& p : curve.points) {
    out << p.t << ',' << format_double(p.mean_cum_regret) << ',' << format_double(p.std_cum_regret)
        << ',' << format_double(p.mean_avg_regret) << '\n';
  }
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  file << content;
  file.close();
  if (!file) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::string trial_file_name(std::uint32_t trial) {
  std::ostringstream name;
  name << "trial_" << std::setw(3) << std::setfill('0') << trial << ".csv";
  return name.str();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_files) {
  validate(cfg);
  const ObjectiveSpec objective = make_objective(cfg.objective);
  // Resolve any grid-estimated f* once before the workers start.
  f_star_oracle(objective);

  const std::filesystem::path dir(cfg.out);
  if (write_files) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());
  }

  ExperimentResult result;
  result.traces.resize(cfg.trials);
  std::vector<std::string> errors(cfg.trials);
  std::atomic<std::uint32_t> next{0};

  auto worker = [&] {
    for (std::uint32_t k = next++; k < cfg.trials; k = next++) {
      try {
        result.traces[k] = run_trial(cfg, objective, k);
        if (write_files) {
          std::ostringstream csv;
          write_trial_csv(csv, result.traces[k], k);
          write_file(dir / trial_file_name(k), csv.str());
        }
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };

  unsigned threads = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, cfg.trials);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  }
  for (const std::string& e : errors) {
    if (!e.empty()) throw std::runtime_error(e);
  }

  const std::vector<std::uint64_t> checkpoints = make_checkpoints(cfg.n, cfg.effective_stride());
  result.curve = aggregate(result.traces, checkpoints);

  if (write_files) {
    for (std::uint32_t k = 0; k < cfg.trials; ++k) result.files.push_back(dir / trial_file_name(k));
    std::ostringstream agg;
    write_aggregate_csv(agg, result.curve);
    write_file(dir / "aggregate.csv", agg.str());
    write_file(dir / "config.json", to_json(cfg));
    result.files.push_back(dir / "aggregate.csv");
    result.files.push_back(dir / "config.json");
  }
  return result;
}

}  // namespace osc
