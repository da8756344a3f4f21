#include "slidefft/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "slidefft/bench.hpp"
#include "slidefft/errors.hpp"
#include "slidefft/fft_core.hpp"
#include "slidefft/perf_model.hpp"

namespace slidefft::cli {
namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::int64_t to_int(std::string_view text, std::string_view what) {
  std::int64_t v = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw UsageError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t to_u64(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), last, v);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw UsageError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string json_to_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_array()) {
    std::string joined;
    for (const auto& item : v) {
      if (!joined.empty()) joined += ',';
      joined += json_to_text(item);
    }
    return joined;
  }
  return v.dump();
}

// Raw option text collected from flags, then topped up from the JSON
// config for anything the command line left unset.
struct OptionSet {
  std::vector<std::string> value_names;
  std::vector<std::string> flag_names;
  std::map<std::string, std::string> bound;
  std::map<std::string, bool> bound_flags;
  std::map<std::string, std::string> values;
  std::set<std::string> flags;

  void attach(CLI::App& app) {
    for (const auto& name : value_names) app.add_option("--" + name, bound[name], describe(name));
    for (const auto& name : flag_names) app.add_flag("--" + name, bound_flags[name], describe(name));
  }

  static std::string describe(const std::string& name) {
    static const std::map<std::string, std::string> help = {
        {"seed", "RNG seed for generated inputs (default 0)"},
        {"out", "Write output to this file instead of stdout"},
        {"preset", "Cost preset: cs2-calibrated (default) or pure-packet"},
        {"config", "JSON object of option values; command-line flags win"},
        {"ramp", "Ramp latency in cycles per slide per PE"},
        {"overhead", "Per-element overhead cycles, e.g. 0.3 or 3/10"},
        {"local-memory", "Bytes of local memory per PE"},
        {"packet-bits", "Link word width in bits"},
        {"n", "Transform length, a power of two"},
        {"trials", "Random inputs per length"},
        {"element-bits", "Declared element width: 32 or 64"},
        {"pes", "Comma-separated PE counts, e.g. 8,16,32"},
        {"elements", "Elements per PE, a value or range such as 1..500"},
        {"k", "Wave exponent or range, e.g. 0..10"},
        {"a", "Transfer cycles per datum (rational)"},
        {"b", "Cycles per FLOP (rational)"},
        {"m", "log2 of the transform length"},
        {"threshold", "Margin threshold for the pass/fail check (default 0.05)"},
        {"strategy", "Alignment strategy: overlay (default) or midpoint"},
        {"csv", "Emit CSV instead of a table"},
        {"doubled-transfer", "Charge the write-back slides too (2a per datum)"},
    };
    const auto it = help.find(name);
    return it == help.end() ? std::string() : it->second;
  }

  void collect(const CLI::App& app) {
    for (const auto& name : value_names) {
      if (app.get_option("--" + name)->count() > 0) values[name] = bound[name];
    }
    for (const auto& name : flag_names) {
      if (app.get_option("--" + name)->count() > 0 && bound_flags[name]) flags.insert(name);
    }
    if (auto it = values.find("config"); it != values.end()) merge_config(it->second);
  }

  void merge_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config file '" + path + "': " + e.what());
    }
    if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
    std::set<std::string> given_flags;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const std::string& key = it.key();
      if (std::find(value_names.begin(), value_names.end(), key) != value_names.end()) {
        if (key != "config" && !values.count(key)) values[key] = json_to_text(it.value());
      } else if (std::find(flag_names.begin(), flag_names.end(), key) != flag_names.end()) {
        if (!it.value().is_boolean()) throw UsageError("config key '" + key + "' must be a boolean");
        if (it.value().get<bool>()) flags.insert(key);
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  }

  bool has(const std::string& name) const { return values.count(name) > 0; }
  bool flag(const std::string& name) const { return flags.count(name) > 0; }
  const std::string& get(const std::string& name) const { return values.at(name); }
};

const std::vector<std::string> kCommonValues = {"seed",  "out",      "preset",       "config",
                                                "ramp",  "overhead", "local-memory", "packet-bits"};

OptionSet make_options(std::vector<std::string> extra_values, std::vector<std::string> extra_flags) {
  OptionSet o;
  o.value_names = kCommonValues;
  o.value_names.insert(o.value_names.end(), extra_values.begin(), extra_values.end());
  o.flag_names = {"csv"};
  o.flag_names.insert(o.flag_names.end(), extra_flags.begin(), extra_flags.end());
  return o;
}

std::size_t parse_power_of_two(const std::string& text) {
  const auto v = to_u64(text, "--n");
  if (v < 1 || !is_power_of_two(v)) throw UsageError("--n must be a power of two, got " + text);
  return v;
}

std::uint32_t parse_element_bits(const OptionSet& o, std::uint32_t fallback) {
  if (!o.has("element-bits")) return fallback;
  const auto v = to_int(o.get("element-bits"), "--element-bits");
  if (v != 32 && v != 64) throw UsageError("--element-bits must be 32 or 64");
  return static_cast<std::uint32_t>(v);
}

Rational rational_option(const OptionSet& o, const std::string& name, Rational fallback) {
  if (!o.has(name)) return fallback;
  try {
    return parse_rational(o.get(name));
  } catch (const std::invalid_argument& e) {
    throw UsageError("--" + name + ": " + e.what());
  }
}

MeshConfig mesh_from(const OptionSet& o) {
  CostPreset preset = CostPreset::kCs2Calibrated;
  if (o.has("preset")) {
    const auto p = parse_preset(o.get("preset"));
    if (!p) throw UsageError("unknown preset '" + o.get("preset") + "'");
    preset = *p;
  }
  MeshConfig mc = preset_config(preset);
  if (o.has("ramp")) {
    const auto v = to_int(o.get("ramp"), "--ramp");
    if (v < 0) throw UsageError("--ramp must be non-negative");
    mc.ramp_cycles = static_cast<std::uint32_t>(v);
  }
  mc.per_element_overhead_cycles = rational_option(o, "overhead", mc.per_element_overhead_cycles);
  if (o.has("local-memory")) mc.local_memory_bytes = to_u64(o.get("local-memory"), "--local-memory");
  if (o.has("packet-bits")) {
    mc.packet_bits = static_cast<std::uint32_t>(to_u64(o.get("packet-bits"), "--packet-bits"));
  }
  try {
    mc.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return mc;
}

std::uint64_t seed_from(const OptionSet& o) {
  return o.has("seed") ? to_u64(o.get("seed"), "--seed") : 0;
}

CostModel model_from(const OptionSet& o) {
  CostModel model;
  model.a = rational_option(o, "a", model.a);
  model.b = rational_option(o, "b", model.b);
  model.doubled_transfer = o.flag("doubled-transfer");
  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return model;
}

int cmd_verify(const OptionSet& o, std::ostream& out) {
  VerifyConfig cfg;
  if (o.has("n")) cfg.max_n = parse_power_of_two(o.get("n"));
  if (cfg.max_n < 2) throw UsageError("verify needs --n >= 2");
  cfg.seed = seed_from(o);
  if (o.has("trials")) {
    const auto t = to_int(o.get("trials"), "--trials");
    if (t < 1) throw UsageError("--trials must be positive");
    cfg.trials = static_cast<int>(t);
  }
  cfg.element_bits = parse_element_bits(o, cfg.element_bits);

  const auto smoke = fft_serial(SampleVector::impulse(8));
  std::vector<SuiteResult> results = run_verify(cfg);

  bool all = true;
  for (const auto& r : results) all = all && r.pass;

  if (o.flag("csv")) {
    out << "suite,status,detail\n";
    for (const auto& r : results) {
      out << r.name << ',' << (r.pass ? "pass" : "fail") << ',' << r.detail << '\n';
    }
  } else {
    out << "impulse n=8 spectrum:";
    for (const auto& v : smoke) out << ' ' << v.real() << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << 'i';
    out << '\n';
    for (const auto& r : results) {
      out << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(18) << r.name << r.detail << '\n';
    }
    out << (all ? "all suites passed" : "verification FAILED") << '\n';
  }
  return all ? kSuccess : kVerificationFailure;
}

int cmd_bench_slide(const OptionSet& o, std::ostream& out) {
  SlideBenchConfig cfg;
  cfg.mesh = mesh_from(o);
  if (o.has("pes")) cfg.pe_counts = parse_list(o.get("pes"));
  if (o.has("elements")) {
    const auto [lo, hi] = parse_range(o.get("elements"));
    if (lo < 1) throw UsageError("--elements must start at 1 or more");
    cfg.elements_min = static_cast<std::size_t>(lo);
    cfg.elements_max = static_cast<std::size_t>(hi);
  }
  cfg.element_bits = parse_element_bits(o, cfg.element_bits);
  for (auto p : cfg.pe_counts) {
    if (p == 0) throw UsageError("--pes entries must be positive");
  }

  const auto records = bench_slide(cfg);
  if (o.flag("csv")) {
    write_csv(out, records);
  } else {
    out << std::left << std::setw(10) << "pes" << std::setw(10) << "E/PE" << std::setw(12)
        << "elements" << std::setw(12) << "cycles" << std::setw(14) << "cycles/elem"
        << "status\n";
    for (const auto& r : records) {
      out << std::left << std::setw(10) << r.pe_count << std::setw(10) << r.elements_per_pe
          << std::setw(12) << r.total_elements << std::setw(12) << r.total_cycles << std::setw(14)
          << fixed6(r.cycles_per_element()) << r.status << '\n';
    }
  }
  bool any_ok = false;
  for (const auto& r : records) any_ok = any_ok || r.status == "ok";
  return any_ok || records.empty() ? kSuccess : kInfeasible;
}

int cmd_bench_fft(const OptionSet& o, std::ostream& out) {
  FftBenchConfig cfg;
  if (o.has("n")) cfg.n = parse_power_of_two(o.get("n"));
  if (cfg.n < 2) throw UsageError("bench-fft needs --n >= 2");
  const int m = log2_exact(cfg.n);
  cfg.k_min = 0;
  cfg.k_max = m;
  if (o.has("k")) {
    const auto [lo, hi] = parse_range(o.get("k"));
    if (lo < 0 || hi > m) throw UsageError("--k must lie within [0, " + std::to_string(m) + "]");
    cfg.k_min = static_cast<int>(lo);
    cfg.k_max = static_cast<int>(hi);
  }
  cfg.element_bits = parse_element_bits(o, cfg.element_bits);
  cfg.mesh = mesh_from(o);
  cfg.model = model_from(o);
  cfg.seed = seed_from(o);
  if (o.has("strategy")) {
    if (o.get("strategy") == "overlay") {
      cfg.strategy = AlignmentStrategy::kOverlay;
    } else if (o.get("strategy") == "midpoint") {
      cfg.strategy = AlignmentStrategy::kMidpoint;
    } else {
      throw UsageError("--strategy must be overlay or midpoint");
    }
  }

  const auto rows = bench_fft(cfg);
  if (o.flag("csv")) {
    std::vector<BenchRecord> records;
    for (const auto& r : rows) records.push_back(r.record);
    write_csv(out, records);
  } else {
    out << std::left << std::setw(4) << "k" << std::setw(7) << "pes" << std::setw(8) << "E/PE"
        << std::setw(11) << "wall" << std::setw(11) << "compute" << std::setw(11) << "transfer"
        << std::setw(9) << "ramp" << std::setw(11) << "eta_meas" << std::setw(11) << "eta_pred"
        << std::setw(11) << "deviation" << std::setw(12) << "moved" << std::setw(12)
        << "geometric" << "status\n";
    for (const auto& r : rows) {
      out << std::left << std::setw(4) << r.k << std::setw(7) << r.record.pe_count << std::setw(8)
          << r.record.elements_per_pe << std::setw(11) << r.record.total_cycles << std::setw(11)
          << r.ledger.compute_cycles << std::setw(11) << r.ledger.transfer_cycles << std::setw(9)
          << r.ledger.ramp_cycles << std::setw(11) << fixed6(r.record.eta_measured)
          << std::setw(11) << fixed6(r.record.eta_predicted) << std::setw(11)
          << fixed6(r.deviation) << std::setw(12) << r.budget.implementation_elements
          << std::setw(12) << r.budget.geometric_estimate << r.record.status << '\n';
    }
  }
  bool any_ok = false;
  for (const auto& r : rows) any_ok = any_ok || r.record.status == "ok";
  return any_ok ? kSuccess : kInfeasible;
}

int cmd_predict(const OptionSet& o, std::ostream& out) {
  const CostModel model = model_from(o);
  int m = 0;
  if (o.has("m")) {
    const auto v = to_int(o.get("m"), "--m");
    if (v < 1 || v > 40) throw UsageError("--m must lie in [1, 40]");
    m = static_cast<int>(v);
  }
  if (o.has("n")) {
    const int from_n = log2_exact(parse_power_of_two(o.get("n")));
    if (m != 0 && from_n != m) throw UsageError("--n and --m disagree");
    m = from_n;
  }
  if (m < 1) throw UsageError("predict needs --m (or --n) with m >= 1");
  double threshold = kDefaultMarginThreshold;
  if (o.has("threshold")) threshold = to_double(rational_option(o, "threshold", Rational(0)));

  const std::size_t n = std::size_t{1} << m;
  const auto report = predict_efficiency(model, n, m);
  const auto margin = check_margin(model, m, threshold);
  const char* status = margin.pass ? "pass" : "fail";

  if (o.flag("csv")) {
    out << "a,b,m,alpha,eta,eta_first_order,margin,margin_status,flops\n"
        << to_string(model.a) << ',' << to_string(model.b) << ',' << m << ','
        << fixed6(to_double(report.alpha)) << ',' << fixed6(report.eta) << ','
        << fixed6(report.eta_first_order) << ',' << fixed6(to_double(margin.margin)) << ','
        << status << ',' << report.flops << '\n';
  } else {
    out << "a=" << to_string(model.a) << '\n'
        << "b=" << to_string(model.b) << '\n'
        << "m=" << m << '\n'
        << "doubled_transfer=" << (model.doubled_transfer ? "true" : "false") << '\n'
        << "alpha=" << fixed6(to_double(report.alpha)) << '\n'
        << "eta=" << fixed6(report.eta) << '\n'
        << "eta_exact=" << to_string(report.eta_exact) << '\n'
        << "eta_first_order=" << fixed6(report.eta_first_order) << '\n'
        << "margin=" << fixed6(to_double(margin.margin)) << ' ' << status << '\n'
        << "flops=" << report.flops << '\n';
  }
  return kSuccess;
}

}  // namespace

std::pair<std::int64_t, std::int64_t> parse_range(std::string_view text) {
  std::size_t sep = text.find("..");
  std::size_t skip = 2;
  if (sep == std::string_view::npos) {
    sep = text.find('-', 1);
    skip = 1;
  }
  if (sep == std::string_view::npos) {
    const auto v = to_int(text, "range");
    return {v, v};
  }
  const auto lo = to_int(text.substr(0, sep), "range start");
  const auto hi = to_int(text.substr(sep + skip), "range end");
  if (hi < lo) throw UsageError("range end precedes start in '" + std::string(text) + "'");
  return {lo, hi};
}

std::vector<std::size_t> parse_list(std::string_view text) {
  std::vector<std::size_t> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    out.push_back(static_cast<std::size_t>(to_u64(item, "list entry")));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Slide FFT mesh simulator"};
  app.require_subcommand(1);

  auto verify_opts = make_options({"n", "trials", "element-bits"}, {});
  auto slide_opts = make_options({"pes", "elements", "element-bits"}, {});
  auto fft_opts = make_options({"n", "k", "element-bits", "a", "b", "strategy"}, {"doubled-transfer"});
  auto predict_opts = make_options({"a", "b", "m", "n", "threshold"}, {"doubled-transfer"});

  auto* verify = app.add_subcommand("verify", "Run the oracle and property suites");
  auto* bench_slide_cmd = app.add_subcommand("bench-slide", "Sweep single-hop slides");
  auto* bench_fft_cmd = app.add_subcommand("bench-fft", "Sweep slide FFT over wave lengths");
  auto* predict = app.add_subcommand("predict", "Evaluate the closed-form efficiency model");
  verify_opts.attach(*verify);
  slide_opts.attach(*bench_slide_cmd);
  fft_opts.attach(*bench_fft_cmd);
  predict_opts.attach(*predict);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  struct Dispatch {
    CLI::App* app;
    OptionSet* options;
    int (*fn)(const OptionSet&, std::ostream&);
  };
  const Dispatch table[] = {
      {verify, &verify_opts, cmd_verify},
      {bench_slide_cmd, &slide_opts, cmd_bench_slide},
      {bench_fft_cmd, &fft_opts, cmd_bench_fft},
      {predict, &predict_opts, cmd_predict},
  };

  for (const auto& d : table) {
    if (!d.app->parsed()) continue;
    try {
      d.options->collect(*d.app);
      std::ostringstream buffer;
      const int status = d.fn(*d.options, buffer);
      if (d.options->has("out")) {
        std::ofstream file(d.options->get("out"), std::ios::binary);
        if (!file) throw UsageError("cannot write '" + d.options->get("out") + "'");
        file << buffer.str();
      } else {
        out << buffer.str();
      }
      return status;
    } catch (const CapacityExceeded& e) {
      err << "error: " << e.what() << '\n';
      return kInfeasible;
    } catch (const OffGridError& e) {
      err << "error: " << e.what() << '\n';
      return kInfeasible;
    } catch (const std::invalid_argument& e) {
      err << "usage error: " << e.what() << '\n';
      return kUsageError;
    }
  }
  return kUsageError;
}

}  // namespace slidefft::cli
