#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cstar/interval.hpp"
#include "cstar/macros.hpp"
#include "cstar/parse.hpp"
#include "cstar/registry.hpp"
#include "cstar/repsearch.hpp"
#include "cstar/tietze.hpp"

using namespace cstar;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kFailed = 1, kUsage = 2 };

// Thrown for problems that map to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sha256_file(const std::string& path) {
  std::string data = read_file(path);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

struct Run {
  std::string command;
  std::vector<std::string> argv;
  std::vector<std::string> inputs;
  json config = json::object();
  std::string registry_path;
  bool json_out = false;
  std::string manifest_path;

  void input(const std::string& path) {
    if (std::find(inputs.begin(), inputs.end(), path) == inputs.end()) inputs.push_back(path);
  }

  json manifest(int exit_code, const std::string& summary) const {
    json m;
    m["tool"] = "cstar";
    m["version"] = kVersion;
    m["command"] = command;
    m["argv"] = argv;
    json files = json::array();
    for (const auto& p : inputs) files.push_back({{"path", p}, {"sha256", sha256_file(p)}});
    m["inputs"] = files;
    m["config"] = config;
    m["registry"] = {{"path", registry_path},
                     {"functions", FunctionRegistry::active().fingerprint()},
                     {"lemmas", LemmaRegistry::active().fingerprint()}};
    m["outcome"] = {{"exit", exit_code}, {"summary", summary}};
    return m;
  }

  int finish(int exit_code, const std::string& summary, const json& result, const std::string& text) const {
    json m = manifest(exit_code, summary);
    if (json_out) {
      json out;
      out["command"] = command;
      out["result"] = result;
      out["manifest"] = m;
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << text;
      if (!text.empty() && text.back() != '\n') std::cout << "\n";
    }
    if (!manifest_path.empty()) {
      std::ofstream f(manifest_path);
      if (!f) throw UsageError("cannot write manifest '" + manifest_path + "'");
      f << m.dump(2) << "\n";
    }
    return exit_code;
  }
};

void require_file(const std::string& path) {
  if (!fs::is_regular_file(path)) throw UsageError("no such file: " + path);
}

Presentation load_pres(Run& run, const std::string& path, bool lenient = false) {
  require_file(path);
  run.input(path);
  PresentationParseOptions opts;
  opts.lenient = lenient;
  return load_presentation(path, opts);
}

Derivation load_drv(Run& run, const std::string& path) {
  require_file(path);
  run.input(path);
  Derivation d = load_derivation(path);
  fs::path base = fs::path(path).parent_path();
  if (!d.start_path.empty()) run.input((base / d.start_path).string());
  if (!d.end_path.empty()) run.input((base / d.end_path).string());
  return d;
}

std::string print_parts(const std::vector<Presentation>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    out += "# factor " + std::to_string(i + 1) + "\n" + print_presentation(parts[i]);
    if (i + 1 < parts.size()) out += "\n";
  }
  return out;
}

SearchConfig search_config(Run& run, uint64_t seed, int restarts, int iters) {
  SearchConfig cfg;
  cfg.seed = seed;
  cfg.restarts = restarts;
  cfg.max_iters = iters;
  run.config["seed"] = seed;
  run.config["restarts"] = restarts;
  run.config["max_iters"] = iters;
  return cfg;
}

// "x = 2 y - 1" or "x := 2 y - 1" entries, or a file of such lines.
std::map<std::string, std::string> read_dictionary(Run& run, const std::vector<std::string>& entries,
                                                   const std::string& file) {
  std::vector<std::string> lines = entries;
  if (!file.empty()) {
    require_file(file);
    run.input(file);
    std::istringstream in(read_file(file));
    for (std::string l; std::getline(in, l);) {
      l = trim(l);
      if (!l.empty() && l[0] != '#') lines.push_back(l);
    }
  }
  std::map<std::string, std::string> out;
  for (const auto& l : lines) {
    auto eq = l.find('=');
    if (eq == std::string::npos) throw UsageError("dictionary entry needs 'symbol = term': " + l);
    std::string key = trim(l.substr(0, eq));
    if (!key.empty() && key.back() == ':') key = trim(key.substr(0, key.size() - 1));
    out[key] = trim(l.substr(eq + 1));
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Presentations of C*-algebras: parsing, Tietze derivations and representation search", "cstar"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  Run run;
  for (int i = 0; i < argc; ++i) run.argv.emplace_back(argv[i]);
  bool version = false, no_registry = false, strict = false, permissive = false;
  std::string registry = default_registry_path();
  app.add_flag("--version", version, "Print tool and registry versions");
  app.add_option("--registry", registry, "Registry file with extra functions and schemata (default $CSTAR_REGISTRY)");
  app.add_flag("--no-registry", no_registry, "Builtin functions only; lemma steps stay unverified");
  app.add_flag("--json", run.json_out, "JSON output");
  app.add_option("--manifest", run.manifest_path, "Write the run manifest to this file");

  std::string file, pres_file, text, out_dir;
  int dim = 2, restarts = 20, iters = 300, degree = 1, steps = 20;
  uint64_t seed = 1;

  auto* parse = app.add_subcommand("parse", "Parse a presentation or derivation and print it canonically");
  parse->add_option("file", file, "Input .pres or .drv")->required();

  auto* validate_cmd = app.add_subcommand("validate", "Report invariant violations of a presentation");
  validate_cmd->add_option("file", file)->required();

  auto* check = app.add_subcommand("check", "Replay a derivation and check every side condition");
  check->add_option("derivation", file)->required();
  check->add_option("--degree", degree, "Factor degree for 'cert auto'")->check(CLI::Range(0, 4));

  auto* simplify = app.add_subcommand("simplify", "Greedy relation and generator elimination");
  simplify->add_option("file", file)->required();
  simplify->add_option("--degree", degree)->check(CLI::Range(0, 4));
  simplify->add_option("--steps", steps)->check(CLI::Range(0, 1000));
  simplify->add_option("-o,--out", out_dir, "Directory for the result and the derivation");

  auto* split_cmd = app.add_subcommand("split", "Split into free-product factors");
  split_cmd->add_option("file", file)->required();

  auto* unitize_cmd = app.add_subcommand("unitize", "Unital presentation of the unitization");
  unitize_cmd->add_option("file", file)->required();

  auto* normbound = app.add_subcommand("normbound", "Symbolic spectral interval and norm bound of a term");
  normbound->add_option("term", text)->required();
  normbound->add_option("-p,--presentation", pres_file)->required();

  auto* repsearch = app.add_subcommand("repsearch", "Search for a matrix representation");
  repsearch->add_option("file", pres_file);
  repsearch->add_option("-p,--presentation", pres_file);

  auto* refute = app.add_subcommand("refute", "Look for a representation on which a relation fails");
  refute->add_option("relation", text)->required();
  refute->add_option("-p,--presentation", pres_file)->required();

  auto* lowerbound = app.add_subcommand("lowerbound", "Numerical lower bound on the norm of a term");
  lowerbound->add_option("term", text)->required();
  lowerbound->add_option("-p,--presentation", pres_file)->required();

  for (auto* sub : {repsearch, refute, lowerbound}) {
    sub->add_option("--dim", dim, "Matrix dimension")->check(CLI::Range(1, 16));
    sub->add_option("--seed", seed);
    sub->add_option("--restarts", restarts)->check(CLI::Range(1, 10000));
    sub->add_option("--iters", iters)->check(CLI::Range(1, 100000));
  }

  std::string first_file, second_file, dict1_file, dict2_file;
  std::vector<std::string> map1, map2;
  auto* bridge_cmd = app.add_subcommand("bridge", "Joint presentation and the two derivations into it");
  bridge_cmd->add_option("first", first_file)->required();
  bridge_cmd->add_option("second", second_file)->required();
  bridge_cmd->add_option("--map1", map1, "First generators as terms over the second: 'x = 2 y - 1'");
  bridge_cmd->add_option("--map2", map2, "Second generators as terms over the first");
  bridge_cmd->add_option("--dict1", dict1_file, "File of --map1 entries");
  bridge_cmd->add_option("--dict2", dict2_file, "File of --map2 entries");
  bridge_cmd->add_option("--degree", degree)->check(CLI::Range(0, 4));
  bridge_cmd->add_option("-o,--out", out_dir, "Directory for joint.pres and the two derivations");

  for (auto* sub : {check, simplify, bridge_cmd}) {
    sub->add_flag("--strict", strict, "Every gap is an error (default)");
    sub->add_flag("--permissive", permissive, "Record gaps and continue");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (no_registry) registry.clear();
    if (!registry.empty()) {
      require_file(registry);
      run.input(registry);
      install_registry(load_registry(registry));
      run.registry_path = registry;
    }
    if (version) {
      std::cout << "cstar " << kVersion << "\nfunctions " << FunctionRegistry::active().fingerprint() << "\nlemmas "
                << LemmaRegistry::active().fingerprint() << "\n";
      if (!registry.empty()) std::cout << "registry " << registry << "\n";
      return kOk;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return kUsage;
    }
    if (strict && permissive) throw UsageError("--strict and --permissive are exclusive");
    Mode mode = permissive ? Mode::Permissive : Mode::Strict;
    run.command = app.get_subcommands().front()->get_name();
    run.config["registry"] = !no_registry;

    if (parse->parsed()) {
      if (fs::path(file).extension() == ".drv") {
        Derivation d = load_drv(run, file);
        return run.finish(kOk, "parsed derivation", {{"steps", d.steps.size()}}, print_derivation(d));
      }
      Presentation p = load_pres(run, file);
      return run.finish(kOk, "parsed presentation", to_json(p), print_presentation(p));
    }

    if (validate_cmd->parsed()) {
      Presentation p = load_pres(run, file, true);
      auto diags = validate(p);
      std::string txt = diags.empty() ? "valid\n" : "";
      for (const auto& d : diags) txt += "invalid: " + d + "\n";
      return run.finish(diags.empty() ? kOk : kFailed, diags.empty() ? "valid" : "invalid",
                        {{"valid", diags.empty()}, {"messages", diags}}, txt);
    }

    if (check->parsed()) {
      Derivation d = load_drv(run, file);
      CheckOptions opts;
      opts.mode = mode;
      opts.cert_degree = degree;
      opts.use_registry = !no_registry;
      run.config["mode"] = mode_name(mode);
      run.config["degree"] = degree;
      auto r = check_derivation(d, opts);
      std::string summary = std::string(r.pass ? "PASS" : "FAIL") + ", " + std::to_string(r.gaps.size()) + " gaps";
      return run.finish(r.pass ? kOk : kFailed, summary, to_json(r), format_report(r));
    }

    if (simplify->parsed()) {
      Presentation p = load_pres(run, file);
      SimplifyBudget budget;
      budget.max_degree = degree;
      budget.max_steps = steps;
      run.config["degree"] = degree;
      run.config["steps"] = steps;
      auto s = auto_simplify(p, budget);
      s.derivation.start_path = "start.pres";
      s.derivation.end_path = "end.pres";
      if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream(fs::path(out_dir) / "start.pres") << print_presentation(p);
        std::ofstream(fs::path(out_dir) / "end.pres") << print_presentation(s.result);
        std::ofstream(fs::path(out_dir) / "simplify.drv") << print_derivation(s.derivation);
      }
      CheckOptions opts;
      opts.mode = mode;
      opts.cert_degree = degree;
      auto r = check_derivation(s.derivation, opts);
      std::string summary = std::to_string(s.derivation.steps.size()) + " steps, recheck " + (r.pass ? "PASS" : "FAIL");
      json j{{"steps", s.derivation.steps.size()},
             {"derivation", print_derivation(s.derivation)},
             {"recheck", r.pass},
             {"result", to_json(s.result)}};
      std::string txt = print_derivation(s.derivation) + "\n# result\n" + print_presentation(s.result) +
                        "# recheck: " + (r.pass ? "PASS" : "FAIL") + "\n";
      return run.finish(r.pass ? kOk : kFailed, summary, j, txt);
    }

    if (split_cmd->parsed()) {
      Presentation p = load_pres(run, file);
      auto s = split(p);
      json parts = json::array();
      for (const auto& part : s.parts) parts.push_back(to_json(part));
      std::string txt = print_parts(s.parts);
      for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
      return run.finish(kOk, std::to_string(s.parts.size()) + " factors",
                        {{"factors", s.parts.size()}, {"parts", parts}, {"warnings", s.warnings}}, txt);
    }

    if (unitize_cmd->parsed()) {
      Presentation p = unitize(load_pres(run, file));
      return run.finish(kOk, "unitized", to_json(p), print_presentation(p));
    }

    if (normbound->parsed()) {
      Presentation p = load_pres(run, pres_file);
      NormalForm t = parse_term(text, p.gens);
      auto iv = spectral_interval(t, p.gens, p.facts());
      json j{{"kind", "normbound"},
             {"term", print_term(t)},
             {"self_adjoint", iv.self_adjoint},
             {"lo", to_string(iv.bounds.lo)},
             {"hi", to_string(iv.bounds.hi)},
             {"norm_upper", to_string(iv.norm_upper)},
             {"norm_upper_float", iv.norm_upper.get_d()}};
      std::string txt = "term " + print_term(t) + "\n";
      if (iv.self_adjoint)
        txt += "spectrum in [" + to_string(iv.bounds.lo) + ", " + to_string(iv.bounds.hi) + "]\n";
      txt += "norm <= " + to_string(iv.norm_upper) + "\n";
      return run.finish(kOk, "norm <= " + to_string(iv.norm_upper), j, txt);
    }

    if (repsearch->parsed() || refute->parsed() || lowerbound->parsed()) {
      if (pres_file.empty()) throw UsageError("a presentation is required");
      Presentation p = load_pres(run, pres_file);
      SearchConfig cfg = search_config(run, seed, restarts, iters);
      run.config["dim"] = dim;
      if (repsearch->parsed()) {
        auto r = search_feasible(p, dim, cfg);
        bool ok = r.feasible(cfg);
        std::string txt = "dim " + std::to_string(dim) + ", best residual " + fmt(r.residual) +
                          (ok ? " (feasible)\n" : " (not feasible)\n");
        for (const auto& o : r.restarts)
          txt += "  restart " + std::to_string(o.index) + ": residual " + fmt(o.residual) + "\n";
        return run.finish(ok ? kOk : kFailed, ok ? "feasible" : "not feasible", to_json(r, p), txt);
      }
      if (refute->parsed()) {
        auto bodies = parse_relation("q", text, p.gens);
        if (bodies.size() != 1) throw UsageError("refute takes a single relation");
        auto r = refute_redundancy(p, bodies.front().body, dim, cfg);
        std::string txt = std::string(r.witness ? "witness found" : "no witness (inconclusive)") + "\nresidual " +
                          fmt(r.residual) + "\nvalue " + fmt(r.value) + "\n";
        return run.finish(r.witness ? kOk : kFailed, r.witness ? "witness" : "none", to_json(r, p), txt);
      }
      NormalForm t = parse_term(text, p.gens);
      auto r = norm_lower_bound(p, t, dim, cfg);
      Rational upper = norm_upper_bound(t, p.gens, p.facts());
      json j = to_json(r, p);
      j["upper"] = to_string(upper);
      j["upper_float"] = upper.get_d();
      std::string txt = "lower bound " + fmt(r.value) + " (residual " + fmt(r.residual) + ")\nupper bound " +
                        to_string(upper) + "\n";
      return run.finish(r.found ? kOk : kFailed, r.found ? "lower bound " + fmt(r.value) : "no feasible point", j,
                        txt);
    }

    if (bridge_cmd->parsed()) {
      Presentation p1 = load_pres(run, first_file), p2 = load_pres(run, second_file);
      auto d1 = read_dictionary(run, map1, dict1_file), d2 = read_dictionary(run, map2, dict2_file);
      BridgeOptions opts;
      opts.mode = mode;
      opts.cert_degree = degree;
      run.config["mode"] = mode_name(mode);
      run.config["degree"] = degree;
      auto b = bridge(p1, p2, d1, d2, opts);
      b.first.start_path = "first.pres";
      b.second.start_path = "second.pres";
      b.first.end_path = b.second.end_path = "joint.pres";
      if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream(fs::path(out_dir) / "first.pres") << print_presentation(b.first.start);
        std::ofstream(fs::path(out_dir) / "second.pres") << print_presentation(b.second.start);
        std::ofstream(fs::path(out_dir) / "joint.pres") << print_presentation(b.joint);
        std::ofstream(fs::path(out_dir) / "first.drv") << print_derivation(b.first);
        std::ofstream(fs::path(out_dir) / "second.drv") << print_derivation(b.second);
      }
      CheckOptions check_opts;
      check_opts.mode = mode;
      check_opts.cert_degree = degree;
      auto r1 = check_derivation(b.first, check_opts), r2 = check_derivation(b.second, check_opts);
      bool pass = r1.pass && r2.pass && (mode == Mode::Permissive || b.gaps.empty());
      json renames = json::object();
      for (const auto& [a, c] : b.renames) renames[a] = c;
      json j{{"kind", "bridge"},
             {"joint", to_json(b.joint)},
             {"renames", renames},
             {"gaps", b.gaps},
             {"first", to_json(r1)},
             {"second", to_json(r2)},
             {"pass", pass}};
      std::string txt = "# joint\n" + print_presentation(b.joint) + "\n# first -> joint\n" +
                        print_derivation(b.first) + format_report(r1) + "\n# second -> joint\n" +
                        print_derivation(b.second) + format_report(r2);
      for (const auto& g : b.gaps) txt += "gap: " + g + "\n";
      return run.finish(pass ? kOk : kFailed, pass ? "both derivations PASS" : "FAIL", j, txt);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const TietzeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
