// Command-line front end. Talks to the library only through phasespace.h.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "phasespace/phasespace.h"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

// Failure carrying the error name printed on stderr and the exit code.
struct CliFailure {
  std::string name;
  std::string message;
  int exit_code;
};

[[noreturn]] void config_error(const std::string& message) { throw CliFailure{"ConfigInvalid", message, kExitConfig}; }

struct Context {
  ps_context* ctx = nullptr;
  Context() {
    if (ps_context_create(&ctx) != PS_OK) throw CliFailure{"Internal", "cannot create context", kExitNumeric};
  }
  ~Context() { ps_context_destroy(ctx); }
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;

  void check(ps_status status) const {
    if (status == PS_OK) return;
    const bool config = status == PS_ERR_CONFIG_INVALID || status == PS_ERR_INVALID_ARGUMENT;
    throw CliFailure{ps_status_name(status), ps_context_last_error(ctx), config ? kExitConfig : kExitNumeric};
  }
};

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using Hamiltonian = std::unique_ptr<ps_hamiltonian, Deleter<ps_hamiltonian, ps_hamiltonian_destroy>>;
using Propagator = std::unique_ptr<ps_propagator, Deleter<ps_propagator, ps_propagator_destroy>>;
using State = std::unique_ptr<ps_state, Deleter<ps_state, ps_state_destroy>>;
using Distribution = std::unique_ptr<ps_distribution, Deleter<ps_distribution, ps_distribution_destroy>>;
using Profile = std::unique_ptr<ps_profile, Deleter<ps_profile, ps_profile_destroy>>;
using Trajectory = std::unique_ptr<ps_trajectory, Deleter<ps_trajectory, ps_trajectory_destroy>>;
using Cat = std::unique_ptr<ps_cat, Deleter<ps_cat, ps_cat_destroy>>;

std::string take_string(char* s) {
  std::string out(s);
  ps_string_free(s);
  return out;
}

std::string num(double v) {
  if (v == 0.0) v = 0.0;
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string json_num(double v) { return std::isfinite(v) ? num(v) : "null"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) config_error("cannot write '" + path + "'");
  out << content;
  if (!out) config_error("failed writing '" + path + "'");
}

// Options shared by every subcommand. Values given in --config fill in
// whatever the command line leaves unset.
struct Options {
  std::string config;
  std::string out;
  std::string state;
  std::string hamiltonian;
  std::string profile;
  std::string grid;
  std::string parity;
  std::string alpha;
  std::string kind;
  std::optional<double> t;
  std::optional<double> period;
  std::optional<int> steps;
  std::optional<int> cutoff;
  std::optional<int> mode;
  std::optional<int> threads;
  std::optional<int> stride;
  bool inverse = false;

  // Inline JSON documents taken from --config.
  std::optional<json> state_doc;
  std::optional<json> hamiltonian_doc;
  std::optional<json> profile_doc;
};

template <typename T>
void fill(std::optional<T>& slot, const json& doc, const char* key) {
  if (slot || !doc.contains(key)) return;
  try {
    slot = doc.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(std::string("config field '") + key + "' has the wrong type");
  }
}

void fill_string(std::string& slot, const json& doc, const char* key) {
  if (!slot.empty() || !doc.contains(key)) return;
  if (!doc.at(key).is_string()) config_error(std::string("config field '") + key + "' must be a string");
  slot = doc.at(key).get<std::string>();
}

void fill_document(std::optional<json>& doc_slot, std::string& path_slot, const json& doc, const char* key) {
  if (!path_slot.empty() || !doc.contains(key)) return;
  const json& v = doc.at(key);
  if (v.is_string()) {
    path_slot = v.get<std::string>();
  } else if (v.is_object()) {
    doc_slot = v;
  } else {
    config_error(std::string("config field '") + key + "' must be an object or a path");
  }
}

void load_config(Options& o) {
  if (o.config.empty()) return;
  json doc;
  try {
    doc = json::parse(read_file(o.config));
  } catch (const json::parse_error& e) {
    config_error(std::string("malformed config: ") + e.what());
  }
  if (!doc.is_object()) config_error("config must be a JSON object");
  static const std::vector<std::string> known = {"state", "hamiltonian", "profile", "grid",   "parity", "alpha",
                                                 "kind",  "t",           "period",  "steps",  "cutoff", "mode",
                                                 "threads", "stride",    "inverse", "out"};
  for (const auto& item : doc.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      config_error("unknown config field '" + item.key() + "'");
    }
  }
  fill_document(o.state_doc, o.state, doc, "state");
  fill_document(o.hamiltonian_doc, o.hamiltonian, doc, "hamiltonian");
  fill_document(o.profile_doc, o.profile, doc, "profile");
  fill_string(o.grid, doc, "grid");
  fill_string(o.parity, doc, "parity");
  fill_string(o.kind, doc, "kind");
  fill_string(o.out, doc, "out");
  if (o.alpha.empty() && doc.contains("alpha")) {
    const json& a = doc.at("alpha");
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
      config_error("config field 'alpha' must be [re, im]");
    }
    o.alpha = num(a[0].get<double>()) + "," + num(a[1].get<double>());
  }
  fill(o.t, doc, "t");
  fill(o.period, doc, "period");
  fill(o.steps, doc, "steps");
  fill(o.cutoff, doc, "cutoff");
  fill(o.mode, doc, "mode");
  fill(o.threads, doc, "threads");
  fill(o.stride, doc, "stride");
  if (!o.inverse && doc.contains("inverse")) {
    if (!doc.at("inverse").is_boolean()) config_error("config field 'inverse' must be a boolean");
    o.inverse = doc.at("inverse").get<bool>();
  }
}

std::string document(const std::optional<json>& inline_doc, const std::string& path, const char* what) {
  if (inline_doc) return inline_doc->dump();
  if (path.empty()) config_error(std::string("missing ") + what + " (use --" + what + " or the config file)");
  return read_file(path);
}

std::string require_out(const Options& o) {
  if (o.out.empty()) config_error("missing --out");
  return o.out;
}

std::vector<double> split_numbers(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end == item.c_str() || *end != '\0') config_error(std::string("malformed ") + what);
    values.push_back(v);
  }
  if (values.size() != expected) config_error(std::string(what) + " needs " + std::to_string(expected) + " values");
  return values;
}

ps_grid parse_grid(const std::string& text) {
  const std::vector<double> v = split_numbers(text.empty() ? "-5,5,-5,5,101" : text, 5, "--grid");
  if (v[4] != std::floor(v[4])) config_error("--grid resolution must be an integer");
  return ps_grid{v[0], v[1], v[2], v[3], static_cast<int>(v[4])};
}

void apply_context(const Context& c, const Options& o) {
  if (const char* tol = std::getenv("PHASESPACE_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(tol, &end);
    if (end == tol || *end != '\0') config_error("PHASESPACE_TOL is not a number");
    c.check(ps_context_set_tolerance(c.ctx, v));
  }
  c.check(ps_context_set_threads(c.ctx, o.threads.value_or(1)));
}

State load_state(const Context& c, const Options& o) {
  ps_state* s = nullptr;
  c.check(ps_state_from_json(c.ctx, document(o.state_doc, o.state, "state").c_str(), &s));
  return State(s);
}

Profile load_profile(const Context& c, const Options& o) {
  ps_profile* p = nullptr;
  c.check(ps_profile_from_json(c.ctx, document(o.profile_doc, o.profile, "profile").c_str(), &p));
  return Profile(p);
}

std::string provenance(const std::string& command, const Options& o) {
  json inputs = json::object();
  if (!o.config.empty()) inputs["config"] = o.config;
  if (!o.state.empty()) inputs["state"] = o.state;
  if (!o.hamiltonian.empty()) inputs["hamiltonian"] = o.hamiltonian;
  if (!o.profile.empty()) inputs["profile"] = o.profile;
  if (!o.grid.empty()) inputs["grid"] = o.grid;
  if (!o.parity.empty()) inputs["parity"] = o.parity;
  if (!o.alpha.empty()) inputs["alpha"] = o.alpha;
  if (o.cutoff) inputs["cutoff"] = *o.cutoff;
  if (o.steps) inputs["steps"] = *o.steps;
  if (o.mode) inputs["mode"] = *o.mode;
  std::string out = "{\"command\": " + json(command).dump() + ", \"library_version\": " + json(ps_version()).dump() +
                    ", \"inputs\": " + inputs.dump() + "}";
  return out;
}

std::string distribution_csv(const Context& c, const ps_distribution* d) {
  const int n_modes = ps_distribution_n_modes(d);
  std::string csv;
  if (n_modes == 1) {
    csv = "n,prob\n";
  } else {
    for (int j = 0; j < n_modes; ++j) csv += "n" + std::to_string(j + 1) + ",";
    csv += "prob\n";
  }
  std::vector<int> n(static_cast<std::size_t>(n_modes));
  for (std::size_t i = 0; i < ps_distribution_size(d); ++i) {
    double prob = 0.0;
    c.check(ps_distribution_entry(c.ctx, d, i, n.data(), &prob));
    if (prob == 0.0) continue;
    for (int v : n) csv += std::to_string(v) + ",";
    csv += num(prob) + "\n";
  }
  return csv;
}

std::string distribution_meta(const Context& c, const ps_distribution* d, const std::string& provenance_json) {
  std::string means = "[";
  for (int j = 0; j < ps_distribution_n_modes(d); ++j) {
    double m = 0.0;
    c.check(ps_distribution_mean(c.ctx, d, j, &m));
    means += (j > 0 ? ", " : "") + json_num(m);
  }
  means += "]";
  return "{\n  \"mass\": " + json_num(ps_distribution_mass(d)) + ",\n  \"mean_per_mode\": " + means +
         ",\n  \"p0\": " + json_num(ps_distribution_p0(d)) + ",\n  \"provenance\": " + provenance_json + "\n}\n";
}

std::string grid_csv(const ps_grid& g, const std::vector<double>& values) {
  std::string csv = "p,q,value\n";
  const double hp = (g.p_max - g.p_min) / (g.points - 1);
  const double hq = (g.q_max - g.q_min) / (g.points - 1);
  for (int i = 0; i < g.points; ++i) {
    for (int j = 0; j < g.points; ++j) {
      csv += num(g.p_min + hp * i) + "," + num(g.q_min + hq * j) + "," +
             num(values[static_cast<std::size_t>(i) * g.points + j]) + "\n";
    }
  }
  return csv;
}

std::string grid_meta(const ps_grid& g, const std::vector<double>& values, const std::string& provenance_json) {
  double lo = values.front();
  double sum = 0.0;
  for (int i = 0; i < g.points; ++i) {
    const double wi = (i == 0 || i == g.points - 1) ? 0.5 : 1.0;
    for (int j = 0; j < g.points; ++j) {
      const double wj = (j == 0 || j == g.points - 1) ? 0.5 : 1.0;
      const double v = values[static_cast<std::size_t>(i) * g.points + j];
      lo = std::min(lo, v);
      sum += wi * wj * v;
    }
  }
  const double area = (g.p_max - g.p_min) / (g.points - 1) * (g.q_max - g.q_min) / (g.points - 1);
  return "{\n  \"min_value\": " + json_num(lo) + ",\n  \"integral\": " + json_num(sum * area / (2.0 * M_PI)) +
         ",\n  \"provenance\": " + provenance_json + "\n}\n";
}

std::vector<double> grid_buffer(const ps_grid& g) {
  if (g.points < 2 || g.points > 512) config_error("--grid resolution must lie in [2, 512]");
  return std::vector<double>(static_cast<std::size_t>(g.points) * g.points);
}

void run_evolve(const Options& o) {
  Context c;
  apply_context(c, o);
  ps_hamiltonian* h = nullptr;
  c.check(ps_hamiltonian_from_json(c.ctx, document(o.hamiltonian_doc, o.hamiltonian, "hamiltonian").c_str(), &h));
  Hamiltonian ham(h);
  State state = load_state(c, o);
  if (!o.t) config_error("missing --t");
  ps_propagator* p = nullptr;
  c.check(ps_propagator_compute(c.ctx, ham.get(), *o.t, o.steps.value_or(0), &p));
  Propagator prop(p);
  if (o.inverse) {
    ps_propagator* inv = nullptr;
    c.check(ps_propagator_inverse(c.ctx, prop.get(), &inv));
    prop.reset(inv);
  }
  ps_state* evolved = nullptr;
  c.check(ps_state_evolve(c.ctx, state.get(), prop.get(), &evolved));
  State result(evolved);
  char* text = nullptr;
  c.check(ps_state_to_json(c.ctx, result.get(), &text));
  write_file(require_out(o), take_string(text));
}

void run_photon_dist(const Options& o) {
  Context c;
  apply_context(c, o);
  State state = load_state(c, o);
  ps_distribution* d = nullptr;
  c.check(ps_photon_distribution(c.ctx, state.get(), o.cutoff.value_or(10), &d));
  Distribution dist(d);
  const std::string out = require_out(o);
  write_file(out, distribution_csv(c, dist.get()));
  write_file(out + ".meta.json", distribution_meta(c, dist.get(), provenance("photon-dist", o)));
}

void run_state_grid(const Options& o, bool husimi) {
  Context c;
  apply_context(c, o);
  State state = load_state(c, o);
  const ps_grid g = parse_grid(o.grid);
  std::vector<double> values = grid_buffer(g);
  const int mode = o.mode.value_or(1) - 1;
  c.check(husimi ? ps_state_q_grid(c.ctx, state.get(), mode, &g, values.data())
                 : ps_state_wigner_grid(c.ctx, state.get(), mode, &g, values.data()));
  const std::string out = require_out(o);
  write_file(out, grid_csv(g, values));
  write_file(out + ".meta.json", grid_meta(g, values, provenance(husimi ? "qfunc-grid" : "wigner-grid", o)));
}

void run_oscillator(const Options& o) {
  Context c;
  apply_context(c, o);
  Profile profile = load_profile(c, o);
  if (!o.t) config_error("missing --t");
  ps_trajectory* tr = nullptr;
  c.check(ps_epsilon_solve(c.ctx, profile.get(), *o.t, o.steps.value_or(0), &tr));
  Trajectory traj(tr);
  const std::size_t n = ps_trajectory_size(traj.get());
  // Default stride keeps roughly 200 rows; the final sample is always written.
  const std::size_t stride = o.stride ? static_cast<std::size_t>(std::max(1, *o.stride)) : std::max<std::size_t>(1, (n - 1) / 200);
  std::string csv = "t,re_eps,im_eps,sigma_x,sigma_p,sigma_xp,r\n";
  for (std::size_t i = 0; i < n; ++i) {
    if (i % stride != 0 && i + 1 != n) continue;
    ps_eps_sample s{};
    c.check(ps_trajectory_sample(c.ctx, traj.get(), i, &s));
    csv += num(s.t) + "," + num(s.eps_re) + "," + num(s.eps_im) + "," + num(s.sigma_x) + "," + num(s.sigma_p) + "," +
           num(s.sigma_xp) + "," + num(s.r) + "\n";
  }
  write_file(require_out(o), csv);
}

void run_quasienergy(const Options& o) {
  Context c;
  apply_context(c, o);
  Profile profile = load_profile(c, o);
  if (!o.period) config_error("missing --period");
  ps_quasienergy q{};
  c.check(ps_quasienergy_compute(c.ctx, profile.get(), *o.period, o.steps.value_or(0), &q));
  const std::string text = "{\n  \"kappa\": " + json_num(q.kappa) + ",\n  \"kappa_reduced\": " +
                           json_num(q.kappa_reduced) + ",\n  \"stable\": " + (q.stable ? "true" : "false") +
                           ",\n  \"trace\": " + json_num(q.trace) + ",\n  \"multipliers\": [[" +
                           json_num(q.multipliers[0]) + ", " + json_num(q.multipliers[1]) + "], [" +
                           json_num(q.multipliers[2]) + ", " + json_num(q.multipliers[3]) + "]]\n}\n";
  write_file(require_out(o), text);
}

std::string cat_kind(const Options& o, const std::string& out) {
  if (!o.kind.empty()) return o.kind;
  const std::string name = std::filesystem::path(out).filename().string();
  for (const char* k : {"wavefunction", "wigner", "photon"}) {
    if (name.find(k) != std::string::npos) return k;
  }
  config_error("cannot infer the cat output kind from '" + name + "'; name it wavefunction/wigner/photon or use --kind");
}

void run_cat(const Options& o) {
  Context c;
  apply_context(c, o);
  if (o.parity != "even" && o.parity != "odd") config_error("--parity must be even or odd");
  const std::vector<double> alpha = split_numbers(o.alpha.empty() ? "1,0" : o.alpha, 2, "--alpha");
  const double t = o.t.value_or(0.0);
  Profile profile;
  if (t != 0.0 || !o.profile.empty() || o.profile_doc) profile = load_profile(c, o);
  ps_cat* raw = nullptr;
  c.check(ps_cat_create(c.ctx, o.parity == "even" ? PS_PARITY_EVEN : PS_PARITY_ODD, alpha[0], alpha[1], profile.get(),
                        t, &raw));
  Cat cat(raw);
  const std::string out = require_out(o);
  const std::string kind = cat_kind(o, out);

  if (kind == "wavefunction") {
    double extent = 0.0;
    c.check(ps_cat_extent(c.ctx, cat.get(), &extent));
    const int points = 2049;
    std::string csv = "x,re,im,abs2\n";
    for (int i = 0; i < points; ++i) {
      const double x = -extent + 2.0 * extent * i / (points - 1);
      double re = 0.0;
      double im = 0.0;
      c.check(ps_cat_wavefunction(c.ctx, cat.get(), x, &re, &im));
      csv += num(x) + "," + num(re) + "," + num(im) + "," + num(re * re + im * im) + "\n";
    }
    write_file(out, csv);
  } else if (kind == "wigner") {
    const ps_grid g = parse_grid(o.grid);
    std::vector<double> values = grid_buffer(g);
    c.check(ps_cat_wigner_grid(c.ctx, cat.get(), &g, values.data()));
    write_file(out, grid_csv(g, values));
    write_file(out + ".meta.json", grid_meta(g, values, provenance("cat", o)));
  } else if (kind == "photon") {
    ps_distribution* d = nullptr;
    c.check(ps_cat_photon_distribution(c.ctx, cat.get(), o.cutoff.value_or(20), &d));
    Distribution dist(d);
    write_file(out, distribution_csv(c, dist.get()));
    write_file(out + ".meta.json", distribution_meta(c, dist.get(), provenance("cat", o)));
  } else {
    config_error("unknown cat output kind '" + kind + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian phase-space and parametric-oscillator simulator"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON scenario file; flags override its fields");
    sub->add_option("--out", o.out, "Output file");
    sub->add_option("--threads", o.threads, "Worker threads for grid evaluation");
  };

  auto* evolve = app.add_subcommand("evolve", "Evolve a Gaussian state under a quadratic Hamiltonian");
  common(evolve);
  evolve->add_option("--hamiltonian", o.hamiltonian, "Hamiltonian JSON");
  evolve->add_option("--state", o.state, "State JSON");
  evolve->add_option("--t", o.t, "Final time");
  evolve->add_option("--steps", o.steps, "RK4 steps (0: exact for constant Hamiltonians)");
  evolve->add_flag("--inverse", o.inverse, "Apply the inverse propagator");

  auto* photon = app.add_subcommand("photon-dist", "Photon-number distribution of a Gaussian state");
  common(photon);
  photon->add_option("--state", o.state, "State JSON");
  photon->add_option("--cutoff", o.cutoff, "Largest photon number per mode (<= 60)");

  auto* wigner = app.add_subcommand("wigner-grid", "Wigner function on a (p, q) grid");
  auto* qfunc = app.add_subcommand("qfunc-grid", "Q-function on a (p, q) grid");
  for (CLI::App* sub : {wigner, qfunc}) {
    common(sub);
    sub->add_option("--state", o.state, "State JSON");
    sub->add_option("--grid", o.grid, "pmin,pmax,qmin,qmax,n");
    sub->add_option("--mode", o.mode, "Mode to scan (1-based); others sit at their means");
  }

  auto* osc = app.add_subcommand("oscillator", "Solve for epsilon(t) and the quadrature variances");
  common(osc);
  osc->add_option("--profile", o.profile, "Frequency profile JSON");
  osc->add_option("--t", o.t, "Final time");
  osc->add_option("--steps", o.steps, "Integration steps (0: default)");
  osc->add_option("--stride", o.stride, "Write every k-th sample");

  auto* qe = app.add_subcommand("quasienergy", "Floquet quasienergy of a periodic profile");
  common(qe);
  qe->add_option("--profile", o.profile, "Frequency profile JSON");
  qe->add_option("--period", o.period, "Period T");
  qe->add_option("--steps", o.steps, "Integration steps (0: default)");

  auto* cat = app.add_subcommand("cat", "Even/odd coherent states");
  common(cat);
  cat->add_option("--parity", o.parity, "even or odd");
  cat->add_option("--alpha", o.alpha, "re,im");
  cat->add_option("--profile", o.profile, "Frequency profile JSON (needed for t > 0)");
  cat->add_option("--t", o.t, "Time");
  cat->add_option("--grid", o.grid, "pmin,pmax,qmin,qmax,n for Wigner output");
  cat->add_option("--cutoff", o.cutoff, "Largest photon number for photon output");
  cat->add_option("--kind", o.kind, "wavefunction, wigner or photon (default: from --out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    load_config(o);
    if (evolve->parsed()) run_evolve(o);
    if (photon->parsed()) run_photon_dist(o);
    if (wigner->parsed()) run_state_grid(o, false);
    if (qfunc->parsed()) run_state_grid(o, true);
    if (osc->parsed()) run_oscillator(o);
    if (qe->parsed()) run_quasienergy(o);
    if (cat->parsed()) run_cat(o);
  } catch (const CliFailure& f) {
    std::cerr << f.name << ": " << f.message << "\n";
    return f.exit_code;
  }
  return 0;
}
