#include "phs/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "phs/errors.hpp"
#include "phs/io.hpp"

namespace phs {

namespace pt = boost::property_tree;

namespace {

constexpr const char* kind_names[] = {"simulate",         "flocking",        "casimir", "dobrushin",
                                      "self_convergence", "meanfield_decay", "couple"};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// One INI section with bookkeeping of the keys that were consumed.
class Section {
public:
  Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

  bool present() const { return tree_ != nullptr; }
  const std::string& name() const { return name_; }

  std::optional<std::string> raw(const std::string& key) {
    allowed_.insert(key);
    if (!tree_) return std::nullopt;
    auto it = tree_->find(key);
    if (it == tree_->not_found()) return std::nullopt;
    return trim(it->second.data());
  }

  std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

  std::string text(const std::string& key, const std::string& def) {
    return raw(key).value_or(def);
  }

  std::optional<double> number(const std::string& key) {
    auto v = raw(key);
    if (!v) return std::nullopt;
    return to_double(*v, key);
  }
  double number(const std::string& key, double def) { return number(key).value_or(def); }
  double required_number(const std::string& key) {
    auto v = number(key);
    if (!v) throw ValidationError("missing required key " + where(key));
    return *v;
  }

  std::optional<std::uint64_t> integer(const std::string& key) {
    auto v = raw(key);
    if (!v) return std::nullopt;
    return to_uint(*v, key);
  }

  std::optional<std::vector<double>> list(const std::string& key) {
    auto v = raw(key);
    if (!v) return std::nullopt;
    std::vector<double> out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), key));
    if (out.empty()) throw ValidationError("empty list for " + where(key));
    return out;
  }

  std::optional<std::vector<std::size_t>> index_list(const std::string& key) {
    auto v = raw(key);
    if (!v) return std::nullopt;
    std::vector<std::size_t> out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_uint(trim(item), key));
    if (out.empty()) throw ValidationError("empty list for " + where(key));
    return out;
  }

  std::vector<std::string> word_list(const std::string& key, std::vector<std::string> def) {
    auto v = raw(key);
    if (!v) return def;
    std::vector<std::string> out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
  }

  /// Marks keys that are recognized but not used in this configuration.
  void forbid(const std::string& key, const std::string& reason) {
    if (tree_ && tree_->find(key) != tree_->not_found())
      throw ValidationError("key " + where(key) + " " + reason);
    allowed_.insert(key);
  }

  void reject_unknown() const {
    if (!tree_) return;
    for (const auto& kv : *tree_)
      if (!allowed_.count(kv.first))
        throw ValidationError("unknown key " + where(kv.first));
  }

private:
  double to_double(const std::string& s, const std::string& key) const {
    double x = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
      throw ValidationError("expected a number for " + where(key) + ", got '" + s + "'");
    return x;
  }
  std::uint64_t to_uint(const std::string& s, const std::string& key) const {
    std::uint64_t x = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
      throw ValidationError("expected a nonnegative integer for " + where(key) + ", got '" + s +
                            "'");
    return x;
  }

  std::string name_;
  const pt::ptree* tree_;
  std::set<std::string> allowed_;
};

KernelSpec parse_kernel(Section& s, const std::string& prefix, const std::string& def) {
  const std::string type = s.text(prefix, def);
  const std::string kK = prefix + "_K", kd = prefix + "_delta", kb = prefix + "_beta",
                    kc = prefix + "_c", klb = prefix + "_lower_bound";
  KernelSpec k;
  if (type == "cucker_smale") {
    k = KernelSpec::cucker_smale(s.number(kK, 1.0), s.number(kd, 1.0), s.number(kb, 1.0));
    s.forbid(kc, "does not apply to the cucker_smale kernel");
  } else if (type == "constant") {
    k = KernelSpec::constant(s.number(kc, 1.0));
    for (const auto& key : {kK, kd, kb}) s.forbid(key, "does not apply to the constant kernel");
  } else if (type == "zero") {
    k = KernelSpec::zero();
    for (const auto& key : {kK, kd, kb, kc}) s.forbid(key, "does not apply to the zero kernel");
  } else {
    throw ValidationError("unknown kernel '" + type + "' in " + s.where(prefix));
  }
  k.lower_bound = s.number(klb);
  try {
    k.validate();
  } catch (const ParameterError& e) {
    throw ValidationError(std::string("[") + s.name() + "] " + e.what());
  }
  return k;
}

PotentialSpec parse_potential(Section& s) {
  const std::string type = s.text("potential", "morse");
  const char* keys[] = {"morse_R", "morse_A", "morse_r", "morse_a"};
  PotentialSpec p;
  if (type == "morse") {
    p = PotentialSpec::morse(s.number("morse_R", 2.0), s.number("morse_A", 1.0),
                             s.number("morse_r", 1.0), s.number("morse_a", 1.0));
  } else if (type == "cosine" || type == "zero") {
    p = type == "cosine" ? PotentialSpec::cosine() : PotentialSpec::zero();
    for (const char* key : keys) s.forbid(key, "applies to the morse potential only");
  } else {
    throw ValidationError("unknown potential '" + type + "' in " + s.where("potential"));
  }
  try {
    p.validate();
  } catch (const ParameterError& e) {
    throw ValidationError(std::string("[") + s.name() + "] " + e.what());
  }
  return p;
}

InitialConfig parse_initial(Section& s, bool seed_required_if_random) {
  InitialConfig init;
  const std::string sampler = s.text("sampler", "gaussian");
  init.seed = s.integer("seed");
  const char* gauss_keys[] = {"position_mean", "position_std", "velocity_mean", "velocity_std"};
  const char* box_keys[] = {"position_lo", "position_hi", "velocity_lo", "velocity_hi"};
  const char* explicit_keys[] = {"positions", "velocities"};
  auto forbid_all = [&](const auto& keys, const char* why) {
    for (const char* k : keys) s.forbid(k, why);
  };
  auto required_list = [&](const char* key) {
    auto v = s.list(key);
    if (!v) throw ValidationError("missing required key " + s.where(key));
    return *v;
  };
  if (sampler == "gaussian") {
    init.sampler = SamplerKind::gaussian;
    init.gaussian.position_mean = s.list("position_mean").value_or(std::vector<double>{0.0});
    init.gaussian.position_std = s.list("position_std").value_or(std::vector<double>{1.0});
    init.gaussian.velocity_mean = s.list("velocity_mean").value_or(std::vector<double>{0.0});
    init.gaussian.velocity_std = s.list("velocity_std").value_or(std::vector<double>{1.0});
    forbid_all(box_keys, "applies to the uniform_box sampler only");
    forbid_all(explicit_keys, "applies to the explicit sampler only");
  } else if (sampler == "uniform_box") {
    init.sampler = SamplerKind::uniform_box;
    init.box.position_lo = required_list("position_lo");
    init.box.position_hi = required_list("position_hi");
    init.box.velocity_lo = required_list("velocity_lo");
    init.box.velocity_hi = required_list("velocity_hi");
    forbid_all(gauss_keys, "applies to the gaussian sampler only");
    forbid_all(explicit_keys, "applies to the explicit sampler only");
  } else if (sampler == "explicit") {
    init.sampler = SamplerKind::explicit_list;
    init.explicit_data.positions = required_list("positions");
    init.explicit_data.velocities = required_list("velocities");
    forbid_all(gauss_keys, "applies to the gaussian sampler only");
    forbid_all(box_keys, "applies to the uniform_box sampler only");
    s.forbid("seed", "is meaningless for the explicit sampler");
  } else {
    throw ValidationError("unknown sampler '" + sampler + "' in " + s.where("sampler"));
  }
  if (seed_required_if_random && init.sampler != SamplerKind::explicit_list && !init.seed)
    throw ValidationError("missing required key " + s.where("seed") + " (mandatory for sampler " +
                          sampler + ")");
  return init;
}

Frame parse_frame(const std::string& s, const std::string& where) {
  if (s == "centered") return Frame::centered;
  if (s == "absolute") return Frame::absolute;
  throw ValidationError("unknown frame '" + s + "' in " + where);
}

bool needs_initial(ExperimentKind k) { return k != ExperimentKind::casimir; }
bool needs_integrator(ExperimentKind k) { return k != ExperimentKind::casimir; }

const char* sampler_name(SamplerKind k) {
  switch (k) {
    case SamplerKind::gaussian: return "gaussian";
    case SamplerKind::uniform_box: return "uniform_box";
    case SamplerKind::explicit_list: return "explicit";
  }
  return "gaussian";
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(v[i]);
  }
  return out;
}

void emit_kernel(std::ostream& os, const std::string& prefix, const KernelSpec& k) {
  if (const auto* cs = std::get_if<CuckerSmale>(&k.form)) {
    os << prefix << " = cucker_smale\n";
    os << prefix << "_K = " << format_double(cs->K) << "\n";
    os << prefix << "_delta = " << format_double(cs->delta) << "\n";
    os << prefix << "_beta = " << format_double(cs->beta) << "\n";
  } else if (const auto* c = std::get_if<ConstantKernel>(&k.form)) {
    os << prefix << " = constant\n";
    os << prefix << "_c = " << format_double(c->c) << "\n";
  } else {
    os << prefix << " = zero\n";
  }
  if (k.lower_bound) os << prefix << "_lower_bound = " << format_double(*k.lower_bound) << "\n";
}

void emit_potential(std::ostream& os, const PotentialSpec& p) {
  if (const auto* m = std::get_if<Morse>(&p.form)) {
    os << "potential = morse\n";
    os << "morse_R = " << format_double(m->R) << "\n";
    os << "morse_A = " << format_double(m->A) << "\n";
    os << "morse_r = " << format_double(m->r) << "\n";
    os << "morse_a = " << format_double(m->a) << "\n";
  } else if (std::holds_alternative<CosinePotential>(p.form)) {
    os << "potential = cosine\n";
  } else {
    os << "potential = zero\n";
  }
}

void emit_initial(std::ostream& os, const InitialConfig& init) {
  os << "sampler = " << sampler_name(init.sampler) << "\n";
  if (init.seed) os << "seed = " << *init.seed << "\n";
  switch (init.sampler) {
    case SamplerKind::gaussian:
      os << "position_mean = " << join(init.gaussian.position_mean) << "\n";
      os << "position_std = " << join(init.gaussian.position_std) << "\n";
      os << "velocity_mean = " << join(init.gaussian.velocity_mean) << "\n";
      os << "velocity_std = " << join(init.gaussian.velocity_std) << "\n";
      break;
    case SamplerKind::uniform_box:
      os << "position_lo = " << join(init.box.position_lo) << "\n";
      os << "position_hi = " << join(init.box.position_hi) << "\n";
      os << "velocity_lo = " << join(init.box.velocity_lo) << "\n";
      os << "velocity_hi = " << join(init.box.velocity_hi) << "\n";
      break;
    case SamplerKind::explicit_list:
      os << "positions = " << join(init.explicit_data.positions) << "\n";
      os << "velocities = " << join(init.explicit_data.velocities) << "\n";
      break;
  }
}

Ensemble draw(const InitialConfig& init, std::size_t n, std::size_t d, std::uint64_t seed,
              Frame frame) {
  switch (init.sampler) {
    case SamplerKind::gaussian: return sample_gaussian(init.gaussian, n, d, seed, frame);
    case SamplerKind::uniform_box: return sample_uniform_box(init.box, n, d, seed, frame);
    case SamplerKind::explicit_list: return sample_explicit(init.explicit_data, n, d, frame);
  }
  throw ValidationError("unknown sampler");
}

}  // namespace

std::string to_string(ExperimentKind k) { return kind_names[static_cast<int>(k)]; }

ExperimentKind parse_kind(const std::string& name) {
  for (int i = 0; i < 7; ++i)
    if (name == kind_names[i]) return static_cast<ExperimentKind>(i);
  throw ValidationError("unknown experiment kind '" + name + "'");
}

bool OutputConfig::wants(const std::string& f) const {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

namespace {

bool experiment_key_applies(ExperimentKind kind, const std::string& key) {
  switch (kind) {
    case ExperimentKind::flocking: return key == "epsilon";
    case ExperimentKind::casimir:
      return key == "sample_count" || key == "tolerance" || key == "seed";
    case ExperimentKind::dobrushin: return key == "perturbation_scale" || key == "seed";
    case ExperimentKind::self_convergence:
      return key == "n_list" || key == "t_eval" || key == "repeats";
    case ExperimentKind::meanfield_decay:
      return key == "psi_lower" || key == "epsilon" || key == "grad_sup";
    default: return false;
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, ExperimentKind kind) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("malformed config: ") + e.message() + " (line " +
                          std::to_string(e.line()) + ")");
  }

  static const std::set<std::string> sections{"model",     "initial",          "integrator",
                                              "experiment", "species2",        "species2_initial",
                                              "coupling",  "output"};
  for (const auto& kv : tree) {
    if (!sections.count(kv.first)) throw ValidationError("unknown section [" + kv.first + "]");
    if (!kv.second.data().empty() && kv.second.empty())
      throw ValidationError("key '" + kv.first + "' outside of any section");
  }
  auto section = [&](const std::string& name) {
    auto it = tree.find(name);
    return Section(name, it == tree.not_found() ? nullptr : &it->second);
  };

  ExperimentConfig cfg;
  cfg.kind = kind;

  // [experiment]
  Section ex = section("experiment");
  if (auto k = ex.raw("kind"); k && parse_kind(*k) != kind)
    throw ValidationError("[experiment] kind = " + *k + " does not match the subcommand " +
                          to_string(kind));
  const auto applies = [kind](const std::string& key) { return experiment_key_applies(kind, key); };
  for (const char* key : {"epsilon", "sample_count", "tolerance", "seed", "perturbation_scale",
                          "n_list", "t_eval", "repeats", "psi_lower", "grad_sup"})
    if (!applies(key)) ex.forbid(key, "does not apply to the " + to_string(kind) + " kind");
  if (applies("epsilon")) cfg.experiment.epsilon = ex.number("epsilon");
  if (applies("sample_count")) cfg.experiment.sample_count = ex.integer("sample_count").value_or(100);
  if (applies("tolerance")) cfg.experiment.tolerance = ex.number("tolerance", 1e-12);
  if (applies("seed")) cfg.experiment.seed = ex.integer("seed").value_or(0);
  if (applies("perturbation_scale"))
    cfg.experiment.perturbation_scale = ex.number("perturbation_scale");
  if (applies("n_list"))
    cfg.experiment.n_list = ex.index_list("n_list").value_or(std::vector<std::size_t>{});
  if (applies("t_eval")) cfg.experiment.t_eval = ex.number("t_eval", 1.0);
  if (applies("repeats")) cfg.experiment.repeats = ex.integer("repeats").value_or(10);
  if (applies("psi_lower")) cfg.experiment.psi_lower = ex.number("psi_lower");
  if (applies("grad_sup")) cfg.experiment.grad_sup = ex.number("grad_sup", 0.0);
  ex.reject_unknown();

  // [model]
  Section m = section("model");
  if (!m.present()) throw ValidationError("missing required section [model]");
  const std::string damping = m.text("damping", "alignment");
  if (damping == "alignment") {
    cfg.model.damping = DampingSpec::alignment_laplacian(parse_kernel(m, "kernel", "cucker_smale"));
    m.forbid("friction_gamma", "applies to friction damping only");
  } else if (damping == "friction") {
    if (!parse_kernel(m, "kernel", "zero").is_zero())
      throw ValidationError("[model] kernel must be zero (or absent) with friction damping");
    cfg.model.damping = DampingSpec::uniform_friction(m.number("friction_gamma", 0.5));
  } else {
    throw ValidationError("unknown damping '" + damping + "' in [model] damping");
  }
  cfg.model.potential = parse_potential(m);
  try {
    cfg.model.damping.validate();
  } catch (const ParameterError& e) {
    throw ValidationError(std::string("[model] ") + e.what());
  }
  const auto n = m.integer("n");
  const auto d = m.integer("d");
  if (!d) throw ValidationError("missing required key [model] d");
  if (!n && kind != ExperimentKind::self_convergence)
    throw ValidationError("missing required key [model] n");
  cfg.model.n = n.value_or(0);
  cfg.model.d = *d;
  cfg.frame = parse_frame(m.text("frame", kind == ExperimentKind::couple ? "absolute" : "centered"),
                          "[model] frame");
  m.reject_unknown();

  // [initial]
  Section in = section("initial");
  if (needs_initial(kind)) {
    if (!in.present()) throw ValidationError("missing required section [initial]");
    cfg.initial = parse_initial(in, true);
    in.reject_unknown();
  } else if (in.present()) {
    cfg.initial = parse_initial(in, false);
    in.reject_unknown();
  }

  // [integrator]
  Section ig = section("integrator");
  if (needs_integrator(kind) && !ig.present())
    throw ValidationError("missing required section [integrator]");
  {
    const std::string scheme = ig.text("scheme", "rk4");
    if (scheme == "rk4")
      cfg.integrator.scheme = Scheme::rk4;
    else if (scheme == "implicit_midpoint")
      cfg.integrator.scheme = Scheme::implicit_midpoint;
    else
      throw ValidationError("unknown scheme '" + scheme + "' in [integrator] scheme");
    cfg.integrator.dt = ig.number("dt", 1e-3);
    cfg.integrator.t_end = ig.number("t_end", 1.0);
    cfg.integrator.record_every = ig.integer("record_every").value_or(1);
    cfg.integrator.newton.tol = ig.number("newton_tol", 1e-12);
    cfg.integrator.newton.max_iter = ig.integer("newton_max_iter").value_or(50);
    ig.reject_unknown();
  }

  // species 2 and coupling
  Section s2 = section("species2");
  Section s2i = section("species2_initial");
  Section cp = section("coupling");
  if (kind == ExperimentKind::couple) {
    if (!s2.present()) throw ValidationError("missing required section [species2]");
    if (!s2i.present()) throw ValidationError("missing required section [species2_initial]");
    if (!cp.present()) throw ValidationError("missing required section [coupling]");
    SecondSpecies sp;
    const KernelSpec k2 = parse_kernel(s2, "kernel", "cucker_smale");
    sp.model.potential = parse_potential(s2);
    sp.model.damping = DampingSpec::alignment_laplacian(k2);
    const auto n2 = s2.integer("n");
    if (!n2) throw ValidationError("missing required key [species2] n");
    sp.model.n = *n2;
    sp.model.d = cfg.model.d;
    s2.reject_unknown();
    sp.initial = parse_initial(s2i, true);
    s2i.reject_unknown();
    sp.cross = parse_kernel(cp, "cross", "cucker_smale");
    cp.reject_unknown();
    cfg.species2 = std::move(sp);
  } else {
    for (const auto* s : {&s2, &s2i, &cp})
      if (s->present())
        throw ValidationError("section [" + s->name() + "] is only valid for the couple kind");
  }

  // [output]
  Section out = section("output");
  cfg.output.directory = out.text("directory", "out");
  cfg.output.formats = out.word_list("formats", {"csv", "jsonl", "json"});
  for (const auto& f : cfg.output.formats)
    if (f != "csv" && f != "jsonl" && f != "json")
      throw ValidationError("unknown output format '" + f + "' in [output] formats");
  out.reject_unknown();

  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ValidationError(msg); };
  if (model.d == 0) fail("[model] d must be positive");
  if (kind != ExperimentKind::self_convergence && model.n == 0) fail("[model] n must be positive");
  try {
    model.potential.check_dimension(model.d);
  } catch (const DimensionError& e) {
    fail(std::string("[model] ") + e.what());
  }
  if (needs_integrator(kind)) {
    try {
      integrator.validate();
    } catch (const ParameterError& e) {
      fail(std::string("[integrator] ") + e.what());
    }
  }
  switch (kind) {
    case ExperimentKind::dobrushin:
      if (!experiment.perturbation_scale)
        fail("missing required key [experiment] perturbation_scale for the dobrushin kind");
      if (!(*experiment.perturbation_scale >= 0.0))
        fail("[experiment] perturbation_scale must be nonnegative");
      break;
    case ExperimentKind::self_convergence:
      if (experiment.n_list.empty())
        fail("missing required key [experiment] n_list for the self_convergence kind");
      if (experiment.repeats == 0) fail("[experiment] repeats must be positive");
      if (initial.sampler == SamplerKind::explicit_list)
        fail("self_convergence needs a random sampler in [initial]");
      break;
    case ExperimentKind::meanfield_decay:
      if (!experiment.psi_lower)
        fail("missing required key [experiment] psi_lower for the meanfield_decay kind");
      if (!experiment.epsilon)
        fail("missing required key [experiment] epsilon for the meanfield_decay kind");
      break;
    case ExperimentKind::casimir:
      if (experiment.sample_count == 0) fail("[experiment] sample_count must be positive");
      if (!(experiment.tolerance > 0.0)) fail("[experiment] tolerance must be positive");
      break;
    case ExperimentKind::couple:
      if (frame != Frame::absolute) fail("the couple kind runs in the absolute frame");
      if (!species2) fail("missing required section [species2]");
      break;
    default: break;
  }
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentKind kind,
                             std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  ExperimentConfig cfg = parse_config(ss.str(), kind);
  if (seed_override) {
    cfg.initial.seed = *seed_override;
    if (cfg.species2) cfg.species2->initial.seed = *seed_override + 1;
  }
  return cfg;
}

std::string write_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "[experiment]\n";
  os << "kind = " << to_string(cfg.kind) << "\n";
  const auto& e = cfg.experiment;
  auto applies = [&](const char* key) { return experiment_key_applies(cfg.kind, key); };
  if (applies("epsilon") && e.epsilon) os << "epsilon = " << format_double(*e.epsilon) << "\n";
  if (applies("sample_count")) os << "sample_count = " << e.sample_count << "\n";
  if (applies("tolerance")) os << "tolerance = " << format_double(e.tolerance) << "\n";
  if (applies("seed")) os << "seed = " << e.seed << "\n";
  if (applies("perturbation_scale") && e.perturbation_scale)
    os << "perturbation_scale = " << format_double(*e.perturbation_scale) << "\n";
  if (applies("n_list") && !e.n_list.empty()) os << "n_list = " << join(e.n_list) << "\n";
  if (applies("t_eval")) os << "t_eval = " << format_double(e.t_eval) << "\n";
  if (applies("repeats")) os << "repeats = " << e.repeats << "\n";
  if (applies("psi_lower") && e.psi_lower) os << "psi_lower = " << format_double(*e.psi_lower) << "\n";
  if (applies("grad_sup")) os << "grad_sup = " << format_double(e.grad_sup) << "\n";

  os << "\n[model]\n";
  emit_kernel(os, "kernel", cfg.model.damping.is_friction() ? KernelSpec::zero() : cfg.model.kernel());
  emit_potential(os, cfg.model.potential);
  if (cfg.model.damping.is_friction())
    os << "damping = friction\nfriction_gamma = " << format_double(cfg.model.damping.gamma()) << "\n";
  else
    os << "damping = alignment\n";
  if (cfg.model.n > 0) os << "n = " << cfg.model.n << "\n";
  os << "d = " << cfg.model.d << "\n";
  os << "frame = " << (cfg.frame == Frame::centered ? "centered" : "absolute") << "\n";

  os << "\n[initial]\n";
  emit_initial(os, cfg.initial);

  const auto& ig = cfg.integrator;
  os << "\n[integrator]\n";
  os << "scheme = " << (ig.scheme == Scheme::rk4 ? "rk4" : "implicit_midpoint") << "\n";
  os << "dt = " << format_double(ig.dt) << "\n";
  os << "t_end = " << format_double(ig.t_end) << "\n";
  os << "record_every = " << ig.record_every << "\n";
  os << "newton_tol = " << format_double(ig.newton.tol) << "\n";
  os << "newton_max_iter = " << ig.newton.max_iter << "\n";

  if (cfg.species2) {
    os << "\n[species2]\n";
    emit_kernel(os, "kernel", cfg.species2->model.kernel());
    emit_potential(os, cfg.species2->model.potential);
    os << "n = " << cfg.species2->model.n << "\n";
    os << "\n[species2_initial]\n";
    emit_initial(os, cfg.species2->initial);
    os << "\n[coupling]\n";
    emit_kernel(os, "cross", cfg.species2->cross);
  }

  os << "\n[output]\n";
  os << "directory = " << cfg.output.directory << "\n";
  os << "formats = ";
  for (std::size_t i = 0; i < cfg.output.formats.size(); ++i)
    os << (i ? ", " : "") << cfg.output.formats[i];
  os << "\n";
  return os.str();
}

Ensemble initial_ensemble(const ExperimentConfig& cfg) {
  return draw(cfg.initial, cfg.model.n, cfg.model.d, cfg.initial.seed.value_or(0), cfg.frame);
}

Ensemble second_species_ensemble(const ExperimentConfig& cfg) {
  if (!cfg.species2) throw ValidationError("config has no second species");
  return draw(cfg.species2->initial, cfg.species2->model.n, cfg.model.d,
              cfg.species2->initial.seed.value_or(0), Frame::absolute);
}

EnsembleSampler make_sampler(const ExperimentConfig& cfg) {
  return [init = cfg.initial, d = cfg.model.d, frame = cfg.frame](std::size_t n,
                                                                  std::uint64_t seed) {
    return draw(init, n, d, seed, frame);
  };
}

SpeciesCouplingSpec coupling_spec(const ExperimentConfig& cfg) {
  if (!cfg.species2) throw ValidationError("config has no second species");
  return {cfg.model, cfg.species2->model, cfg.species2->cross};
}

}  // namespace phs
