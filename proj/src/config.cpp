#include "cyclefem/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cyclefem/errors.hpp"
#include "cyclefem/normal_form.hpp"

namespace cyclefem {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Typed access to one table; remembers which keys were read so leftovers can
// be reported as unknown.
class Reader {
 public:
  explicit Reader(const ConfigTable& table) : table_(table) {}

  const std::string* raw(const std::string& section, const std::string& key) {
    used_.insert(section + "." + key);
    const auto s = table_.find(section);
    if (s == table_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  std::optional<double> number(const std::string& section, const std::string& key) {
    const std::string* v = raw(section, key);
    if (!v) return std::nullopt;
    return to_double(section + "." + key, *v);
  }

  void positive(const std::string& section, const std::string& key, double& out) {
    if (const auto v = number(section, key)) {
      if (!(*v > 0.0)) throw ConfigError(section + "." + key + " must be positive");
      out = *v;
    }
  }

  void finite(const std::string& section, const std::string& key, double& out) {
    if (const auto v = number(section, key)) out = *v;
  }

  void count(const std::string& section, const std::string& key, int& out, int min) {
    if (const auto v = number(section, key)) {
      if (*v != std::floor(*v) || *v < min || *v > 1e7)
        throw ConfigError(section + "." + key + " must be an integer >= " + std::to_string(min));
      out = static_cast<int>(*v);
    }
  }

  std::optional<Vector> list(const std::string& section, const std::string& key) {
    const std::string* v = raw(section, key);
    if (!v) return std::nullopt;
    Vector out;
    std::stringstream ss(*v);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(to_double(section + "." + key, item));
    return out;
  }

  std::vector<std::string> words(const std::string& section, const std::string& key) {
    std::vector<std::string> out;
    if (const std::string* v = raw(section, key)) {
      std::stringstream ss(*v);
      for (std::string item; std::getline(ss, item, ',');)
        if (!trim(item).empty()) out.push_back(trim(item));
    }
    return out;
  }

  void reject_unknown() const {
    for (const auto& [section, keys] : table_)
      for (const auto& [key, value] : keys)
        if (!used_.count(section + "." + key))
          throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
  }

 private:
  static double to_double(const std::string& where, const std::string& text) {
    const std::string t = trim(text);
    try {
      std::size_t used = 0;
      const double v = std::stod(t, &used);
      if (used != t.size() || !std::isfinite(v)) throw std::invalid_argument(t);
      return v;
    } catch (const std::logic_error&) {
      throw ConfigError(where + ": '" + t + "' is not a finite number");
    }
  }

  const ConfigTable& table_;
  std::set<std::string> used_;
};

}  // namespace

ConfigTable parse_config(std::istream& in) {
  ConfigTable table;
  std::string section;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(number) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) throw ConfigError(where + "bad section header");
      section = trim(line.substr(1, line.size() - 2));
      table[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    if (section.empty()) throw ConfigError(where + "key outside any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "empty key");
    if (!table[section].emplace(key, value).second) throw ConfigError(where + "repeated key '" + key + "'");
  }
  return table;
}

std::uint64_t config_hash(const ConfigTable& table) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [section, keys] : table)
    for (const auto& [key, value] : keys)
      for (const char c : section + "." + key + "=" + value + "\n") {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
      }
  return h;
}

RunConfig make_run_config(const ConfigTable& table) {
  const std::set<std::string> sections{"model", "equilibria", "hopf", "cycles", "output"};
  for (const auto& [name, keys] : table)
    if (!sections.count(name)) throw ConfigError("unknown section [" + name + "]");

  Reader r(table);
  RunConfig c;
  c.hash = config_hash(table);

  if (const std::string* name = r.raw("model", "name")) {
    if (*name == "luo-rudy")
      c.model = ModelKind::kLuoRudy;
    else if (*name == "hopf-normal-form")
      c.model = ModelKind::kNormalForm;
    else
      throw ConfigError("model.name must be luo-rudy or hopf-normal-form, got '" + *name + "'");
  }
  r.positive("model", "omega", c.omega);
  auto& p = c.parameters;
  for (auto [key, field] : {std::pair{"c_m", &p.c_m}, {"g_na", &p.g_na}, {"g_si", &p.g_si}, {"g_kp", &p.g_kp},
                            {"g_b", &p.g_b}, {"na_o", &p.na_o}, {"na_i", &p.na_i}, {"k_o", &p.k_o},
                            {"k_i", &p.k_i}, {"pr_nak", &p.pr_nak}, {"temperature", &p.temperature}})
    r.positive("model", key, *field);
  r.finite("model", "e_b", p.e_b);
  if (const std::string* form = r.raw("model", "potassium_reversal")) {
    if (*form == "reference")
      p.potassium_reversal = luo_rudy::PotassiumReversal::kReferenceHopfData;
    else if (*form == "goldman")
      p.potassium_reversal = luo_rudy::PotassiumReversal::kGoldman;
    else
      throw ConfigError("model.potassium_reversal must be reference or goldman");
  }
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("model parameters: ") + e.what());
  }
  const auto model = make_model(c);
  const std::size_t dim = model->dim();
  const auto names = model->component_names();

  auto sized = [dim](const std::string& key, std::optional<Vector> v) {
    if (v && v->size() != dim)
      throw ConfigError(key + " needs " + std::to_string(dim) + " values, got " + std::to_string(v->size()));
    return v;
  };

  r.finite("equilibria", "lambda_start", c.lambda_start);
  r.finite("equilibria", "lambda_target", c.lambda_target);
  if (c.lambda_target == c.lambda_start) throw ConfigError("equilibria.lambda_target equals lambda_start");
  r.positive("equilibria", "ds", c.equilibrium_ds);
  r.count("equilibria", "steps", c.equilibrium_steps, 1);
  r.positive("equilibria", "tol", c.equilibrium_newton.tol);
  r.count("equilibria", "max_iter", c.equilibrium_newton.max_iter, 1);
  c.guess = sized("equilibria.guess", r.list("equilibria", "guess"));
  const auto lower = sized("equilibria.search_lower", r.list("equilibria", "search_lower"));
  const auto upper = sized("equilibria.search_upper", r.list("equilibria", "search_upper"));
  if (lower.has_value() != upper.has_value())
    throw ConfigError("equilibria.search_lower and search_upper go together");
  if (lower) {
    for (std::size_t i = 0; i < dim; ++i)
      if (!((*lower)[i] < (*upper)[i])) throw ConfigError("equilibria search box is empty in component " + names[i]);
    c.search_box = SearchBox{*lower, *upper};
  }
  if (!c.guess && !c.search_box) throw ConfigError("equilibria needs a guess or a search box");

  int bracket = 1;
  r.count("hopf", "bracket", bracket, 1);
  c.bracket = static_cast<std::size_t>(bracket - 1);
  c.seed_lambda = r.number("hopf", "seed_lambda");
  c.seed_u = sized("hopf.seed_u", r.list("hopf", "seed_u"));
  if (c.seed_lambda.has_value() != c.seed_u.has_value())
    throw ConfigError("hopf.seed_lambda and hopf.seed_u go together");
  int k = 0;
  r.count("hopf", "k", k, 0);
  if (k > static_cast<int>(dim)) throw ConfigError("hopf.k is larger than the state dimension");
  if (k > 0) c.hopf_k = static_cast<std::size_t>(k - 1);
  r.positive("hopf", "tol", c.hopf_newton.tol);
  r.count("hopf", "max_iter", c.hopf_newton.max_iter, 1);

  r.positive("cycles", "ds", c.cycles.ds);
  r.count("cycles", "steps", c.cycles.steps, 0);
  r.count("cycles", "n_elements", c.n_elements, 2);
  r.positive("cycles", "tol", c.cycles.newton.tol);
  r.count("cycles", "max_iter", c.cycles.newton.max_iter, 1);
  r.count("cycles", "max_halvings", c.cycles.newton.max_halvings, 0);
  if (const std::string* f = r.raw("cycles", "hopf_file")) c.hopf_file = *f;
  if (const auto steps = r.list("cycles", "export_steps")) {
    for (double s : *steps) {
      if (s != std::floor(s) || s < 1) throw ConfigError("cycles.export_steps must be positive integers");
      c.export_steps.push_back(static_cast<int>(s));
    }
  }
  if (const auto l = r.list("cycles", "export_lambda")) c.export_lambda = *l;
  for (const std::string& pair : r.words("cycles", "projections")) {
    const auto colon = pair.find(':');
    if (colon == std::string::npos) throw ConfigError("cycles.projections entries look like a:b, got '" + pair + "'");
    const std::string a = trim(pair.substr(0, colon)), b = trim(pair.substr(colon + 1));
    for (const std::string& axis : {a, b})
      if (axis != "lambda" && std::find(names.begin(), names.end(), axis) == names.end())
        throw ConfigError("projection axis '" + axis + "' is neither lambda nor a component");
    c.projections.emplace_back(a, b);
  }

  if (const std::string* dir = r.raw("output", "dir")) {
    if (dir->empty()) throw ConfigError("output.dir is empty");
    c.out_dir = *dir;
  }
  r.reject_unknown();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  return make_run_config(parse_config(in));
}

std::unique_ptr<ModelSystem> make_model(const RunConfig& config) {
  if (config.model == ModelKind::kNormalForm) return std::make_unique<HopfNormalForm>(config.omega);
  return std::make_unique<luo_rudy::LuoRudyModel>(config.parameters);
}

}  // namespace cyclefem
