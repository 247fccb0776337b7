#include "epiq/model_io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bundled.hpp"
#include "epiq/errors.hpp"
#include "epiq/report.hpp"

namespace epiq {

namespace {

std::string pointer_token(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

std::string child(const std::string& path, std::string_view key) {
  return path + "/" + pointer_token(key);
}
std::string child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

// Value names may be written as strings or numbers; numbers keep their JSON spelling.
std::optional<std::string> value_name(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  if (v.is_number_float()) return format_double(v.get<double>());
  return std::nullopt;
}

class Loader {
public:
  explicit Loader(std::string_view text) : text_(text) {}

  ExperimentModel run() {
    Json root;
    try {
      root = Json::parse(text_);
    } catch (const Json::parse_error& e) {
      fail(DiagnosticKind::ParseError, line_col(text_, e.byte), e.what());
      raise();
    }
    if (!root.is_object()) {
      fail(DiagnosticKind::ParseError, "", "model file must be a JSON object");
      raise();
    }

    if (!root.contains("format_version") || !root["format_version"].is_number_integer() ||
        root["format_version"].get<long long>() != 1)
      fail(DiagnosticKind::ParseError, "/format_version", "format_version must be 1");
    std::string name;
    if (auto* n = string_field(root, "name", "")) name = *n;

    read_phi(root);
    raise_if_any();
    auto action = read_group(root);
    raise_if_any();
    auto experiments = read_experiments(root);
    raise_if_any();

    std::vector<std::string> labels;
    for (const auto& e : experiments) labels.push_back(e.label());
    auto connections = read_connections(root, labels, action->group());
    ExperimentIndex reference = 0;
    if (auto* r = string_field(root, "reference", "")) {
      auto it = std::find(labels.begin(), labels.end(), *r);
      if (it == labels.end())
        fail(DiagnosticKind::UnresolvedReference, "/reference", "unknown experiment '" + *r + "'");
      else
        reference = static_cast<ExperimentIndex>(it - labels.begin());
    }
    raise_if_any();

    try {
      ExperimentCatalog catalog(std::move(experiments), std::move(connections), reference,
                                action->group());
      return ExperimentModel(std::move(name), std::move(*action), std::move(catalog));
    } catch (const Error& e) {
      fail(DiagnosticKind::ParseError, "/connections", e.what());
      raise();
    }
  }

private:
  void fail(DiagnosticKind kind, std::string path, std::string message) {
    diagnostics_.push_back({kind, std::move(path), std::move(message)});
  }
  [[noreturn]] void raise() { throw ModelLoadError(std::move(diagnostics_)); }
  void raise_if_any() {
    if (!diagnostics_.empty()) raise();
  }

  const std::string* string_field(const Json& obj, const char* key, const std::string& path) {
    const auto p = child(path, key);
    if (!obj.contains(key)) {
      fail(DiagnosticKind::ParseError, p, std::string("missing field '") + key + "'");
      return nullptr;
    }
    if (!obj[key].is_string()) {
      fail(DiagnosticKind::ParseError, p, std::string("'") + key + "' must be a string");
      return nullptr;
    }
    return obj[key].get_ptr<const std::string*>();
  }

  void read_phi(const Json& root) {
    if (!root.contains("phi") || !root["phi"].is_array() || root["phi"].empty()) {
      fail(DiagnosticKind::ParseError, "/phi", "phi must be a non-empty array of point ids");
      return;
    }
    std::set<std::string> seen;
    for (std::size_t i = 0; i < root["phi"].size(); ++i) {
      const auto& id = root["phi"][i];
      if (!id.is_string()) {
        fail(DiagnosticKind::ParseError, child("/phi", i), "point id must be a string");
        continue;
      }
      if (!seen.insert(id.get<std::string>()).second)
        fail(DiagnosticKind::ParseError, child("/phi", i),
             "duplicate point id '" + id.get<std::string>() + "'");
      points_.push_back(id.get<std::string>());
    }
  }

  std::optional<PointIndex> point(const std::string& id) const {
    auto it = std::find(points_.begin(), points_.end(), id);
    if (it == points_.end()) return std::nullopt;
    return static_cast<PointIndex>(it - points_.begin());
  }

  std::optional<Permutation> read_cycles(const std::string& text, const std::string& path,
                                         const std::string& element) {
    const auto n = points_.size();
    Permutation perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::vector<bool> moved(n, false);
    std::size_t pos = 0;
    bool ok = true;
    while (pos < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[pos]))) {
        ++pos;
        continue;
      }
      if (text[pos] != '(') {
        fail(DiagnosticKind::ParseError, path, "cycle notation expects '(' at offset " +
                                                   std::to_string(pos));
        return std::nullopt;
      }
      const auto close = text.find(')', pos);
      if (close == std::string::npos) {
        fail(DiagnosticKind::ParseError, path, "unterminated cycle");
        return std::nullopt;
      }
      std::string inner = text.substr(pos + 1, close - pos - 1);
      std::replace(inner.begin(), inner.end(), ',', ' ');
      std::istringstream tokens(inner);
      std::vector<PointIndex> cycle;
      for (std::string id; tokens >> id;) {
        auto p = point(id);
        if (!p) {
          fail(DiagnosticKind::UnresolvedReference, path, "unknown point '" + id + "'");
          ok = false;
          continue;
        }
        if (moved[*p]) {
          fail(DiagnosticKind::UnfaithfulAction, path,
               "element '" + element + "' is not a bijection: point '" + id +
                   "' appears in two cycles");
          ok = false;
        }
        moved[*p] = true;
        cycle.push_back(*p);
      }
      for (std::size_t k = 0; k < cycle.size(); ++k) perm[cycle[k]] = cycle[(k + 1) % cycle.size()];
      pos = close + 1;
    }
    if (!ok) return std::nullopt;
    return perm;
  }

  std::optional<Permutation> read_perm(const Json& v, const std::string& path,
                                       const std::string& element) {
    const auto n = points_.size();
    if (v.is_string()) return read_cycles(v.get<std::string>(), path, element);
    if (!v.is_array() || v.size() != n) {
      fail(DiagnosticKind::ParseError, path,
           "permutation of '" + element + "' must list " + std::to_string(n) +
               " images or use cycle notation");
      return std::nullopt;
    }
    Permutation perm;
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& x = v[i];
      if (x.is_number_unsigned() || (x.is_number_integer() && x.get<long long>() >= 0)) {
        const auto idx = x.get<std::size_t>();
        if (idx >= n) {
          fail(DiagnosticKind::UnfaithfulAction, child(path, i),
               "element '" + element + "' maps point " + std::to_string(i) +
                   " outside the point set");
          ok = false;
        }
        perm.push_back(idx);
      } else if (x.is_string()) {
        auto p = point(x.get<std::string>());
        if (!p) {
          fail(DiagnosticKind::UnresolvedReference, child(path, i),
               "unknown point '" + x.get<std::string>() + "'");
          ok = false;
          perm.push_back(0);
        } else {
          perm.push_back(*p);
        }
      } else {
        fail(DiagnosticKind::ParseError, child(path, i), "image must be an index or a point id");
        ok = false;
        perm.push_back(0);
      }
    }
    if (!ok) return std::nullopt;
    std::vector<bool> hit(n, false);
    for (auto p : perm) hit[p] = true;
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) {
      fail(DiagnosticKind::UnfaithfulAction, path,
           "element '" + element + "' does not act as a bijection of the points");
      return std::nullopt;
    }
    return perm;
  }

  std::optional<GroupAction> read_group(const Json& root) {
    if (!root.contains("group") || !root["group"].is_object()) {
      fail(DiagnosticKind::ParseError, "/group", "missing group object");
      return std::nullopt;
    }
    const auto& group = root["group"];
    if (!group.contains("elements") || !group["elements"].is_array() || group["elements"].empty()) {
      fail(DiagnosticKind::ParseError, "/group/elements", "elements must be a non-empty array");
      return std::nullopt;
    }
    std::vector<std::pair<std::string, Permutation>> elements;
    std::set<std::string> names;
    bool ok = true;
    for (std::size_t i = 0; i < group["elements"].size(); ++i) {
      const auto path = child("/group/elements", i);
      const auto& e = group["elements"][i];
      if (!e.is_object()) {
        fail(DiagnosticKind::ParseError, path, "element must be an object");
        ok = false;
        continue;
      }
      const auto* name = string_field(e, "name", path);
      if (!name) {
        ok = false;
        continue;
      }
      if (!names.insert(*name).second) {
        fail(DiagnosticKind::ParseError, child(path, "name"), "duplicate element '" + *name + "'");
        ok = false;
      }
      if (!e.contains("perm")) {
        fail(DiagnosticKind::ParseError, child(path, "perm"), "missing field 'perm'");
        ok = false;
        continue;
      }
      auto perm = read_perm(e["perm"], child(path, "perm"), *name);
      if (!perm) {
        ok = false;
        continue;
      }
      elements.emplace_back(*name, std::move(*perm));
    }
    if (!ok) return std::nullopt;

    if (group.contains("cayley")) return read_cayley(group["cayley"], elements);

    std::map<Permutation, std::size_t> seen;
    for (std::size_t i = 0; i < elements.size(); ++i) {
      auto [it, fresh] = seen.emplace(elements[i].second, i);
      if (!fresh) {
        fail(DiagnosticKind::UnfaithfulAction, child("/group/elements", i),
             "elements '" + elements[it->second].first + "' and '" + elements[i].first +
                 "' act identically; give an explicit cayley table for an unfaithful action");
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    try {
      return GroupAction::from_generators(points_, elements);
    } catch (const Error& e) {
      fail(DiagnosticKind::UnfaithfulAction, "/group", e.what());
      return std::nullopt;
    }
  }

  std::optional<GroupAction> read_cayley(const Json& cayley,
                                         const std::vector<std::pair<std::string, Permutation>>& elements) {
    const auto m = elements.size();
    if (!cayley.is_array() || cayley.size() != m) {
      fail(DiagnosticKind::ParseError, "/group/cayley",
           "cayley must be a " + std::to_string(m) + "x" + std::to_string(m) + " table");
      return std::nullopt;
    }
    std::vector<std::vector<ElementIndex>> table(m);
    bool ok = true;
    for (std::size_t i = 0; i < m; ++i) {
      const auto row_path = child("/group/cayley", i);
      if (!cayley[i].is_array() || cayley[i].size() != m) {
        fail(DiagnosticKind::ParseError, row_path, "row must have " + std::to_string(m) + " entries");
        ok = false;
        continue;
      }
      for (std::size_t j = 0; j < m; ++j) {
        const auto& x = cayley[i][j];
        std::optional<ElementIndex> idx;
        if (x.is_number_integer() && x.get<long long>() >= 0 &&
            x.get<std::size_t>() < m)
          idx = x.get<std::size_t>();
        else if (x.is_string())
          for (std::size_t k = 0; k < m; ++k)
            if (elements[k].first == x.get<std::string>()) idx = k;
        if (!idx) {
          fail(DiagnosticKind::UnresolvedReference, child(row_path, j),
               "entry does not name an element");
          ok = false;
          continue;
        }
        table[i].push_back(*idx);
      }
    }
    if (!ok) return std::nullopt;
    std::vector<std::string> names;
    std::vector<Permutation> perms;
    for (const auto& [name, perm] : elements) {
      names.push_back(name);
      perms.push_back(perm);
    }
    try {
      FiniteGroup g(std::move(names), std::move(table));
      return GroupAction(std::move(g), points_, std::move(perms));
    } catch (const GroupError& e) {
      fail(DiagnosticKind::ParseError, "/group/cayley", e.what());
    } catch (const Error& e) {
      fail(DiagnosticKind::ParseError, "/group", e.what());
    }
    return std::nullopt;
  }

  std::vector<Experiment> read_experiments(const Json& root) {
    std::vector<Experiment> out;
    if (!root.contains("experiments") || !root["experiments"].is_object() ||
        root["experiments"].empty()) {
      fail(DiagnosticKind::ParseError, "/experiments", "experiments must be a non-empty object");
      return out;
    }
    for (const auto& [label, spec] : root["experiments"].items()) {
      const auto path = child("/experiments", label);
      if (auto e = read_experiment(label, spec, path)) out.push_back(std::move(*e));
    }
    return out;
  }

  std::optional<Experiment> read_experiment(const std::string& label, const Json& spec,
                                            const std::string& path) {
    if (!spec.is_object() || !spec.contains("values") || !spec["values"].is_object()) {
      fail(DiagnosticKind::ParseError, child(path, "values"), "experiment needs a values object");
      return std::nullopt;
    }
    const auto before = diagnostics_.size();
    std::vector<std::optional<std::string>> assigned(points_.size());
    for (const auto& [id, v] : spec["values"].items()) {
      const auto vpath = child(child(path, "values"), id);
      auto p = point(id);
      if (!p) {
        fail(DiagnosticKind::UnresolvedReference, vpath, "unknown point '" + id + "'");
        continue;
      }
      auto name = value_name(v);
      if (!name) {
        fail(DiagnosticKind::ParseError, vpath, "value must be a string or a number");
        continue;
      }
      assigned[*p] = *name;
    }
    for (std::size_t p = 0; p < points_.size(); ++p)
      if (!assigned[p])
        fail(DiagnosticKind::ParseError, child(path, "values"),
             "point '" + points_[p] + "' has no value");
    if (diagnostics_.size() != before) return std::nullopt;

    std::vector<std::string> order;
    if (spec.contains("order")) {
      if (!spec["order"].is_array()) {
        fail(DiagnosticKind::ParseError, child(path, "order"), "order must be an array");
        return std::nullopt;
      }
      for (std::size_t i = 0; i < spec["order"].size(); ++i) {
        auto name = value_name(spec["order"][i]);
        if (!name) {
          fail(DiagnosticKind::ParseError, child(child(path, "order"), i),
               "value must be a string or a number");
          return std::nullopt;
        }
        order.push_back(*name);
      }
    } else {
      for (const auto& a : assigned)
        if (std::find(order.begin(), order.end(), *a) == order.end()) order.push_back(*a);
    }

    std::vector<ParameterValue> values;
    for (std::size_t k = 0; k < order.size(); ++k)
      values.push_back({order[k], static_cast<double>(k + 1)});
    if (spec.contains("eigenvalues")) {
      const auto& ev = spec["eigenvalues"];
      if (!ev.is_object()) {
        fail(DiagnosticKind::ParseError, child(path, "eigenvalues"), "eigenvalues must be an object");
        return std::nullopt;
      }
      for (const auto& [name, x] : ev.items()) {
        const auto epath = child(child(path, "eigenvalues"), name);
        auto it = std::find(order.begin(), order.end(), name);
        if (it == order.end()) {
          fail(DiagnosticKind::UnresolvedReference, epath, "unknown value '" + name + "'");
          continue;
        }
        if (!x.is_number()) {
          fail(DiagnosticKind::ParseError, epath, "eigenvalue must be a number");
          continue;
        }
        values[static_cast<std::size_t>(it - order.begin())].eigenvalue = x.get<double>();
      }
    }

    std::vector<ValueIndex> value_of_point;
    for (std::size_t p = 0; p < points_.size(); ++p) {
      auto it = std::find(order.begin(), order.end(), *assigned[p]);
      if (it == order.end()) {
        fail(DiagnosticKind::UnresolvedReference, child(child(path, "values"), points_[p]),
             "value '" + *assigned[p] + "' is not listed in order");
        continue;
      }
      value_of_point.push_back(static_cast<ValueIndex>(it - order.begin()));
    }
    if (diagnostics_.size() != before) return std::nullopt;
    try {
      return Experiment(label, std::move(values), std::move(value_of_point));
    } catch (const Error& e) {
      fail(DiagnosticKind::ParseError, path, e.what());
      return std::nullopt;
    }
  }

  std::vector<Connection> read_connections(const Json& root, const std::vector<std::string>& labels,
                                           const FiniteGroup& group) {
    std::vector<Connection> out;
    if (!root.contains("connections")) return out;
    if (!root["connections"].is_array()) {
      fail(DiagnosticKind::ParseError, "/connections", "connections must be an array");
      return out;
    }
    auto experiment = [&](const Json& c, const char* key, const std::string& path)
        -> std::optional<ExperimentIndex> {
      const auto* s = string_field(c, key, path);
      if (!s) return std::nullopt;
      auto it = std::find(labels.begin(), labels.end(), *s);
      if (it == labels.end()) {
        fail(DiagnosticKind::UnresolvedReference, child(path, key), "unknown experiment '" + *s + "'");
        return std::nullopt;
      }
      return static_cast<ExperimentIndex>(it - labels.begin());
    };
    for (std::size_t i = 0; i < root["connections"].size(); ++i) {
      const auto path = child("/connections", i);
      const auto& c = root["connections"][i];
      if (!c.is_object()) {
        fail(DiagnosticKind::ParseError, path, "connection must be an object");
        continue;
      }
      auto from = experiment(c, "from", path);
      auto to = experiment(c, "to", path);
      const auto* element = string_field(c, "element", path);
      std::optional<ElementIndex> g;
      if (element) {
        g = group.find(*element);
        if (!g)
          fail(DiagnosticKind::UnresolvedReference, child(path, "element"),
               "unknown element '" + *element + "'");
      }
      if (from && to && g) out.push_back({*from, *to, *g});
    }
    return out;
  }

  std::string_view text_;
  std::vector<Diagnostic> diagnostics_;
  std::vector<std::string> points_;
};

} // namespace

ExperimentModel load_model_from_string(std::string_view text) { return Loader(text).run(); }

ExperimentModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ModelLoadError({{DiagnosticKind::ParseError, path.string(), "cannot open model file"}});
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_model_from_string(buf.str());
}

std::string save_model(const ExperimentModel& model) {
  const auto& action = model.action();
  const auto& group = model.group();
  Json doc = Json::object();
  doc["format_version"] = 1;
  doc["name"] = model.name();
  doc["phi"] = action.points();

  Json elements = Json::array();
  for (ElementIndex g = 0; g < group.size(); ++g)
    elements.push_back({{"name", group.name(g)}, {"perm", action.perm(g)}});
  doc["group"] = {{"elements", elements}, {"cayley", group.cayley()}};

  Json experiments = Json::object();
  for (const auto& e : model.catalog().experiments()) {
    Json order = Json::array();
    Json eigen = Json::object();
    for (const auto& v : e.values()) {
      order.push_back(v.name);
      eigen[v.name] = v.eigenvalue;
    }
    Json values = Json::object();
    for (PointIndex p = 0; p < model.num_points(); ++p)
      values[action.points()[p]] = e.value(e.value_of(p)).name;
    experiments[e.label()] = {{"order", order}, {"eigenvalues", eigen}, {"values", values}};
  }
  doc["experiments"] = experiments;

  const auto& catalog = model.catalog();
  Json connections = Json::array();
  for (const auto& c : catalog.declared_connections())
    connections.push_back({{"from", catalog.experiment(c.from).label()},
                           {"to", catalog.experiment(c.to).label()},
                           {"element", group.name(c.element)}});
  doc["connections"] = connections;
  doc["reference"] = catalog.experiment(catalog.reference()).label();
  return canonical_json(doc);
}

void save_model(const ExperimentModel& model, const std::filesystem::path& path) {
  const auto text = save_model(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string model_hash(const ExperimentModel& model) {
  const auto text = save_model(model);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::vector<std::string> bundled_model_names() {
  std::vector<std::string> names;
  for (const auto& m : detail::bundled_models()) names.emplace_back(m.name);
  return names;
}

std::string_view bundled_model_text(std::string_view name) {
  for (const auto& m : detail::bundled_models())
    if (m.name == name) return m.text;
  throw std::invalid_argument("no bundled model named '" + std::string(name) + "'");
}

ExperimentModel load_bundled_model(std::string_view name) {
  return load_model_from_string(bundled_model_text(name));
}

} // namespace epiq
