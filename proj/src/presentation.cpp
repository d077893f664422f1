#include "cstar/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

namespace cstar {

std::string flavor_name(Flavor f) { return f == Flavor::Unital ? "unital" : "non-unital"; }

Flavor parse_flavor(const std::string& text) {
  std::string t = trim(text);
  if (t == "unital" || t == "1C*") return Flavor::Unital;
  if (t == "non-unital" || t == "nonunital" || t == "C*") return Flavor::NonUnital;
  throw Error("unknown flavor '" + t + "'");
}

const Relation* Presentation::find(const std::string& name) const {
  for (const auto& r : relations)
    if (r.name == name) return &r;
  return nullptr;
}

void Presentation::add_relation(Relation r) {
  if (!is_identifier(r.name)) throw Error("invalid relation name '" + r.name + "'");
  if (has_relation(r.name)) throw Error("duplicate relation name '" + r.name + "'");
  for (const auto& s : r.body.generators())
    if (!gens.contains(s)) throw Error("relation '" + r.name + "' mentions undeclared generator '" + s + "'");
  relations.push_back(std::move(r));
}

void Presentation::remove_relation(const std::string& name) {
  auto it = std::find_if(relations.begin(), relations.end(), [&](const Relation& r) { return r.name == name; });
  if (it == relations.end()) throw Error("no relation named '" + name + "'");
  relations.erase(it);
}

std::vector<NormalForm> Presentation::bodies() const {
  std::vector<NormalForm> out;
  for (const auto& r : relations) out.push_back(r.body);
  return out;
}

std::vector<std::string> validate(const Presentation& p) {
  std::vector<std::string> diags;
  std::set<std::string> seen;
  for (const auto& r : p.relations) {
    if (!seen.insert(r.name).second) diags.push_back("duplicate relation name '" + r.name + "'");
    for (const auto& s : r.body.generators())
      if (!p.gens.contains(s))
        diags.push_back("relation '" + r.name + "' mentions undeclared generator '" + s + "'");
    if (p.flavor == Flavor::NonUnital) {
      auto aug = augmentation(r.body);
      if (!r.body.unit_coeff().is_zero() || (aug && !aug->is_zero()))
        diags.push_back("unital relation in non-unital presentation: '" + r.name + "'");
      else if (!aug)
        diags.push_back("relation '" + r.name + "': augmentation undetermined in non-unital presentation");
    }
  }
  return diags;
}

Presentation unitize(const Presentation& p) {
  if (p.flavor != Flavor::NonUnital) throw Error("unitize expects a non-unital presentation");
  auto diags = validate(p);
  if (!diags.empty()) throw Error("invalid input presentation: " + diags.front());
  Presentation out = p;
  out.flavor = Flavor::Unital;
  out.notes.push_back("unitization: the original non-unital algebra is the ideal generated by the generators");
  return out;
}

JoinResult join(const std::vector<Presentation>& parts, bool auto_rename) {
  JoinResult res;
  if (parts.empty()) return res;
  res.joined.flavor = parts.front().flavor;
  for (size_t i = 0; i < parts.size(); ++i) {
    const Presentation& part = parts[i];
    if (part.flavor != res.joined.flavor) throw Error("cannot join presentations of different flavors");
    std::map<std::string, std::string> renames;
    std::set<std::string> taken(res.joined.gens.names().begin(), res.joined.gens.names().end());
    for (const auto& s : part.gens.names()) taken.insert(s);
    for (const auto& s : part.gens.names()) {
      if (!res.joined.gens.contains(s)) continue;
      if (!auto_rename) throw Error("generator name clash on '" + s + "'");
      std::string fresh;
      for (int k = 2;; ++k) {
        fresh = s + "_" + std::to_string(k);
        if (!taken.count(fresh) && !is_reserved_word(fresh)) break;
      }
      taken.insert(fresh);
      renames[s] = fresh;
    }
    for (const auto& s : part.gens.names()) {
      auto it = renames.find(s);
      res.joined.gens.add(it == renames.end() ? s : it->second, part.gens.norm(s));
    }
    for (const auto& r : part.relations) {
      Relation nr{r.name, rename(r.body, renames), r.origin};
      for (int k = 2; res.joined.has_relation(nr.name); ++k) nr.name = r.name + "_" + std::to_string(k);
      res.joined.relations.push_back(nr);
    }
    for (const auto& [from, to] : renames)
      res.joined.notes.push_back("join: part " + std::to_string(i + 1) + " generator " + from + " renamed " + to);
    res.renames.push_back(renames);
  }
  return res;
}

SplitResult split(const Presentation& p) {
  SplitResult res;
  const auto& names = p.gens.names();
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < names.size(); ++i) index[names[i]] = i;
  std::vector<size_t> parent(names.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<size_t(size_t)> root = [&](size_t i) { return parent[i] == i ? i : parent[i] = root(parent[i]); };
  for (const auto& r : p.relations) {
    auto gs = r.body.generators();
    if (gs.empty()) continue;
    size_t first = index.at(*gs.begin());
    for (const auto& s : gs) parent[root(index.at(s))] = root(first);
  }
  if (names.empty()) {
    res.parts.push_back(p);
    return res;
  }
  std::map<size_t, size_t> component;  // root -> part index, in declaration order
  for (size_t i = 0; i < names.size(); ++i) {
    size_t r = root(i);
    if (!component.count(r)) {
      component[r] = res.parts.size();
      Presentation part;
      part.flavor = p.flavor;
      res.parts.push_back(part);
    }
    res.parts[component[r]].gens.add(names[i], p.gens.norm(names[i]));
  }
  for (const auto& r : p.relations) {
    auto gs = r.body.generators();
    if (gs.empty()) {
      if (res.parts.size() > 1)
        res.warnings.push_back("relation '" + r.name + "' has no generators; attached to every factor");
      for (auto& part : res.parts) part.relations.push_back(r);
    } else {
      res.parts[component[root(index.at(*gs.begin()))]].relations.push_back(r);
    }
  }
  return res;
}

bool structurally_equal(const Presentation& a, const Presentation& b) {
  if (a.flavor != b.flavor || a.gens.size() != b.gens.size() || a.relations.size() != b.relations.size())
    return false;
  for (const auto& s : a.gens.names())
    if (!b.gens.contains(s) || !(b.gens.norm(s) == a.gens.norm(s))) return false;
  auto sorted = [](std::vector<NormalForm> v) {
    std::sort(v.begin(), v.end(), [](const NormalForm& x, const NormalForm& y) { return compare(x, y) < 0; });
    return v;
  };
  return sorted(a.bodies()) == sorted(b.bodies());
}

namespace {

std::string strip_comment(const std::string& line) {
  size_t h = line.find('#');
  return h == std::string::npos ? line : line.substr(0, h);
}

// "name [origin] : text" -> (name, origin, text); false when no name prefix.
bool split_named(const std::string& line, std::string& name, std::string& origin, std::string& text) {
  size_t i = 0;
  while (i < line.size() && (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '_')) ++i;
  if (i == 0) return false;
  name = line.substr(0, i);
  size_t j = i;
  while (j < line.size() && std::isspace(static_cast<unsigned char>(line[j]))) ++j;
  origin.clear();
  if (j < line.size() && line[j] == '[') {
    size_t close = line.find(']', j);
    if (close == std::string::npos) return false;
    origin = trim(std::string_view(line).substr(j + 1, close - j - 1));
    j = close + 1;
    while (j < line.size() && std::isspace(static_cast<unsigned char>(line[j]))) ++j;
  }
  if (j >= line.size() || line[j] != ':') return false;
  text = trim(std::string_view(line).substr(j + 1));
  return true;
}

void add_lenient_identifiers(const std::string& text, NormedSet& scratch) {
  static const std::regex ident("[A-Za-z_][A-Za-z0-9_]*");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), ident); it != std::sregex_iterator(); ++it) {
    std::string w = it->str();
    if (is_reserved_word(w) || scratch.contains(w)) continue;
    scratch.add(w, NormValue::of(1));
  }
}

}  // namespace

Presentation parse_presentation(std::string_view text, const PresentationParseOptions& options) {
  Presentation p;
  std::istringstream in{std::string(text)};
  std::string raw;
  enum class Section { None, Generators, Relations } section = Section::None;
  int line_no = 0, auto_name = 0;
  auto fail = [&](const std::string& msg) { throw ParseError("line " + std::to_string(line_no) + ": " + msg, 0); };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.rfind("flavor:", 0) == 0) {
      try {
        p.flavor = parse_flavor(line.substr(7));
      } catch (const Error& e) {
        fail(e.what());
      }
      continue;
    }
    if (line == "generators:") {
      section = Section::Generators;
      continue;
    }
    if (line == "relations:") {
      section = Section::Relations;
      continue;
    }
    if (line.rfind("note:", 0) == 0) {
      p.notes.push_back(trim(line.substr(5)));
      continue;
    }
    try {
      if (section == Section::Generators) {
        for (const auto& item : split_top_level(line, ',')) {
          size_t colon = item.find(':');
          if (colon == std::string::npos) fail("expected 'name : norm' in generator list");
          p.gens.add(trim(item.substr(0, colon)), NormValue::parse(trim(item.substr(colon + 1))));
        }
      } else if (section == Section::Relations) {
        std::string name, origin, body;
        if (!split_named(line, name, origin, body)) {
          name = "r" + std::to_string(++auto_name);
          while (p.has_relation(name)) name = "r" + std::to_string(++auto_name);
          origin.clear();
          body = line;
        }
        NormedSet scope = p.gens;
        if (options.lenient) add_lenient_identifiers(body, scope);
        auto rels = parse_relation(name, body, scope);
        for (auto& r : rels) {
          if (!origin.empty() && rels.size() == 1) r.origin = origin;
          if (options.lenient)
            p.relations.push_back(std::move(r));
          else
            p.add_relation(std::move(r));
        }
      } else {
        fail("content outside a 'generators:' or 'relations:' section");
      }
    } catch (const ParseError& e) {
      if (std::string(e.what()).rfind("line ", 0) == 0) throw;
      fail(e.what());
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  return p;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Presentation load_presentation(const std::string& path, const PresentationParseOptions& options) {
  try {
    return parse_presentation(read_file(path), options);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.position());
  }
}

std::string print_presentation(const Presentation& p) {
  std::string out = "flavor: " + flavor_name(p.flavor) + "\ngenerators:\n";
  for (const auto& s : p.gens.names()) out += "  " + s + " : " + p.gens.norm(s).str() + "\n";
  out += "relations:\n";
  for (const auto& r : p.relations) {
    out += "  " + r.name;
    if (r.origin != "axiom") out += " [" + r.origin + "]";
    out += " : " + print_term(r.body) + "\n";
  }
  return out;
}

nlohmann::ordered_json to_json(const Presentation& p) {
  nlohmann::ordered_json j;
  j["flavor"] = flavor_name(p.flavor);
  j["generators"] = nlohmann::ordered_json::array();
  for (const auto& s : p.gens.names()) j["generators"].push_back({{"name", s}, {"norm", p.gens.norm(s).str()}});
  j["relations"] = nlohmann::ordered_json::array();
  for (const auto& r : p.relations)
    j["relations"].push_back({{"name", r.name}, {"body", print_term(r.body)}, {"origin", r.origin}});
  j["notes"] = p.notes;
  return j;
}

}  // namespace cstar
