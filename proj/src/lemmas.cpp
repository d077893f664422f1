#include "cstar/lemmas.hpp"

#include <algorithm>
#include <cstdio>
#include <mutex>

namespace cstar {

namespace {

std::string join_names(const std::vector<std::string>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
  return out;
}

}  // namespace

std::string LemmaSchema::text() const {
  std::string out = "schema " + name + "\n";
  if (!description.empty()) out += "  # " + description + "\n";
  if (!term_vars.empty()) out += "  terms: " + join_names(term_vars) + "\n";
  if (!scalar_vars.empty()) out += "  scalars: " + join_names(scalar_vars) + "\n";
  for (const auto& [n, e] : lets) out += "  let " + n + " = " + e + "\n";
  for (const auto& c : scalar_conditions) out += "  where: " + c + "\n";
  for (const auto& r : required) out += "  required: " + r + "\n";
  for (const auto& p : positive) out += "  positive: " + p + "\n";
  for (const auto& [t, c] : caps) out += "  cap: " + t + " <= " + c + "\n";
  if (kind == Kind::Identity)
    out += "  conclude: " + conclusion + "\n";
  else
    out += "  bound: " + conclusion + " <= " + bound + "\n";
  return out + "end\n";
}

void LemmaRegistry::add(LemmaSchema schema) {
  if (!is_identifier(schema.name)) throw Error("invalid schema name '" + schema.name + "'");
  for (const auto& v : schema.term_vars)
    if (!is_identifier(v) || is_reserved_word(v)) throw Error("schema " + schema.name + ": bad term variable '" + v + "'");
  if (schemas_.count(schema.name)) throw Error("duplicate schema '" + schema.name + "'");
  std::string key = schema.name;
  schemas_.emplace(key, std::move(schema));
}

const LemmaSchema* LemmaRegistry::find(const std::string& name) const {
  auto it = schemas_.find(name);
  return it == schemas_.end() ? nullptr : &it->second;
}

const LemmaSchema& LemmaRegistry::at(const std::string& name) const {
  if (const auto* s = find(name)) return *s;
  throw LemmaError("unknown lemma schema '" + name + "'");
}

std::vector<std::string> LemmaRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [n, s] : schemas_) out.push_back(n);
  return out;
}

std::string LemmaRegistry::fingerprint() const {
  uint64_t h = 1469598103934665603ull;
  for (const auto& [n, s] : schemas_)
    for (unsigned char c : s.text()) {
      h ^= c;
      h *= 1099511628211ull;
    }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::mutex registry_mutex;
std::shared_ptr<const LemmaRegistry>& active_slot() {
  static std::shared_ptr<const LemmaRegistry> slot = LemmaRegistry::make_builtin();
  return slot;
}

}  // namespace

const LemmaRegistry& LemmaRegistry::active() {
  std::lock_guard<std::mutex> lock(registry_mutex);
  return *active_slot();
}

void LemmaRegistry::set_active(std::shared_ptr<const LemmaRegistry> registry) {
  std::lock_guard<std::mutex> lock(registry_mutex);
  active_slot() = std::move(registry);
}

std::string fill_template(const std::string& text, const std::map<std::string, Rational>& scalars) {
  std::string out;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '{') {
      out += text[i];
      continue;
    }
    size_t close = text.find('}', i);
    if (close == std::string::npos) throw Error("unterminated placeholder in '" + text + "'");
    std::string key = text.substr(i + 1, close - i - 1);
    auto it = scalars.find(key);
    if (it == scalars.end()) throw Error("unbound placeholder {" + key + "} in '" + text + "'");
    out += "(" + to_string(it->second) + ")";
    i = close;
  }
  return out;
}

namespace {

bool check_condition(const std::string& text) {
  static const char* ops[] = {">=", "<=", ">", "<"};
  for (const char* op : ops) {
    size_t at = text.find(op);
    if (at == std::string::npos) continue;
    Rational a = parse_scalar(text.substr(0, at)), b = parse_scalar(text.substr(at + std::string(op).size()));
    std::string o = op;
    if (o == ">=") return a >= b;
    if (o == "<=") return a <= b;
    if (o == ">") return a > b;
    return a < b;
  }
  throw Error("scalar condition needs a comparison: '" + text + "'");
}

NormedSet variable_set(const LemmaSchema& s) {
  NormedSet vars;
  for (const auto& v : s.term_vars) vars.add(v, NormValue::of(1));
  return vars;
}

ParseOptions lax() {
  ParseOptions o;
  o.check_inverse_bounds = false;
  return o;
}

}  // namespace

std::map<std::string, Rational> schema_scalars(const LemmaSchema& s, const std::map<std::string, Rational>& given) {
  std::map<std::string, Rational> out;
  for (const auto& v : s.scalar_vars) {
    auto it = given.find(v);
    if (it == given.end()) throw LemmaError("schema " + s.name + ": missing scalar binding '" + v + "'");
    out[v] = it->second;
  }
  for (const auto& [k, v] : given)
    if (!out.count(k)) throw LemmaError("schema " + s.name + ": unexpected binding '" + k + "'");
  for (const auto& [n, e] : s.lets) out[n] = parse_scalar(fill_template(e, out));
  for (const auto& c : s.scalar_conditions) {
    std::string filled = fill_template(c, out);
    if (!check_condition(filled)) throw LemmaError("schema " + s.name + ": scalar condition fails: " + c);
  }
  return out;
}

NormalForm template_term(const LemmaSchema& s, const std::string& text, const std::map<std::string, Rational>& scalars) {
  return parse_term(fill_template(text, scalars), variable_set(s), lax());
}

std::vector<NormalForm> template_relation(const LemmaSchema& s, const std::string& text,
                                          const std::map<std::string, Rational>& scalars) {
  std::vector<NormalForm> out;
  for (auto& r : parse_relation("t", fill_template(text, scalars), variable_set(s), lax())) out.push_back(r.body);
  return out;
}

LemmaInstance instantiate_lemma(const LemmaSchema& s, const std::map<std::string, NormalForm>& terms,
                                const std::map<std::string, Rational>& scalars, const Presentation& ambient) {
  for (const auto& v : s.term_vars)
    if (!terms.count(v)) throw LemmaError("schema " + s.name + ": missing term binding '" + v + "'");
  for (const auto& [k, t] : terms)
    if (std::find(s.term_vars.begin(), s.term_vars.end(), k) == s.term_vars.end())
      throw LemmaError("schema " + s.name + ": unexpected binding '" + k + "'");
  auto sc = schema_scalars(s, scalars);
  Substitution sub(terms.begin(), terms.end());
  Facts facts = ambient.facts();

  LemmaInstance inst;
  inst.schema = s.name;
  inst.label = s.name;
  inst.kind = s.kind;
  for (const auto& v : s.term_vars) inst.bindings.emplace_back(v, print_term(terms.at(v)));
  for (const auto& v : s.scalar_vars) inst.bindings.emplace_back(v, to_string(sc.at(v)));

  for (const auto& req : s.required) {
    for (const auto& body : template_relation(s, req, sc)) {
      NormalForm want = substitute(body, sub);
      const Relation* hit = nullptr;
      for (const auto& r : ambient.relations)
        if (proportional(r.body, want)) {
          hit = &r;
          break;
        }
      if (!hit) {
        std::string body_text = print_term(want);
        if (body_text.size() > 160) body_text = body_text.substr(0, 157) + "...";
        throw LemmaError("schema " + s.name + ": side condition unmet, no relation matches '" +
                         fill_template(req, sc) + "' (expected body " + body_text + ")");
      }
      inst.discharged.push_back(hit->name);
    }
  }
  for (const auto& pos : s.positive) {
    NormalForm t = substitute(template_term(s, pos, sc), sub);
    auto iv = spectral_interval(t, ambient.gens, facts);
    if (!iv.self_adjoint || sgn(iv.bounds.lo) < 0)
      throw LemmaError("schema " + s.name + ": positivity of " + print_term(t) + " not certified (enclosure " +
                       iv.bounds.str() + ")");
    inst.discharged.push_back("positive(" + print_term(t) + ")");
  }
  for (const auto& [term, cap] : s.caps) {
    NormalForm t = substitute(template_term(s, term, sc), sub);
    Rational n = norm_upper_bound(t, ambient.gens, facts);
    Rational c2 = parse_norm_square(fill_template(cap, sc));
    if (n * n > c2)
      throw LemmaError("schema " + s.name + ": norm of " + print_term(t) + " bounded only by " + to_string(n) +
                       ", need " + fill_template(cap, sc));
    inst.discharged.push_back("norm(" + print_term(t) + ") <= " + fill_template(cap, sc));
  }
  if (s.kind == LemmaSchema::Kind::Identity) {
    auto bodies = template_relation(s, s.conclusion, sc);
    if (bodies.size() != 1) throw LemmaError("schema " + s.name + ": conclusion must be a single relation");
    inst.conclusion = substitute(bodies.front(), sub);
  } else {
    inst.conclusion = substitute(template_term(s, s.conclusion, sc), sub);
    inst.bound = NormValue::sqrt_of(parse_norm_square(fill_template(s.bound, sc)));
  }
  return inst;
}

LemmaInstance instantiate_lemma(const std::string& schema, std::string_view bindings, const Presentation& ambient,
                                const LemmaRegistry& registry) {
  const LemmaSchema& s = registry.at(schema);
  std::map<std::string, NormalForm> terms;
  std::map<std::string, Rational> scalars;
  std::string b = trim(bindings);
  if (!b.empty()) {
    for (const auto& item : split_top_level(b, ',')) {
      size_t eq = item.find('=');
      if (eq == std::string::npos) throw ParseError("binding must be 'name = value': " + item, 0);
      std::string var = trim(item.substr(0, eq)), val = trim(item.substr(eq + 1));
      if (std::find(s.scalar_vars.begin(), s.scalar_vars.end(), var) != s.scalar_vars.end())
        scalars[var] = parse_scalar(val);
      else
        terms[var] = parse_term(val, ambient.gens);
    }
  }
  return instantiate_lemma(s, terms, scalars, ambient);
}

}  // namespace cstar
