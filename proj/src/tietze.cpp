#include "cstar/tietze.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>

namespace cstar {

std::string mode_name(Mode m) { return m == Mode::Strict ? "strict" : "permissive"; }

std::string move_kind_name(TietzeMove::Kind k) {
  switch (k) {
    case TietzeMove::Kind::AddRelations: return "addrel";
    case TietzeMove::Kind::RemoveRelations: return "delrel";
    case TietzeMove::Kind::AddGenerators: return "addgen";
    case TietzeMove::Kind::RemoveGenerators: return "delgen";
  }
  return "?";
}

std::string Justification::text() const {
  switch (kind) {
    case Kind::Certificate: return cert_text.empty() ? print_certificate(cert) : cert_text;
    case Kind::AutoCertificate: return "cert auto";
    case Kind::Lemma: {
      std::string out = "fclemma(" + schema + (bindings.empty() ? "" : "; " + bindings) + ")";
      return label.empty() ? out : out + " as " + label;
    }
    case Kind::Oracle: return "oracle";
  }
  return "";
}

Justifications parse_justifications(std::string_view text) {
  Justifications out;
  std::string all = trim(text);
  if (all.empty()) return out;
  for (const auto& raw : split_top_level(all, '&')) {
    std::string item = trim(raw);
    Justification j;
    if (item == "oracle") {
      j.kind = Justification::Kind::Oracle;
    } else if (item.rfind("cert", 0) == 0 && trim(std::string_view(item).substr(4)) == "auto") {
      j.kind = Justification::Kind::AutoCertificate;
    } else if (item.rfind("cert", 0) == 0) {
      j.kind = Justification::Kind::Certificate;
      j.cert_text = item;
    } else if (item.rfind("fclemma", 0) == 0) {
      j.kind = Justification::Kind::Lemma;
      size_t open = item.find('(');
      size_t close = item.rfind(')');
      if (open == std::string::npos || close == std::string::npos || close < open)
        throw ParseError("expected fclemma(schema; bindings): " + item, 0);
      std::string inner = item.substr(open + 1, close - open - 1);
      size_t semi = inner.find(';');
      j.schema = trim(inner.substr(0, semi));
      if (semi != std::string::npos) j.bindings = trim(std::string_view(inner).substr(semi + 1));
      std::string tail = trim(std::string_view(item).substr(close + 1));
      if (!tail.empty()) {
        if (tail.rfind("as", 0) != 0) throw ParseError("unexpected text after fclemma(...): " + tail, 0);
        j.label = trim(std::string_view(tail).substr(2));
        if (!is_identifier(j.label)) throw ParseError("bad lemma label '" + j.label + "'", 0);
      }
      if (!is_identifier(j.schema)) throw ParseError("bad schema name '" + j.schema + "'", 0);
    } else {
      throw ParseError("unknown justification '" + item + "'", 0);
    }
    out.push_back(std::move(j));
  }
  return out;
}

std::string print_justifications(const Justifications& js) {
  std::string out;
  for (size_t i = 0; i < js.size(); ++i) out += (i ? " & " : "") + js[i].text();
  return out;
}

TietzeMove TietzeMove::add_relation(std::string name, std::string text, Justifications by) {
  TietzeMove m;
  m.kind = Kind::AddRelations;
  m.relations.push_back({std::move(name), std::move(text), std::move(by)});
  return m;
}

TietzeMove TietzeMove::remove_relation(std::string name, Justifications by) {
  TietzeMove m;
  m.kind = Kind::RemoveRelations;
  m.relations.push_back({std::move(name), "", std::move(by)});
  return m;
}

TietzeMove TietzeMove::add_generator(std::string symbol, NormValue norm, std::string text, Justifications by) {
  TietzeMove m;
  m.kind = Kind::AddGenerators;
  std::string rel = "def_" + symbol;
  m.generators.push_back({std::move(symbol), norm, std::move(text), std::move(rel), std::move(by)});
  return m;
}

TietzeMove TietzeMove::remove_generator(std::string symbol, std::string relation, Justifications by) {
  TietzeMove m;
  m.kind = Kind::RemoveGenerators;
  m.generators.push_back({std::move(symbol), NormValue(), "", std::move(relation), std::move(by)});
  return m;
}

std::string TietzeMove::text() const {
  std::string out;
  auto by = [](const Justifications& js) { return js.empty() ? std::string() : " by " + print_justifications(js); };
  for (const auto& r : relations) {
    if (!out.empty()) out += "; ";
    if (kind == Kind::AddRelations)
      out += "addrel " + r.name + " := " + r.text + by(r.by);
    else
      out += "delrel " + r.name + by(r.by);
  }
  for (const auto& g : generators) {
    if (!out.empty()) out += "; ";
    if (kind == Kind::AddGenerators) {
      out += "addgen " + g.symbol + " : " + g.norm.str() + " := " + g.text;
      if (g.relation != "def_" + g.symbol) out += " as " + g.relation;
      out += by(g.by);
    } else {
      out += "delgen " + g.symbol + " via " + g.relation + by(g.by);
    }
  }
  return out;
}

std::optional<NormalForm> eliminable(const NormalForm& body, const std::string& symbol) {
  Coefficient c = body.coeff({Atom::gen(symbol)});
  if (c.is_zero()) return std::nullopt;
  NormalForm rest = body - NormalForm::monomial({Atom::gen(symbol)}, c);
  if (rest.mentions(symbol)) return std::nullopt;
  return Coefficient(-1) / c * rest;
}

namespace {

struct Context {
  const CheckOptions& options;
  MoveOutcome& out;

  const LemmaRegistry& registry() const {
    return options.registry ? *options.registry : LemmaRegistry::active();
  }

  void gap(const std::string& g) { out.gaps.push_back(g); }
};

struct Evidence {
  RelationTable table;
  std::vector<LemmaInstance> identities;
  std::vector<LemmaInstance> bounds;
  bool unverified = false;
};

Evidence gather(Context& cx, const Justifications& js, const Presentation& ambient) {
  Evidence ev;
  ev.table = relation_table(ambient);
  for (const auto& j : js) {
    if (j.kind != Justification::Kind::Lemma) continue;
    if (!cx.options.use_registry) {
      cx.gap("fclemma-unverified: " + j.text());
      ev.unverified = true;
      continue;
    }
    LemmaInstance inst;
    try {
      inst = instantiate_lemma(j.schema, j.bindings, ambient, cx.registry());
    } catch (const ParseError& e) {
      throw TietzeError(std::string("lemma bindings: ") + e.what());
    } catch (const LemmaError& e) {
      throw TietzeError(e.what());
    }
    std::string used;
    for (const auto& d : inst.discharged) used += (used.empty() ? "" : ", ") + d;
    cx.out.notes.push_back("fclemma " + j.schema + " discharged [" + used + "]");
    if (inst.kind == LemmaSchema::Kind::Identity) {
      ev.table.emplace_back(j.label.empty() ? j.schema : j.label, inst.conclusion);
      ev.identities.push_back(std::move(inst));
    } else {
      ev.bounds.push_back(std::move(inst));
    }
  }
  return ev;
}

// Justifies body in the ideal of the ambient relations (plus lemma conclusions).
void justify_relation(Context& cx, const std::string& what, const NormalForm& body, const Justifications& js,
                      const Presentation& ambient) {
  if (js.empty()) throw TietzeError(what + ": no justification given");
  Evidence ev = gather(cx, js, ambient);
  bool certified = false, has_cert = false, oracle = false;
  for (const auto& j : js) {
    if (j.kind == Justification::Kind::Oracle) oracle = true;
    if (j.kind != Justification::Kind::Certificate && j.kind != Justification::Kind::AutoCertificate) continue;
    has_cert = true;
    if (ev.unverified) continue;
    if (j.kind == Justification::Kind::Certificate) {
      Certificate c = j.cert_text.empty() ? j.cert : parse_certificate(j.cert_text, ambient.gens);
      NormalForm sum;
      try {
        sum = expand_certificate(c, ev.table);
      } catch (const Error& e) {
        throw TietzeError(what + ": " + e.what());
      }
      if (!(sum == body))
        throw TietzeError(what + ": certificate expands to " + print_term(sum) + ", expected " + print_term(body));
      cx.out.notes.push_back("certificate checked");
      certified = true;
    } else {
      CertificateSearch opts;
      opts.max_degree = cx.options.cert_degree;
      auto found = find_certificate(ev.table, body, ambient.gens.names(), opts);
      if (!found)
        throw TietzeError(what + ": no certificate found with factor degree <= " +
                          std::to_string(cx.options.cert_degree));
      cx.out.notes.push_back("certificate found: " + print_certificate(*found));
      certified = true;
    }
  }
  if (!has_cert && !ev.unverified) {
    for (const auto& inst : ev.identities)
      if (proportional(inst.conclusion, body)) certified = true;
    if (!certified && !ev.identities.empty())
      throw TietzeError(what + ": lemma conclusion " + print_term(ev.identities.front().conclusion) +
                        " does not match " + print_term(body));
  }
  if (oracle && !certified) cx.gap("oracle-pending: " + what);
  if (!certified && !oracle && !ev.unverified) throw TietzeError(what + ": not justified");
}

// Discharges ||t|| <= lambda in the quotient `ambient`.
void justify_norm(Context& cx, const std::string& symbol, const NormalForm& t, const NormValue& lambda,
                  const Justifications& js, const Presentation& ambient) {
  Rational est = norm_upper_bound(t, ambient.gens, ambient.facts());
  if (est * est <= lambda.square()) {
    cx.out.notes.push_back("norm of " + symbol + " bounded by " + to_string(est) + " <= " + lambda.str());
    return;
  }
  Evidence ev = gather(cx, js, ambient);
  for (const auto& inst : ev.bounds) {
    if (!(inst.conclusion == t)) continue;
    if (inst.bound.square() <= lambda.square()) {
      cx.out.notes.push_back("norm of " + symbol + " bounded by lemma " + inst.schema + ": " + inst.bound.str());
      return;
    }
  }
  if (ev.unverified) return;
  cx.gap("unverified-norm-gap: ||" + print_term(t) + "|| <= " + lambda.str() + " for " + symbol + " (estimate " +
         to_string(est) + ")");
}

}  // namespace

MoveOutcome apply_move(const Presentation& p, const TietzeMove& m, const CheckOptions& options) {
  MoveOutcome out;
  Context cx{options, out};
  Presentation q = p;
  switch (m.kind) {
    case TietzeMove::Kind::AddRelations: {
      std::vector<Relation> added;
      for (const auto& item : m.relations) {
        std::vector<Relation> rels;
        try {
          rels = parse_relation(item.name, item.text, p.gens);
        } catch (const ParseError& e) {
          throw TietzeError("relation " + item.name + ": " + e.what());
        }
        for (auto& r : rels) {
          if (p.has_relation(r.name)) throw TietzeError("relation name '" + r.name + "' already in use");
          justify_relation(cx, "relation " + r.name, r.body, item.by, p);
          added.push_back(std::move(r));
        }
      }
      for (auto& r : added) q.add_relation(std::move(r));
      break;
    }
    case TietzeMove::Kind::RemoveRelations: {
      for (const auto& item : m.relations) {
        if (!p.has_relation(item.name)) throw TietzeError("no relation named '" + item.name + "'");
        q.remove_relation(item.name);
      }
      for (const auto& item : m.relations)
        justify_relation(cx, "relation " + item.name, p.find(item.name)->body, item.by, q);
      break;
    }
    case TietzeMove::Kind::AddGenerators: {
      std::vector<std::pair<const GeneratorItem*, NormalForm>> defs;
      for (const auto& g : m.generators) {
        if (!is_identifier(g.symbol) || is_reserved_word(g.symbol))
          throw TietzeError("invalid generator name '" + g.symbol + "'");
        if (p.gens.contains(g.symbol)) throw TietzeError("generator '" + g.symbol + "' already declared");
        NormalForm t;
        try {
          t = parse_term(g.text, p.gens);
        } catch (const ParseError& e) {
          throw TietzeError("definition of " + g.symbol + ": " + e.what());
        }
        justify_norm(cx, g.symbol, t, g.norm, g.by, p);
        defs.emplace_back(&g, std::move(t));
      }
      for (const auto& [g, t] : defs) q.gens.add(g->symbol, g->norm);
      for (const auto& [g, t] : defs) {
        std::string name = g->relation.empty() ? "def_" + g->symbol : g->relation;
        if (q.has_relation(name)) throw TietzeError("relation name '" + name + "' already in use");
        q.add_relation({name, NormalForm::gen(g->symbol) - t, "def"});
      }
      break;
    }
    case TietzeMove::Kind::RemoveGenerators: {
      for (size_t i = 0; i < m.generators.size(); ++i) {
        const GeneratorItem& g = m.generators[i];
        if (!q.gens.contains(g.symbol)) throw TietzeError("no generator named '" + g.symbol + "'");
        const Relation* def = q.find(g.relation);
        if (!def) throw TietzeError("no relation named '" + g.relation + "'");
        auto t = eliminable(def->body, g.symbol);
        if (!t)
          throw TietzeError("relation " + g.relation + " is not of the form " + g.symbol + " - t with t free of " +
                            g.symbol);
        for (size_t k = i + 1; k < m.generators.size(); ++k)
          if (t->mentions(m.generators[k].symbol))
            throw TietzeError("definition of " + g.symbol + " uses " + m.generators[k].symbol +
                              ", which is removed later in the same move");
        NormValue lambda = q.gens.norm(g.symbol);
        Presentation next;
        next.flavor = q.flavor;
        next.notes = q.notes;
        next.gens = q.gens;
        next.gens.remove(g.symbol);
        for (const auto& r : q.relations) {
          if (r.name == g.relation) continue;
          NormalForm body = substitute(r.body, {{g.symbol, *t}});
          if (body.mentions(g.symbol)) throw TietzeError("internal: " + g.symbol + " survived substitution");
          next.relations.push_back({r.name, body, r.origin});
        }
        justify_norm(cx, g.symbol, *t, lambda, g.by, next);
        out.eliminated.emplace_back(g.symbol, *t);
        q = std::move(next);
      }
      break;
    }
  }
  if (options.mode == Mode::Strict && !out.gaps.empty()) throw TietzeError("strict mode: " + out.gaps.front());
  out.result = std::move(q);
  return out;
}


namespace {

// Position of the keyword ` word ` at bracket depth zero, or npos.
size_t find_keyword(const std::string& s, const std::string& word, bool last = false) {
  int depth = 0;
  size_t found = std::string::npos;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (depth != 0 || c != ' ') continue;
    if (s.compare(i + 1, word.size(), word) == 0 && i + 1 + word.size() < s.size() && s[i + 1 + word.size()] == ' ') {
      found = i;
      if (!last) return i;
    }
  }
  return found;
}

// Splits "main by justification".
std::pair<std::string, Justifications> split_by(const std::string& s) {
  size_t at = find_keyword(s, "by");
  if (at == std::string::npos) return {trim(s), {}};
  return {trim(std::string_view(s).substr(0, at)), parse_justifications(std::string_view(s).substr(at + 4))};
}

std::string strip_number(const std::string& line) {
  size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')' || line[i] == ':')) return trim(line.substr(i + 1));
  return line;
}

TietzeMove parse_step(const std::string& line) {
  std::string body = strip_number(line);
  size_t sp = body.find(' ');
  std::string kw = body.substr(0, sp);
  std::string rest = sp == std::string::npos ? "" : trim(std::string_view(body).substr(sp + 1));
  if (kw == "addrel") {
    size_t def = rest.find(":=");
    if (def == std::string::npos) throw ParseError("addrel needs 'name := relation'", 0);
    auto [text, by] = split_by(" " + trim(std::string_view(rest).substr(def + 2)));
    return TietzeMove::add_relation(trim(std::string_view(rest).substr(0, def)), text, by);
  }
  if (kw == "delrel") {
    auto [name, by] = split_by(" " + rest);
    return TietzeMove::remove_relation(name, by);
  }
  if (kw == "addgen") {
    size_t def = rest.find(":=");
    if (def == std::string::npos) throw ParseError("addgen needs 's : norm := term'", 0);
    std::string head = rest.substr(0, def);
    size_t colon = head.find(':');
    if (colon == std::string::npos) throw ParseError("addgen needs a norm: 's : norm := term'", 0);
    auto [text, by] = split_by(" " + trim(std::string_view(rest).substr(def + 2)));
    std::string rel;
    size_t as = find_keyword(" " + text, "as", true);
    if (as != std::string::npos) {
      rel = trim(std::string_view(" " + text).substr(as + 4));
      text = trim(std::string_view(" " + text).substr(0, as));
    }
    auto m = TietzeMove::add_generator(trim(head.substr(0, colon)), NormValue::parse(trim(head.substr(colon + 1))),
                                       text, by);
    if (!rel.empty()) m.generators.front().relation = rel;
    return m;
  }
  if (kw == "delgen") {
    auto [main, by] = split_by(" " + rest);
    size_t via = find_keyword(" " + main, "via");
    if (via == std::string::npos) throw ParseError("delgen needs 's via relation'", 0);
    std::string padded = " " + main;
    return TietzeMove::remove_generator(trim(padded.substr(0, via)), trim(padded.substr(via + 5)), by);
  }
  throw ParseError("unknown step '" + kw + "'", 0);
}

std::string resolve(const std::string& base, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute() || base.empty()) return path;
  return (std::filesystem::path(base) / p).string();
}

}  // namespace

Derivation parse_derivation(std::string_view text, const std::string& base_dir) {
  Derivation d;
  bool have_start = false;
  size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string raw(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    size_t hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    try {
      if (line.rfind("start:", 0) == 0) {
        d.start_path = trim(std::string_view(line).substr(6));
        d.start = load_presentation(resolve(base_dir, d.start_path));
        have_start = true;
      } else if (line.rfind("end:", 0) == 0) {
        d.end_path = trim(std::string_view(line).substr(4));
        d.end = load_presentation(resolve(base_dir, d.end_path));
      } else {
        TietzeMove m = parse_step(line);
        m.line = static_cast<int>(line_no);
        d.steps.push_back(std::move(m));
      }
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), e.position());
    }
  }
  if (!have_start) throw ParseError("derivation has no 'start:' line", 0);
  return d;
}

Derivation load_derivation(const std::string& path) {
  std::string dir = std::filesystem::path(path).parent_path().string();
  return parse_derivation(read_file(path), dir.empty() ? "." : dir);
}

std::string print_derivation(const Derivation& d) {
  std::string out = "start: " + d.start_path + "\n";
  if (!d.end_path.empty()) out += "end: " + d.end_path + "\n";
  for (size_t i = 0; i < d.steps.size(); ++i) out += std::to_string(i + 1) + ". " + d.steps[i].text() + "\n";
  return out;
}

DerivationReport check_derivation(const Derivation& d, const CheckOptions& options) {
  DerivationReport r;
  r.mode = options.mode;
  Presentation cur = d.start;
  for (const auto& s : cur.gens.names()) r.translation[s] = NormalForm::gen(s);
  auto diags = validate(cur);
  if (!diags.empty()) {
    r.message = "start presentation invalid: " + diags.front();
    r.result = cur;
    return r;
  }
  for (size_t i = 0; i < d.steps.size(); ++i) {
    const TietzeMove& m = d.steps[i];
    StepReport sr;
    sr.step = static_cast<int>(i + 1);
    sr.line = m.line;
    sr.kind = move_kind_name(m.kind);
    sr.text = m.text();
    if (r.failed_step) {
      sr.status = "skipped";
      r.steps.push_back(std::move(sr));
      continue;
    }
    try {
      MoveOutcome o = apply_move(cur, m, options);
      sr.status = o.gaps.empty() ? "ok" : "gap";
      sr.gaps = o.gaps;
      sr.notes = o.notes;
      for (const auto& g : o.gaps) r.gaps.push_back("step " + std::to_string(sr.step) + ": " + g);
      for (const auto& [sym, t] : o.eliminated)
        for (auto& [s, term] : r.translation) term = substitute(term, {{sym, t}});
      cur = std::move(o.result);
    } catch (const Error& e) {
      sr.status = "fail";
      sr.message = e.what();
      r.failed_step = sr.step;
      r.message = "step " + std::to_string(sr.step) + " failed: " + e.what();
    }
    r.steps.push_back(std::move(sr));
  }
  r.result = cur;
  if (!r.failed_step && d.end) {
    r.end_checked = true;
    r.end_matches = structurally_equal(cur, *d.end);
    if (!r.end_matches) r.message = "final presentation differs from the claimed end";
  }
  r.pass = !r.failed_step && (!d.end || r.end_matches) && r.message.empty();
  return r;
}

std::string format_report(const DerivationReport& r) {
  std::string out = "derivation check (" + mode_name(r.mode) + ")\n";
  for (const auto& s : r.steps) {
    out += "  step " + std::to_string(s.step) + " [" + s.status + "] " + s.text + "\n";
    for (const auto& n : s.notes) out += "      " + n + "\n";
    for (const auto& g : s.gaps) out += "      gap: " + g + "\n";
    if (!s.message.empty()) out += "      error: " + s.message + "\n";
  }
  if (r.end_checked) out += std::string("end presentation: ") + (r.end_matches ? "matches" : "differs") + "\n";
  if (!r.end_checked && !r.failed_step) out += "end presentation: not claimed\n";
  if (!r.message.empty()) out += r.message + "\n";
  out += "gaps: " + std::to_string(r.gaps.size()) + "\n";
  out += std::string("result: ") + (r.pass ? "PASS" : "FAIL") + "\n";
  return out;
}

nlohmann::ordered_json to_json(const DerivationReport& r) {
  nlohmann::ordered_json out;
  out["kind"] = "derivation";
  out["mode"] = mode_name(r.mode);
  out["pass"] = r.pass;
  out["failed_step"] = r.failed_step;
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"step", s.step},
                     {"line", s.line},
                     {"kind", s.kind},
                     {"text", s.text},
                     {"status", s.status},
                     {"gaps", s.gaps},
                     {"notes", s.notes},
                     {"message", s.message}});
  out["steps"] = steps;
  out["gaps"] = r.gaps;
  out["end"] = {{"checked", r.end_checked}, {"matches", r.end_matches}};
  out["message"] = r.message;
  out["result"] = to_json(r.result);
  nlohmann::ordered_json tr = nlohmann::ordered_json::object();
  for (const auto& [s, t] : r.translation) tr[s] = print_term(t);
  out["translation"] = tr;
  return out;
}

namespace {

Justification certificate_justification(const Certificate& c) {
  Justification j;
  j.kind = Justification::Kind::Certificate;
  j.cert = c;
  j.cert_text = print_certificate(c);
  return j;
}

// a when body is the positivity expansion a - p((a + a*)/2).
std::optional<NormalForm> positivity_subject(const NormalForm& body) {
  for (const auto& [m, c] : body.terms()) {
    if (m.size() != 1 || m[0].kind != Atom::Kind::Call || m[0].name != "p" || !(c == Coefficient(-1))) continue;
    NormalForm a = body + NormalForm::atom(m[0]);
    if (positivity_body(a) == body) return a;
  }
  return std::nullopt;
}

// Evidence for adding `body` to `cur`: a certificate if one exists at the
// degree, a positivity lemma for s >= 0 with s defined in `cur`, else oracle.
Justifications auto_justify(const Presentation& cur, const NormalForm& body, int degree) {
  CertificateSearch opts;
  opts.max_degree = degree;
  if (auto c = find_certificate(relation_table(cur), body, cur.gens.names(), opts))
    return {certificate_justification(*c)};
  if (auto a = positivity_subject(body)) {
    for (const auto& s : cur.gens.names()) {
      if (!(*a == NormalForm::gen(s))) continue;
      for (const auto& r : cur.relations) {
        auto t = eliminable(r.body, s);
        if (!t) continue;
        Justification j;
        j.kind = Justification::Kind::Lemma;
        j.schema = "positive_by_definition";
        j.bindings = "s = " + s + ", T = " + print_term(*t);
        try {
          auto inst = instantiate_lemma(j.schema, j.bindings, cur);
          if (proportional(inst.conclusion, body)) return {j};
        } catch (const Error&) {
        }
      }
    }
  }
  Justification o;
  o.kind = Justification::Kind::Oracle;
  return {o};
}

std::string fresh_name(const std::string& base, const std::set<std::string>& used) {
  if (!used.count(base)) return base;
  for (int k = 2;; ++k) {
    std::string n = base + "_" + std::to_string(k);
    if (!used.count(n)) return n;
  }
}

struct Skeleton {
  Presentation start;
  std::map<std::string, NormalForm> defs;  // new generator -> term over start
  const Presentation* defs_owner;           // norms of the new generators
  std::vector<Relation> extra;              // relations to add afterwards
};

Derivation build_skeleton(const Skeleton& sk, const Presentation& joint, int degree,
                          const std::vector<std::string>& order) {
  Derivation d;
  d.start = sk.start;
  d.end = joint;
  Presentation cur = sk.start;
  CheckOptions permissive;
  permissive.mode = Mode::Permissive;
  for (const auto& s : order) {
    auto m = TietzeMove::add_generator(s, sk.defs_owner->gens.norm(s), print_term(sk.defs.at(s)));
    cur = apply_move(cur, m, permissive).result;
    d.steps.push_back(std::move(m));
  }
  for (const auto& r : sk.extra) {
    auto m = TietzeMove::add_relation(r.name, print_term(r.body), auto_justify(cur, r.body, degree));
    cur = apply_move(cur, m, permissive).result;
    d.steps.push_back(std::move(m));
  }
  return d;
}

}  // namespace

BridgeResult bridge(const Presentation& p1, const Presentation& p2, const std::map<std::string, std::string>& dict1,
                    const std::map<std::string, std::string>& dict2, const BridgeOptions& options) {
  if (p1.flavor != p2.flavor) throw TietzeError("bridge needs presentations of the same flavor");
  BridgeResult res;
  std::set<std::string> used(p1.gens.names().begin(), p1.gens.names().end());
  for (const auto& s : p2.gens.names()) used.insert(s);
  for (const auto& s : p2.gens.names())
    if (p1.gens.contains(s)) {
      std::string n = fresh_name(s + "_2", used);
      used.insert(n);
      res.renames[s] = n;
    }
  auto rn = [&](const std::string& s) {
    auto it = res.renames.find(s);
    return it == res.renames.end() ? s : it->second;
  };

  Presentation q2;
  q2.flavor = p2.flavor;
  for (const auto& s : p2.gens.names()) q2.gens.add(rn(s), p2.gens.norm(s));
  for (const auto& r : p2.relations) q2.relations.push_back({r.name, rename(r.body, res.renames), r.origin});

  std::map<std::string, NormalForm> d1, d2;  // p1 gens -> over q2; q2 gens -> over p1
  for (const auto& s : p1.gens.names()) {
    auto it = dict1.find(s);
    if (it == dict1.end()) throw TietzeError("first dictionary has no image for '" + s + "'");
    d1[s] = rename(parse_term(it->second, p2.gens), res.renames);
  }
  for (const auto& s : p2.gens.names()) {
    auto it = dict2.find(s);
    if (it == dict2.end()) throw TietzeError("second dictionary has no image for '" + s + "'");
    d2[rn(s)] = parse_term(it->second, p1.gens);
  }
  for (const auto& [k, v] : dict1)
    if (!p1.gens.contains(k)) throw TietzeError("first dictionary maps unknown generator '" + k + "'");
  for (const auto& [k, v] : dict2)
    if (!p2.gens.contains(k)) throw TietzeError("second dictionary maps unknown generator '" + k + "'");

  auto check_cap = [&](const std::string& s, const NormalForm& t, const NormValue& cap, const Presentation& over) {
    Rational est = norm_upper_bound(t, over.gens, over.facts());
    if (est * est <= cap.square()) return;
    std::string g = "norm-cap: image " + print_term(t) + " of " + s + " has norm estimate " + to_string(est) +
                    " > " + cap.str();
    if (options.mode == Mode::Strict) throw TietzeError(g);
    res.gaps.push_back(g);
  };
  for (const auto& s : p1.gens.names()) check_cap(s, d1[s], p1.gens.norm(s), q2);
  for (const auto& s : q2.gens.names()) check_cap(s, d2[s], q2.gens.norm(s), p1);

  // Joint relation names: R1, M1 (def_ for q2's generators), R2, M2.
  std::set<std::string> names;
  std::vector<Relation> r1, m1, r2, m2;
  auto take = [&](std::vector<Relation>& into, const std::string& base, const NormalForm& body,
                  const std::string& origin) {
    std::string n = fresh_name(base, names);
    names.insert(n);
    into.push_back({n, body, origin});
  };
  for (const auto& s : q2.gens.names()) names.insert("def_" + s);
  for (const auto& s : p1.gens.names()) names.insert("def_" + s);
  for (const auto& r : p1.relations) take(r1, r.name, r.body, r.origin);
  for (const auto& r : q2.relations) take(r2, r.name, r.body, r.origin);
  for (const auto& s : q2.gens.names()) m1.push_back({"def_" + s, NormalForm::gen(s) - d2[s], "def"});
  for (const auto& s : p1.gens.names()) m2.push_back({"def_" + s, NormalForm::gen(s) - d1[s], "def"});

  // The skeletons start from presentations whose relation names match the joint's.
  Presentation s1 = p1, s2 = q2;
  s1.relations = r1;
  s2.relations = r2;

  Presentation& joint = res.joint;
  joint.flavor = p1.flavor;
  for (const auto& s : p1.gens.names()) joint.gens.add(s, p1.gens.norm(s));
  for (const auto& s : q2.gens.names()) joint.gens.add(s, q2.gens.norm(s));
  for (const auto* part : {&r1, &m1, &r2, &m2})
    for (const auto& r : *part) joint.relations.push_back(r);

  Skeleton first{s1, d2, &q2, {}};
  first.extra.insert(first.extra.end(), r2.begin(), r2.end());
  first.extra.insert(first.extra.end(), m2.begin(), m2.end());
  res.first = build_skeleton(first, joint, options.cert_degree, q2.gens.names());

  Skeleton second{s2, d1, &p1, {}};
  second.extra.insert(second.extra.end(), r1.begin(), r1.end());
  second.extra.insert(second.extra.end(), m1.begin(), m1.end());
  res.second = build_skeleton(second, joint, options.cert_degree, p1.gens.names());
  return res;
}

SimplifyResult auto_simplify(const Presentation& p, const SimplifyBudget& budget) {
  SimplifyResult out;
  out.derivation.start = p;
  Presentation cur = p;
  CheckOptions strict;
  strict.cert_degree = budget.max_degree;
  auto attempt = [&](TietzeMove m) {
    try {
      MoveOutcome o = apply_move(cur, m, strict);
      cur = std::move(o.result);
      out.derivation.steps.push_back(std::move(m));
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  while (static_cast<int>(out.derivation.steps.size()) < budget.max_steps) {
    bool changed = false;
    for (const auto& r : cur.relations) {
      Presentation rest = cur;
      rest.remove_relation(r.name);
      CertificateSearch opts;
      opts.max_degree = budget.max_degree;
      auto c = find_certificate(relation_table(rest), r.body, rest.gens.names(), opts);
      if (c && attempt(TietzeMove::remove_relation(r.name, {certificate_justification(*c)}))) {
        changed = true;
        break;
      }
    }
    if (changed) continue;
    for (const auto& s : cur.gens.names()) {
      for (const auto& r : cur.relations)
        if (eliminable(r.body, s) && attempt(TietzeMove::remove_generator(s, r.name))) {
          changed = true;
          break;
        }
      if (changed) break;
    }
    if (!changed) break;
  }
  out.result = cur;
  out.derivation.end = cur;
  return out;
}

}  // namespace cstar
