#include "cstar/registry.hpp"

#include <cstdlib>

#include "cstar/parse.hpp"

namespace cstar {

namespace {

ParseError line_error(const std::string& message, size_t line) {
  return ParseError("line " + std::to_string(line) + ": " + message, line);
}

bool starts_with(const std::string& s, std::string_view p) { return s.compare(0, p.size(), p) == 0; }

std::vector<std::string> name_list(const std::string& text) {
  std::vector<std::string> out;
  for (auto& part : split_top_level(text, ',')) {
    std::string n = trim(part);
    if (!n.empty()) out.push_back(n);
  }
  return out;
}

FnDomain parse_domain(const std::string& text, int line) {
  if (text == "selfadjoint" || text == "self-adjoint") return FnDomain::SelfAdjoint;
  if (text == "positive") return FnDomain::Positive;
  throw line_error("unknown function domain '" + text + "'", static_cast<size_t>(line));
}

PolynomialPiece parse_piece(const std::string& body, int line) {
  auto colon = body.find(':');
  if (colon == std::string::npos) throw line_error("piece needs 'lo hi : coefficients'", static_cast<size_t>(line));
  std::string range = trim(body.substr(0, colon));
  auto space = range.find_first_of(" \t");
  if (space == std::string::npos) throw line_error("piece needs two breakpoints", static_cast<size_t>(line));
  PolynomialPiece pc;
  pc.lo = parse_scalar(trim(range.substr(0, space)));
  pc.hi = parse_scalar(trim(range.substr(space)));
  for (const auto& c : split_top_level(body.substr(colon + 1), ',')) pc.coeffs.push_back(parse_scalar(trim(c)));
  if (pc.coeffs.empty()) throw line_error("piece has no coefficients", static_cast<size_t>(line));
  return pc;
}

std::map<std::string, Rational> parse_sample(const std::string& text, int line) {
  std::map<std::string, Rational> out;
  for (const auto& part : split_top_level(text, ',')) {
    auto eq = part.find('=');
    if (eq == std::string::npos) throw line_error("sample needs name = value", static_cast<size_t>(line));
    out[trim(part.substr(0, eq))] = parse_scalar(trim(part.substr(eq + 1)));
  }
  return out;
}

// "T <= c" split at the last top-level "<=".
std::pair<std::string, std::string> split_le(const std::string& text, int line) {
  auto at = text.rfind("<=");
  if (at == std::string::npos) throw line_error("expected 'term <= bound'", static_cast<size_t>(line));
  return {trim(text.substr(0, at)), trim(text.substr(at + 2))};
}

}  // namespace

RegistryFile parse_registry(std::string_view text) {
  RegistryFile out;
  out.text = std::string(text);
  enum class Block { None, Function, Schema } block = Block::None;
  std::string fname;
  FnDomain fdomain = FnDomain::SelfAdjoint;
  std::vector<PolynomialPiece> pieces;
  LemmaSchema schema;
  bool has_conclusion = false;

  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    auto where = static_cast<size_t>(line_no);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (block == Block::Schema && schema.description.empty()) schema.description = trim(line.substr(1));
      continue;
    }

    if (block == Block::None) {
      if (starts_with(line, "function ")) {
        std::string rest = trim(line.substr(9));
        fdomain = FnDomain::SelfAdjoint;
        auto open = rest.find('[');
        if (open != std::string::npos) {
          auto close = rest.find(']', open);
          if (close == std::string::npos) throw line_error("unclosed '['", where);
          std::string opt = trim(rest.substr(open + 1, close - open - 1));
          if (!starts_with(opt, "domain:")) throw line_error("unknown function option '" + opt + "'", where);
          fdomain = parse_domain(trim(opt.substr(7)), line_no);
          rest = trim(rest.substr(0, open));
        }
        if (!is_identifier(rest) || is_reserved_word(rest))
          throw line_error("bad function name '" + rest + "'", where);
        fname = rest;
        pieces.clear();
        block = Block::Function;
      } else if (starts_with(line, "schema ")) {
        schema = LemmaSchema();
        schema.name = trim(line.substr(7));
        schema.origin = "registry";
        has_conclusion = false;
        block = Block::Schema;
      } else {
        throw line_error("expected 'function' or 'schema', got '" + line + "'", where);
      }
      continue;
    }

    if (line == "end") {
      if (block == Block::Function) {
        try {
          out.functions.push_back(make_piecewise_symbol(fname, pieces, fdomain));
        } catch (const Error& e) {
          throw line_error(e.what(), where);
        }
      } else {
        if (!has_conclusion) throw line_error("schema " + schema.name + " has no conclusion", where);
        out.schemas.push_back(schema);
      }
      block = Block::None;
      continue;
    }

    if (block == Block::Function) {
      if (!starts_with(line, "piece ")) throw line_error("expected 'piece' or 'end'", where);
      pieces.push_back(parse_piece(line.substr(6), line_no));
      continue;
    }

    auto colon = line.find(':');
    if (starts_with(line, "let ")) {
      auto eq = line.find('=');
      if (eq == std::string::npos) throw line_error("let needs '='", where);
      schema.lets.emplace_back(trim(line.substr(4, eq - 4)), trim(line.substr(eq + 1)));
      continue;
    }
    if (colon == std::string::npos) throw line_error("expected 'key: value' in schema " + schema.name, where);
    std::string key = trim(line.substr(0, colon)), value = trim(line.substr(colon + 1));
    if (key == "terms") {
      schema.term_vars = name_list(value);
    } else if (key == "scalars") {
      schema.scalar_vars = name_list(value);
    } else if (key == "where") {
      schema.scalar_conditions.push_back(value);
    } else if (key == "required") {
      schema.required.push_back(value);
    } else if (key == "positive") {
      schema.positive.push_back(value);
    } else if (key == "cap") {
      schema.caps.push_back(split_le(value, line_no));
    } else if (key == "conclude") {
      schema.kind = LemmaSchema::Kind::Identity;
      schema.conclusion = value;
      has_conclusion = true;
    } else if (key == "bound") {
      auto [t, c] = split_le(value, line_no);
      schema.kind = LemmaSchema::Kind::NormBound;
      schema.conclusion = t;
      schema.bound = c;
      has_conclusion = true;
    } else if (key == "sample") {
      schema.sample_scalars.push_back(parse_sample(value, line_no));
    } else {
      throw line_error("unknown schema field '" + key + "'", where);
    }
  }
  if (block != Block::None) throw line_error("missing 'end'", static_cast<size_t>(line_no));
  return out;
}

RegistryFile load_registry(const std::string& path) {
  RegistryFile f = parse_registry(read_file(path));
  f.path = path;
  return f;
}

void install_registry(const RegistryFile& file) {
  auto fns = std::make_shared<FunctionRegistry>(*FunctionRegistry::make_builtin());
  for (const auto& f : file.functions) fns->add(f);
  fns->add_fingerprint_text(file.text);
  auto lemmas = std::make_shared<LemmaRegistry>(*LemmaRegistry::make_builtin());
  for (const auto& s : file.schemas) lemmas->add(s);
  FunctionRegistry::set_active(fns);
  LemmaRegistry::set_active(lemmas);
}

void reset_registry() {
  FunctionRegistry::set_active(FunctionRegistry::make_builtin());
  LemmaRegistry::set_active(LemmaRegistry::make_builtin());
}

std::string default_registry_path() {
  const char* v = std::getenv("CSTAR_REGISTRY");
  return v ? v : "";
}

}  // namespace cstar
