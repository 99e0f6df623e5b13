#include "mapllt/harness/model_io.hpp"

#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mapllt/errors.hpp"

namespace mapllt::harness {

int ParsedModel::states() const {
  return isDiscrete() ? discrete().states() : localTime().states();
}

int ParsedModel::dim() const {
  return isDiscrete() ? discrete().dim() : localTime().projectedDim();
}

namespace {

// ---------------------------------------------------------------------------
// line scanner

struct Cursor {
  std::string source;
  int line = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidInput(source + ":" + std::to_string(line) + ": " + what);
  }
};

std::string strip(const std::string& raw) {
  std::string s = raw.substr(0, raw.find('#'));
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> tokens_of(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_number(const std::string& tok, const Cursor& at) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    at.fail("expected a number, got '" + tok + "'");
  }
  if (used != tok.size()) at.fail("expected a number, got '" + tok + "'");
  return v;
}

long parse_integer(const std::string& tok, const Cursor& at) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(tok, &used);
  } catch (const std::exception&) {
    at.fail("expected an integer, got '" + tok + "'");
  }
  if (used != tok.size()) at.fail("expected an integer, got '" + tok + "'");
  return v;
}

// ---------------------------------------------------------------------------
// law grammar

struct TokenStream {
  const std::vector<std::string>& toks;
  std::size_t pos = 0;
  const Cursor& at;

  bool done() const { return pos >= toks.size(); }
  const std::string& peek() const {
    if (done()) at.fail("law ended unexpectedly");
    return toks[pos];
  }
  std::string take() {
    const std::string& t = peek();
    ++pos;
    return t;
  }
  void expect(const std::string& word) {
    if (take() != word) at.fail("expected '" + word + "' in law");
  }
  double number() { return parse_number(take(), at); }
};

Vector read_vector(TokenStream& ts, int dim) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = ts.number();
  return v;
}

model::IncrementLaw parse_law(TokenStream& ts, int dim);

model::IncrementLaw parse_mixture(TokenStream& ts, int dim) {
  std::vector<double> weights;
  std::vector<model::IncrementLaw> components;
  while (!ts.done() && ts.peek() != ")") {
    weights.push_back(ts.number());
    ts.expect("(");
    components.push_back(parse_law(ts, dim));
    ts.expect(")");
  }
  if (weights.empty()) ts.at.fail("mixture law has no components");
  return model::IncrementLaw::mixture(std::move(weights), std::move(components));
}

model::IncrementLaw parse_law(TokenStream& ts, int dim) {
  const std::string kind = ts.take();
  if (kind == "point") return model::IncrementLaw::pointMass(read_vector(ts, dim));
  if (kind == "gaussian") {
    ts.expect("mean");
    Vector mean = read_vector(ts, dim);
    ts.expect("cov");
    Matrix cov(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) cov(i, j) = ts.number();
    return model::IncrementLaw::gaussian(std::move(mean), std::move(cov));
  }
  if (kind == "uniform") {
    ts.expect("lo");
    Vector lo = read_vector(ts, dim);
    ts.expect("hi");
    Vector hi = read_vector(ts, dim);
    return model::IncrementLaw::uniformBox(std::move(lo), std::move(hi));
  }
  if (kind == "mixture") return parse_mixture(ts, dim);
  ts.at.fail("unknown law kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// file assembly

struct RawLaw {
  int from = 0;
  int to = 0;
  std::vector<std::string> toks;
  Cursor at;
};

}  // namespace

ParsedModel parse_model(std::istream& in, const std::string& source) {
  Cursor at{source, 0};
  std::string section;
  std::string name;
  int dimension = -1;
  std::string chainKind;
  std::vector<std::vector<double>> rows;
  std::vector<int> rowLines;  // parallel to rows, for shape diagnostics
  std::vector<RawLaw> laws;
  bool sawIncrements = false;

  std::string raw;
  while (std::getline(in, raw)) {
    ++at.line;
    const std::string line = strip(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') at.fail("malformed section header");
      section = line.substr(1, line.size() - 2);
      if (section != "meta" && section != "chain" && section != "increments")
        at.fail("unknown section [" + section + "]");
      if (section == "increments") sawIncrements = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) at.fail("expected 'key = value'");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (section == "meta") {
      if (key == "name") {
        name = value;
      } else if (key == "dimension") {
        dimension = static_cast<int>(parse_integer(value, at));
      } else {
        at.fail("unknown [meta] key '" + key + "'");
      }
    } else if (section == "chain") {
      if (key == "kind") {
        if (value != "stochastic" && value != "generator")
          at.fail("chain kind must be 'stochastic' or 'generator', got '" + value + "'");
        chainKind = value;
      } else if (key == "row") {
        std::vector<double> row;
        for (const auto& tok : tokens_of(value)) row.push_back(parse_number(tok, at));
        rows.push_back(std::move(row));
        rowLines.push_back(at.line);
      } else {
        at.fail("unknown [chain] key '" + key + "'");
      }
    } else if (section == "increments") {
      if (key != "law") at.fail("unknown [increments] key '" + key + "'");
      auto toks = tokens_of(value);
      if (toks.size() < 3) at.fail("law needs '<from> <to> <spec>'");
      RawLaw rl;
      rl.at = at;
      rl.from = static_cast<int>(parse_integer(toks[0], at));
      rl.to = static_cast<int>(parse_integer(toks[1], at));
      rl.toks.assign(toks.begin() + 2, toks.end());
      laws.push_back(std::move(rl));
    } else {
      at.fail("content before any section header");
    }
  }

  at.line = 0;  // errors below concern the file as a whole
  if (name.empty()) at.fail("[meta] name is required");
  if (chainKind.empty()) at.fail("[chain] kind is required");
  if (rows.empty()) at.fail("[chain] has no rows");
  const int n = static_cast<int>(rows.size());
  Matrix chain(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n) {
      at.line = rowLines[static_cast<std::size_t>(i)];
      at.fail("chain row " + std::to_string(i + 1) + " has " +
              std::to_string(rows[static_cast<std::size_t>(i)].size()) + " entries, expected " +
              std::to_string(n));
    }
    for (int j = 0; j < n; ++j) chain(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }

  if (chainKind == "generator") {
    if (sawIncrements) at.fail("generator models carry local times; [increments] not allowed");
    if (dimension >= 0 && dimension != n - 1)
      at.fail("dimension " + std::to_string(dimension) + " does not match projected dimension " +
              std::to_string(n - 1));
    return ParsedModel{name, model::LocalTimeMapModel(markov::Generator(std::move(chain)))};
  }

  if (dimension < 1) at.fail("[meta] dimension >= 1 is required for discrete models");
  std::vector<std::optional<model::IncrementLaw>> table(static_cast<std::size_t>(n) *
                                                        static_cast<std::size_t>(n));
  for (auto& rl : laws) {
    if (rl.from < 1 || rl.from > n || rl.to < 1 || rl.to > n)
      rl.at.fail("law states (" + std::to_string(rl.from) + "," + std::to_string(rl.to) +
                 ") outside 1.." + std::to_string(n));
    auto& slot = table[static_cast<std::size_t>(rl.from - 1) * static_cast<std::size_t>(n) +
                       static_cast<std::size_t>(rl.to - 1)];
    if (slot.has_value())
      rl.at.fail("duplicate law for transition (" + std::to_string(rl.from) + "," +
                 std::to_string(rl.to) + ")");
    TokenStream ts{rl.toks, 0, rl.at};
    slot = parse_law(ts, dimension);
    if (!ts.done()) rl.at.fail("trailing tokens after law: '" + ts.peek() + "'");
  }
  return ParsedModel{name, model::DiscreteMapModel(markov::StochasticMatrix(std::move(chain)),
                                                   std::move(table), dimension)};
}

ParsedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open model file '" + path.string() + "'");
  return parse_model(in, path.string());
}

}  // namespace mapllt::harness
