#include "ideval/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace ideval {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::string stripped = line;
  const auto hash = stripped.find('#');
  if (hash != std::string::npos) stripped.resize(hash);
  std::istringstream in(stripped);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

double parseReal(const std::string& tok, int line) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + tok + "'", line);
  }
  if (used != tok.size())
    throw ParseError("expected a number, got '" + tok + "'", line);
  return v;
}

int parseInt(const std::string& tok, int line) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &used);
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + tok + "'", line);
  }
  if (used != tok.size())
    throw ParseError("expected an integer, got '" + tok + "'", line);
  return v;
}

struct VariableDecl {
  Variable var;
  int line = 0;
  bool used = false;
};

// Table of a node in file order: scope = parents as listed, then the node
// itself, last position fastest.
std::vector<double> tableInFileOrder(const InfluenceDiagram& diagram, const Node& n) {
  std::vector<Variable> fileScope;
  for (const auto& p : n.parents) fileScope.push_back(diagram.node(p).variable());
  if (n.kind == NodeKind::Random) fileScope.push_back(n.variable());
  std::vector<double> out(n.table.size());
  std::vector<int> config(fileScope.size(), 0);
  std::vector<std::size_t> strides(fileScope.size(), 0);
  for (std::size_t i = 0; i < fileScope.size(); ++i) {
    const int idx = n.table.scopeIndex(fileScope[i].name);
    strides[i] = n.table.strides()[static_cast<std::size_t>(idx)];
  }
  std::size_t src = 0;
  for (std::size_t dst = 0;;) {
    out[dst] = n.table.values()[src];
    if (++dst == out.size()) break;
    for (std::size_t j = fileScope.size(); j-- > 0;) {
      ++config[j];
      src += strides[j];
      if (config[j] < fileScope[j].cardinality) break;
      src -= strides[j] * static_cast<std::size_t>(fileScope[j].cardinality);
      config[j] = 0;
    }
  }
  return out;
}

}  // namespace

std::string formatReal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

InfluenceDiagram parseNetwork(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  bool sawHeader = false;

  std::map<std::string, VariableDecl> decls;
  struct PendingNode {
    NodeKind kind;
    std::string name;
    std::vector<std::string> parents;
    std::vector<double> table;
    bool hasTable = false;
    int line = 0;
  };
  std::vector<PendingNode> pending;
  std::map<std::string, int> nodeLines;

  while (std::getline(in, line)) {
    ++lineNo;
    std::vector<std::string> tokens = tokenize(line);
    if (tokens.empty()) continue;
    const std::string& directive = tokens[0];

    if (!sawHeader) {
      if (directive != "idnet")
        throw ParseError("file must start with 'idnet <version>'", lineNo);
      if (tokens.size() != 2 || parseInt(tokens[1], lineNo) != 1)
        throw ParseError("unsupported format version", lineNo);
      sawHeader = true;
      continue;
    }

    if (directive == "idnet") throw ParseError("duplicate header", lineNo);

    if (directive == "variable") {
      if (tokens.size() < 3)
        throw ParseError("variable needs a name and a cardinality", lineNo);
      VariableDecl decl;
      decl.var.name = tokens[1];
      decl.var.cardinality = parseInt(tokens[2], lineNo);
      if (decl.var.cardinality < 1)
        throw ParseError("variable '" + tokens[1] + "' needs cardinality >= 1", lineNo);
      for (std::size_t i = 3; i < tokens.size(); ++i)
        decl.var.labels.push_back(tokens[i]);
      if (!decl.var.labels.empty() &&
          static_cast<int>(decl.var.labels.size()) != decl.var.cardinality)
        throw ParseError("variable '" + tokens[1] + "' label count does not match cardinality",
                         lineNo);
      decl.line = lineNo;
      if (!decls.emplace(decl.var.name, decl).second)
        throw ParseError("duplicate variable '" + tokens[1] + "'", lineNo);
      continue;
    }

    NodeKind kind;
    if (directive == "random")
      kind = NodeKind::Random;
    else if (directive == "decision")
      kind = NodeKind::Decision;
    else if (directive == "value")
      kind = NodeKind::Value;
    else
      throw ParseError("unknown directive '" + directive + "'", lineNo);

    if (tokens.size() < 2)
      throw ParseError(directive + " needs a node name", lineNo);
    PendingNode node;
    node.kind = kind;
    node.name = tokens[1];
    node.line = lineNo;
    std::size_t i = 2;
    for (; i < tokens.size() && tokens[i] != ":"; ++i)
      node.parents.push_back(tokens[i]);
    if (i < tokens.size()) {  // a ':' token
      if (kind == NodeKind::Decision)
        throw ParseError("decision node '" + node.name + "' cannot carry a table", lineNo);
      node.hasTable = true;
      for (++i; i < tokens.size(); ++i)
        node.table.push_back(parseReal(tokens[i], lineNo));
    }
    if (kind != NodeKind::Decision && !node.hasTable)
      throw ParseError(directive + " node '" + node.name + "' needs a table", lineNo);
    if (!nodeLines.emplace(node.name, lineNo).second)
      throw ParseError("duplicate node '" + node.name + "'", lineNo);
    pending.push_back(std::move(node));
  }
  if (!sawHeader) throw ParseError("empty network file", 0);

  std::vector<Node> nodes;
  for (auto& p : pending) {
    Node node;
    node.kind = p.kind;
    node.name = p.name;
    node.parents = p.parents;
    if (p.kind == NodeKind::Value) {
      if (decls.count(p.name))
        throw ParseError("value node '" + p.name + "' must not declare a variable",
                         decls.at(p.name).line);
    } else {
      auto it = decls.find(p.name);
      if (it == decls.end())
        throw ParseError("node '" + p.name + "' has no variable declaration", p.line);
      it->second.used = true;
      node.cardinality = it->second.var.cardinality;
      node.labels = it->second.var.labels;
    }
    if (p.kind != NodeKind::Decision) {
      std::vector<Variable> scope;
      for (const auto& parent : p.parents) {
        auto it = decls.find(parent);
        if (it == decls.end())
          throw ParseError("node '" + p.name + "': parent '" + parent +
                               "' has no variable declaration",
                           p.line);
        it->second.used = true;
        scope.push_back(it->second.var);
      }
      if (p.kind == NodeKind::Random)
        scope.push_back(Variable{p.name, node.cardinality, node.labels});
      std::size_t expect = 1;
      for (const auto& v : scope) expect *= static_cast<std::size_t>(v.cardinality);
      if (p.table.size() != expect)
        throw ParseError("node '" + p.name + "': table has " +
                             std::to_string(p.table.size()) + " entries, expected " +
                             std::to_string(expect),
                         p.line);
      try {
        node.table = Factor(std::move(scope), std::move(p.table));
      } catch (const std::invalid_argument& e) {
        throw ParseError("node '" + p.name + "': " + e.what(), p.line);
      }
    }
    nodes.push_back(std::move(node));
  }

  for (const auto& [name, decl] : decls) {
    if (!nodeLines.count(name))
      throw ParseError("variable '" + name + "' has no node", decl.line);
  }

  try {
    return InfluenceDiagram(std::move(nodes));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
}

InfluenceDiagram loadNetwork(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parseNetwork(buffer.str());
}

std::string serializeNetwork(const InfluenceDiagram& diagram) {
  std::ostringstream out;
  out << "idnet 1\n";
  for (const auto& n : diagram.nodes()) {
    if (!n.hasFrame()) continue;
    out << "variable " << n.name << " " << n.cardinality;
    for (const auto& l : n.labels) out << " " << l;
    out << "\n";
  }
  for (const auto& n : diagram.nodes()) {
    switch (n.kind) {
      case NodeKind::Random:
        out << "random";
        break;
      case NodeKind::Decision:
        out << "decision";
        break;
      case NodeKind::Value:
        out << "value";
        break;
    }
    out << " " << n.name;
    for (const auto& p : n.parents) out << " " << p;
    if (n.kind != NodeKind::Decision) {
      out << " :";
      for (double v : tableInFileOrder(diagram, n)) out << " " << formatReal(v);
    }
    out << "\n";
  }
  return out.str();
}

void saveNetwork(const InfluenceDiagram& diagram, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << serializeNetwork(diagram);
}

ResultDocument toDocument(const EvaluationResult& result) {
  ResultDocument doc;
  doc.method = result.method;
  doc.expectedValue = result.expectedValue;
  for (const auto& rule : result.policy) {
    PolicyEntry entry;
    entry.decision = rule.decision.name;
    for (const auto& v : rule.table.scope) entry.scope.push_back(v.name);
    entry.table = rule.table.choices;
    doc.policy.push_back(std::move(entry));
  }
  for (const auto& stage : result.stages) {
    StatsEntry entry;
    entry.stage = stage.stage;
    entry.queries = stage.queries;
    entry.multiplications = stage.stats.multiplications;
    entry.additions = stage.stats.additions;
    entry.divisions = stage.stats.divisions;
    entry.maxFactorSize = stage.stats.maxFactorSize;
    doc.stats.push_back(std::move(entry));
  }
  return doc;
}

std::string serializeResult(const ResultDocument& doc) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"method\": \"" << doc.method << "\",\n";
  out << "  \"expectedValue\": " << formatReal(doc.expectedValue) << ",\n";
  out << "  \"policy\": [";
  for (std::size_t i = 0; i < doc.policy.size(); ++i) {
    const auto& p = doc.policy[i];
    out << (i ? ",\n    " : "\n    ");
    out << "{\"decision\": \"" << p.decision << "\", \"scope\": [";
    for (std::size_t j = 0; j < p.scope.size(); ++j)
      out << (j ? ", " : "") << "\"" << p.scope[j] << "\"";
    out << "], \"table\": [";
    for (std::size_t j = 0; j < p.table.size(); ++j)
      out << (j ? ", " : "") << p.table[j];
    out << "]}";
  }
  out << (doc.policy.empty() ? "" : "\n  ") << "],\n";
  out << "  \"stats\": [";
  for (std::size_t i = 0; i < doc.stats.size(); ++i) {
    const auto& s = doc.stats[i];
    out << (i ? ",\n    " : "\n    ");
    out << "{\"stage\": \"" << s.stage << "\", \"queries\": " << s.queries
        << ", \"multiplications\": " << s.multiplications
        << ", \"additions\": " << s.additions
        << ", \"divisions\": " << s.divisions
        << ", \"maxFactorSize\": " << s.maxFactorSize << "}";
  }
  out << (doc.stats.empty() ? "" : "\n  ") << "]\n";
  out << "}\n";
  return out.str();
}

ResultDocument parseResult(const std::string& json) {
  nlohmann::json j = nlohmann::json::parse(json);
  ResultDocument doc;
  doc.method = j.at("method").get<std::string>();
  doc.expectedValue = j.at("expectedValue").get<double>();
  for (const auto& p : j.at("policy")) {
    PolicyEntry entry;
    entry.decision = p.at("decision").get<std::string>();
    for (const auto& s : p.at("scope")) entry.scope.push_back(s.get<std::string>());
    for (const auto& t : p.at("table")) entry.table.push_back(t.get<int>());
    doc.policy.push_back(std::move(entry));
  }
  for (const auto& s : j.at("stats")) {
    StatsEntry entry;
    entry.stage = s.at("stage").get<std::string>();
    entry.queries = s.at("queries").get<int>();
    entry.multiplications = s.at("multiplications").get<long long>();
    entry.additions = s.at("additions").get<long long>();
    entry.divisions = s.at("divisions").get<long long>();
    entry.maxFactorSize = s.at("maxFactorSize").get<int>();
    doc.stats.push_back(std::move(entry));
  }
  return doc;
}

}  // namespace ideval
