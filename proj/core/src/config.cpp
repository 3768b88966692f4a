#include "snakelab/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "snakelab/errors.hpp"
#include "snakelab/group.hpp"

namespace snakelab {

namespace {

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  return text;
}

template <typename T>
T parse_number(std::string_view text, const std::string& key) {
  T value{};
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ValidationError("config: bad numeric value \"" + std::string(text) + "\" for " + key);
  }
  return value;
}

double parse_double(std::string_view text, const std::string& key) {
  try {
    std::size_t used = 0;
    const std::string s(text);
    const double value = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return value;
  } catch (const std::exception&) {
    throw ValidationError("config: bad numeric value \"" + std::string(text) + "\" for " + key);
  }
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<Element> parse_elements(const std::string& text) {
  std::vector<Element> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string_view token = trim(std::string_view(text).substr(pos, comma - pos));
    if (!token.empty()) {
      out.push_back(parse_number<Element>(token, "generators"));
    }
    pos = comma + 1;
  }
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  ExperimentConfig cfg;
  std::string section;
  std::size_t pos = 0;
  unsigned line_no = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') {
      if (pos > text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ValidationError("config line " + std::to_string(line_no) + ": bad section header");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "graph" && section != "chunks" && section != "snake" && section != "run") {
        throw ValidationError("config: unknown section [" + section + "]");
      }
      if (pos > text.size()) break;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": expected key = value, got \"" + std::string(line) + "\"");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    const std::string qualified = section + "." + key;

    if (qualified == "graph.family") {
      cfg.family = value;
    } else if (qualified == "graph.n") {
      cfg.n = parse_number<unsigned>(value, qualified);
    } else if (qualified == "graph.group") {
      cfg.group = value;
    } else if (qualified == "graph.generators") {
      cfg.generators = value;
    } else if (qualified == "chunks.method") {
      cfg.method = value;
    } else if (qualified == "chunks.s") {
      cfg.s = parse_number<unsigned>(value, qualified);
    } else if (qualified == "snake.ell") {
      cfg.ell = parse_number<unsigned>(value, qualified);
    } else if (qualified == "snake.c_ell") {
      cfg.c_ell = parse_double(value, qualified);
    } else if (qualified == "snake.eps") {
      cfg.eps = parse_double(value, qualified);
    } else if (qualified == "snake.consist_threshold") {
      cfg.consist_threshold = parse_double(value, qualified);
    } else if (qualified == "snake.good_prob_threshold") {
      cfg.good_prob_threshold = parse_double(value, qualified);
    } else if (qualified == "run.trials") {
      cfg.trials = parse_number<unsigned>(value, qualified);
    } else if (qualified == "run.seed") {
      cfg.seed = parse_number<std::uint64_t>(value, qualified);
    } else if (qualified == "run.budget") {
      cfg.budget = parse_number<std::uint64_t>(value, qualified);
    } else if (qualified == "run.outdir") {
      cfg.outdir = value;
    } else {
      throw ValidationError("config: unknown key \"" + key + "\" in section [" + section + "]");
    }
    if (pos > text.size()) break;
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  out += "[graph]\n";
  out += "family = " + family + "\n";
  out += "n = " + std::to_string(n) + "\n";
  if (!group.empty()) out += "group = " + group + "\n";
  if (!generators.empty()) out += "generators = " + generators + "\n";
  out += "\n[chunks]\n";
  out += "method = " + method + "\n";
  out += "s = " + std::to_string(s) + "\n";
  out += "\n[snake]\n";
  out += "ell = " + std::to_string(ell) + "\n";
  out += "c_ell = " + fmt(c_ell) + "\n";
  out += "eps = " + fmt(eps) + "\n";
  out += "consist_threshold = " + fmt(consist_threshold) + "\n";
  out += "good_prob_threshold = " + fmt(good_prob_threshold) + "\n";
  out += "\n[run]\n";
  out += "trials = " + std::to_string(trials) + "\n";
  out += "seed = " + std::to_string(seed) + "\n";
  out += "budget = " + std::to_string(budget) + "\n";
  out += "outdir = " + outdir + "\n";
  return out;
}

std::shared_ptr<const VertexTransitiveGraph> ExperimentConfig::build_graph() const {
  auto wrap = [](VertexTransitiveGraph g) {
    return std::make_shared<const VertexTransitiveGraph>(std::move(g));
  };
  if (family == "hypercube") return wrap(preset_hypercube(n));
  if (family == "torus2") return wrap(preset_torus(n, 2));
  if (family == "torus3") return wrap(preset_torus(n, 3));
  if (family == "cycle") return wrap(preset_cycle(n));
  if (family == "cayley") {
    if (group.empty()) throw ValidationError("config: cayley family needs graph.group");
    auto g = FiniteGroup::build(GroupSpec::parse(group));
    const std::vector<Element> gens = parse_elements(generators);
    if (gens.empty()) throw ValidationError("config: cayley family needs graph.generators");
    return wrap(VertexTransitiveGraph::cayley(g, gens));
  }
  throw ValidationError("config: unknown graph.family \"" + family + "\"");
}

SnakeParams ExperimentConfig::snake_params(const VertexTransitiveGraph& graph) const {
  SnakeParams params;
  if (ell > 0) {
    params.s = s;
    params.ell = ell;
  } else {
    params = SnakeParams::scaled(graph, s, c_ell);
  }
  params.eps = eps;
  params.consist_threshold = consist_threshold;
  params.good_prob_threshold = good_prob_threshold;
  params.validate();
  return params;
}

ChunkDistribution ExperimentConfig::build_chunks(const VertexTransitiveGraph& graph) const {
  const ChunkMethod m = parse_chunk_method(method);
  if (m == ChunkMethod::Subproduct) {
    const std::vector<Element> gens = parse_elements(generators);
    return build_chunk_distribution(graph, s, m, &gens);
  }
  return build_chunk_distribution(graph, s, m);
}

std::uint64_t ExperimentConfig::effective_budget() const {
  return budget != 0 ? budget : enumeration_budget();
}

}  // namespace snakelab
