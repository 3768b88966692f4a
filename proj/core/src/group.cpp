#include "snakelab/group.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <stdexcept>

#include "snakelab/errors.hpp"

namespace snakelab {

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw std::invalid_argument("compose: degree mismatch");
  Permutation out(a.size());
  for (std::size_t x = 0; x < b.size(); ++x) out[x] = a[b[x]];
  return out;
}

Permutation invert_permutation(const Permutation& p) {
  Permutation out(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) out[p[x]] = static_cast<std::uint32_t>(x);
  return out;
}

namespace {

bool is_permutation_of_domain(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  for (std::uint32_t x : p) {
    if (x >= p.size() || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

Permutation identity_permutation(std::uint32_t degree) {
  Permutation p(degree);
  std::iota(p.begin(), p.end(), 0u);
  return p;
}

/// Minimal recursive-descent reader shared by the GroupSpec and cycle parsers.
struct Reader {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool peek_is(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }
  bool eat(char c) {
    if (!peek_is(c)) return false;
    ++pos;
    return true;
  }
  void expect(char c) {
    if (!eat(c)) {
      throw ValidationError("group spec parse error: expected '" + std::string(1, c) +
                            "' at offset " + std::to_string(pos) + " in \"" + std::string(s) + "\"");
    }
  }
  std::uint64_t integer() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) {
      throw ValidationError("group spec parse error: expected integer at offset " +
                            std::to_string(pos) + " in \"" + std::string(s) + "\"");
    }
    std::uint64_t value = 0;
    auto res = std::from_chars(s.data() + start, s.data() + pos, value);
    if (res.ec != std::errc{}) throw ValidationError("group spec parse error: integer overflow");
    return value;
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
    return std::string(s.substr(start, pos - start));
  }
  bool done() {
    skip_ws();
    return pos == s.size();
  }
};

/// One parenthesized cycle, e.g. "(0 1 2)"; '(' already consumed by caller.
Permutation read_cycle(Reader& r, std::uint32_t degree) {
  Permutation p = identity_permutation(degree);
  std::vector<std::uint32_t> members;
  while (!r.peek_is(')')) {
    std::uint64_t v = r.integer();
    if (v >= degree) {
      throw ValidationError("cycle entry " + std::to_string(v) + " out of range for degree " +
                            std::to_string(degree));
    }
    if (std::find(members.begin(), members.end(), v) != members.end()) {
      throw ValidationError("cycle repeats point " + std::to_string(v));
    }
    members.push_back(static_cast<std::uint32_t>(v));
    r.eat(',');  // tolerated separator inside cycles
  }
  r.expect(')');
  for (std::size_t i = 0; i < members.size(); ++i) {
    p[members[i]] = members[(i + 1) % members.size()];
  }
  return p;
}

/// A product of cycles, composed left to right (rightmost cycle acts first).
Permutation read_permutation(Reader& r, std::uint32_t degree) {
  if (!r.eat('(')) {
    throw ValidationError("permutation parse error: expected '(' at offset " +
                          std::to_string(r.pos));
  }
  Permutation result = read_cycle(r, degree);
  while (r.eat('(')) result = compose(result, read_cycle(r, degree));
  return result;
}

GroupSpec read_spec(Reader& r) {
  std::string name = r.ident();
  r.expect('(');
  GroupSpec out;
  if (name == "cyclic") {
    out = GroupSpec::cyclic(r.integer());
  } else if (name == "symmetric") {
    out = GroupSpec::symmetric(r.integer());
  } else if (name == "power") {
    GroupSpec base = read_spec(r);
    r.expect(',');
    out = GroupSpec::power(std::move(base), r.integer());
  } else if (name == "closure") {
    std::uint64_t degree = r.integer();
    if (degree == 0 || degree > 0xffffffffull) {
      throw ValidationError("closure degree out of range: " + std::to_string(degree));
    }
    r.expect(':');
    std::vector<Permutation> gens;
    gens.push_back(read_permutation(r, static_cast<std::uint32_t>(degree)));
    while (r.eat(';')) gens.push_back(read_permutation(r, static_cast<std::uint32_t>(degree)));
    out = GroupSpec::closure(static_cast<std::uint32_t>(degree), std::move(gens));
  } else {
    throw ValidationError("unknown group spec kind \"" + name + "\"");
  }
  r.expect(')');
  return out;
}

}  // namespace

Permutation parse_cycles(std::string_view text, std::uint32_t degree) {
  Reader r{text};
  if (r.done()) return identity_permutation(degree);
  Permutation p = read_permutation(r, degree);
  if (!r.done()) {
    throw ValidationError("trailing characters after permutation: \"" + std::string(text) + "\"");
  }
  return p;
}

std::string format_cycles(const Permutation& p) {
  std::string out;
  std::vector<bool> visited(p.size(), false);
  for (std::uint32_t x = 0; x < p.size(); ++x) {
    if (visited[x] || p[x] == x) continue;
    out += '(';
    std::uint32_t v = x;
    bool first = true;
    while (!visited[v]) {
      visited[v] = true;
      if (!first) out += ' ';
      out += std::to_string(v);
      first = false;
      v = p[v];
    }
    out += ')';
  }
  if (out.empty()) out = "()";
  return out;
}

GroupSpec GroupSpec::cyclic(std::uint64_t n) {
  if (n == 0) throw ValidationError("cyclic group modulus must be at least 1");
  GroupSpec s;
  s.kind = Kind::Cyclic;
  s.n = n;
  return s;
}

GroupSpec GroupSpec::power(GroupSpec base, std::uint64_t arity) {
  if (arity == 0) throw ValidationError("power group arity must be at least 1");
  GroupSpec s;
  s.kind = Kind::Power;
  s.n = arity;
  s.base = std::make_shared<GroupSpec>(std::move(base));
  return s;
}

GroupSpec GroupSpec::symmetric(std::uint64_t k) {
  if (k == 0) throw ValidationError("symmetric group degree must be at least 1");
  GroupSpec s;
  s.kind = Kind::Symmetric;
  s.n = k;
  return s;
}

GroupSpec GroupSpec::closure(std::uint32_t degree, std::vector<Permutation> gens) {
  if (degree == 0) throw ValidationError("closure degree must be at least 1");
  if (gens.empty()) throw ValidationError("closure requires at least one generator");
  for (const Permutation& g : gens) {
    if (g.size() != degree) {
      throw ValidationError("closure generator degree " + std::to_string(g.size()) +
                            " does not match domain size " + std::to_string(degree));
    }
    if (!is_permutation_of_domain(g)) {
      throw ValidationError("closure generator is not a permutation: " + format_cycles(g));
    }
  }
  GroupSpec s;
  s.kind = Kind::Closure;
  s.degree = degree;
  s.generators = std::move(gens);
  return s;
}

GroupSpec GroupSpec::parse(std::string_view text) {
  Reader r{text};
  GroupSpec s = read_spec(r);
  if (!r.done()) {
    throw ValidationError("trailing characters after group spec: \"" + std::string(text) + "\"");
  }
  return s;
}

std::string GroupSpec::to_string() const {
  switch (kind) {
    case Kind::Cyclic:
      return "cyclic(" + std::to_string(n) + ")";
    case Kind::Power:
      return "power(" + base->to_string() + "," + std::to_string(n) + ")";
    case Kind::Symmetric:
      return "symmetric(" + std::to_string(n) + ")";
    case Kind::Closure: {
      std::string out = "closure(" + std::to_string(degree) + ":";
      for (std::size_t i = 0; i < generators.size(); ++i) {
        if (i) out += ';';
        out += format_cycles(generators[i]);
      }
      out += ')';
      return out;
    }
  }
  throw std::logic_error("unreachable group spec kind");
}

std::shared_ptr<const FiniteGroup> FiniteGroup::build(const GroupSpec& spec,
                                                      std::uint64_t order_cap) {
  switch (spec.kind) {
    case GroupSpec::Kind::Cyclic: {
      if (spec.n > order_cap) {
        throw SizeLimitError("cyclic group order " + std::to_string(spec.n) +
                             " exceeds cap " + std::to_string(order_cap));
      }
      auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
      g->kind_ = Kind::Cyclic;
      g->order_ = spec.n;
      g->spec_ = spec;
      return g;
    }
    case GroupSpec::Kind::Power: {
      std::shared_ptr<const FiniteGroup> base = build(*spec.base, order_cap);
      const std::uint64_t b = base->order();
      std::uint64_t order = 1;
      std::vector<std::uint64_t> radix;
      radix.reserve(spec.n + 1);
      for (std::uint64_t i = 0; i < spec.n; ++i) {
        radix.push_back(order);
        if (b != 0 && order > order_cap / b) {
          throw SizeLimitError("power group order " + base->spec().to_string() + "^" +
                               std::to_string(spec.n) + " exceeds cap " +
                               std::to_string(order_cap));
        }
        order *= b;
      }
      radix.push_back(order);
      auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
      g->kind_ = Kind::Power;
      g->order_ = order;
      g->spec_ = spec;
      g->base_ = std::move(base);
      g->arity_ = static_cast<std::uint32_t>(spec.n);
      g->radix_ = std::move(radix);
      return g;
    }
    case GroupSpec::Kind::Symmetric: {
      // Adjacent transpositions (i i+1) generate all of S_k.
      const auto k = static_cast<std::uint32_t>(spec.n);
      std::vector<Permutation> gens;
      for (std::uint32_t i = 0; i + 1 < k; ++i) {
        Permutation t = identity_permutation(k);
        std::swap(t[i], t[i + 1]);
        gens.push_back(std::move(t));
      }
      if (gens.empty()) gens.push_back(identity_permutation(k));  // S_1
      return build_perm_closure(spec, k, std::move(gens), order_cap);
    }
    case GroupSpec::Kind::Closure:
      return build_perm_closure(spec, spec.degree, spec.generators, order_cap);
  }
  throw std::logic_error("unreachable group spec kind");
}

std::shared_ptr<FiniteGroup> FiniteGroup::build_perm_closure(GroupSpec spec, std::uint32_t degree,
                                                             std::vector<Permutation> gens,
                                                             std::uint64_t order_cap) {
  // Sorted, deduplicated generators make discovery order (and element ids)
  // independent of the order the caller listed them in.
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());

  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->kind_ = Kind::Perms;
  g->spec_ = std::move(spec);

  g->elements_.push_back(identity_permutation(degree));
  g->index_.emplace(g->elements_[0], 0);
  for (std::size_t head = 0; head < g->elements_.size(); ++head) {
    for (const Permutation& gen : gens) {
      Permutation next = compose(g->elements_[head], gen);
      if (g->index_.contains(next)) continue;
      if (g->elements_.size() >= order_cap) {
        throw SizeLimitError("permutation closure of " + g->spec_.to_string() +
                             " exceeds order cap " + std::to_string(order_cap));
      }
      g->index_.emplace(next, static_cast<Element>(g->elements_.size()));
      g->elements_.push_back(std::move(next));
    }
  }
  g->order_ = g->elements_.size();

  g->inverse_.resize(g->order_);
  for (Element a = 0; a < g->order_; ++a) {
    g->inverse_[a] = g->index_.at(invert_permutation(g->elements_[a]));
  }

  if (g->order_ <= kTableCap) {
    g->table_.resize(g->order_ * g->order_);
    for (Element a = 0; a < g->order_; ++a) {
      for (Element b = 0; b < g->order_; ++b) {
        g->table_[a * g->order_ + b] = g->index_.at(compose(g->elements_[a], g->elements_[b]));
      }
    }
  }
  return g;
}

Element FiniteGroup::multiply(Element a, Element b) const {
  if (a >= order_ || b >= order_) throw std::invalid_argument("multiply: element id out of range");
  switch (kind_) {
    case Kind::Cyclic:
      return static_cast<Element>((std::uint64_t{a} + b) % order_);
    case Kind::Power: {
      std::uint64_t out = 0;
      std::uint64_t ra = a, rb = b;
      const std::uint64_t base_order = base_->order();
      for (std::uint32_t i = 0; i < arity_; ++i) {
        const auto ca = static_cast<Element>(ra % base_order);
        const auto cb = static_cast<Element>(rb % base_order);
        out += std::uint64_t{base_->multiply(ca, cb)} * radix_[i];
        ra /= base_order;
        rb /= base_order;
      }
      return static_cast<Element>(out);
    }
    case Kind::Perms:
      if (!table_.empty()) return table_[std::uint64_t{a} * order_ + b];
      return index_.at(compose(elements_[a], elements_[b]));
  }
  throw std::logic_error("unreachable group kind");
}

Element FiniteGroup::invert(Element a) const {
  if (a >= order_) throw std::invalid_argument("invert: element id out of range");
  switch (kind_) {
    case Kind::Cyclic:
      return static_cast<Element>((order_ - a) % order_);
    case Kind::Power: {
      std::uint64_t out = 0;
      std::uint64_t ra = a;
      const std::uint64_t base_order = base_->order();
      for (std::uint32_t i = 0; i < arity_; ++i) {
        out += std::uint64_t{base_->invert(static_cast<Element>(ra % base_order))} * radix_[i];
        ra /= base_order;
      }
      return static_cast<Element>(out);
    }
    case Kind::Perms:
      return inverse_[a];
  }
  throw std::logic_error("unreachable group kind");
}

const Permutation& FiniteGroup::permutation_of(Element a) const {
  if (kind_ != Kind::Perms) {
    throw std::invalid_argument("permutation_of: group " + spec_.to_string() +
                                " has no permutation realization");
  }
  if (a >= order_) throw std::invalid_argument("permutation_of: element id out of range");
  return elements_[a];
}

std::optional<Element> FiniteGroup::find_permutation(const Permutation& p) const {
  if (kind_ != Kind::Perms) {
    throw std::invalid_argument("find_permutation: group " + spec_.to_string() +
                                " has no permutation realization");
  }
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Element> FiniteGroup::right_translation(Element g) const {
  std::vector<Element> p(order_);
  for (std::uint64_t a = 0; a < order_; ++a) {
    p[a] = multiply(static_cast<Element>(a), g);
  }
  return p;
}

std::vector<Element> FiniteGroup::left_translation(Element g) const {
  std::vector<Element> p(order_);
  for (std::uint64_t v = 0; v < order_; ++v) {
    p[v] = multiply(g, static_cast<Element>(v));
  }
  return p;
}

}  // namespace snakelab
