#include "nearlat/term.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace nearlat {

bool Signature::has_constant(const std::string& name) const {
  return std::find(constants.begin(), constants.end(), name) != constants.end();
}

void Signature::add_constant(const std::string& name) {
  if (name == "m" || name == "box")
    throw std::invalid_argument("constant name '" + name + "' is reserved");
  if (name.size() >= 2 && name[0] == 'x' &&
      std::all_of(name.begin() + 1, name.end(),
                  [](unsigned char c) { return std::isdigit(c); }))
    throw std::invalid_argument("constant name '" + name +
                                "' collides with variable syntax");
  if (!has_constant(name)) constants.push_back(name);
}

Signature Signature::merged(const Signature& a, const Signature& b) {
  Signature out = a;
  for (const auto& c : b.constants)
    if (!out.has_constant(c)) out.constants.push_back(c);
  out.has_box = a.has_box || b.has_box;
  return out;
}

namespace {
std::size_t mix(std::size_t h, std::size_t v) {
  return h * 1000003u ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}
}  // namespace

TermPtr Term::var(int index) {
  if (index < 0) throw std::invalid_argument("negative variable index");
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = Kind::Var;
  t->var_index_ = index;
  t->hash_ = mix(1, static_cast<std::size_t>(index));
  return t;
}

TermPtr Term::constant(std::string name) {
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = Kind::Const;
  t->const_name_ = std::move(name);
  t->hash_ = mix(2, std::hash<std::string>{}(t->const_name_));
  return t;
}

TermPtr Term::m(TermPtr a, TermPtr b, TermPtr c) {
  if (!a || !b || !c) throw std::invalid_argument("null child");
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = Kind::M;
  t->hash_ = mix(mix(mix(3, a->hash()), b->hash()), c->hash());
  t->kids_ = {std::move(a), std::move(b), std::move(c)};
  return t;
}

TermPtr Term::box(TermPtr a) {
  if (!a) throw std::invalid_argument("null child");
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = Kind::Box;
  t->hash_ = mix(4, a->hash());
  t->kids_ = {std::move(a), nullptr, nullptr};
  return t;
}

TermPtr Term::join(TermPtr a, TermPtr b) { return m(a, a, std::move(b)); }

bool Term::is_join() const {
  return kind_ == Kind::M && equal(kids_[0], kids_[1]);
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->hash() != b->hash() || a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case Term::Kind::Var:
      return a->var_index() == b->var_index();
    case Term::Kind::Const:
      return a->const_name() == b->const_name();
    case Term::Kind::M:
      return equal(a->child(0), b->child(0)) && equal(a->child(1), b->child(1)) &&
             equal(a->child(2), b->child(2));
    case Term::Kind::Box:
      return equal(a->child(0), b->child(0));
  }
  return false;
}

int compare(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return 0;
  auto ka = static_cast<int>(a->kind()), kb = static_cast<int>(b->kind());
  if (ka != kb) return ka < kb ? -1 : 1;
  switch (a->kind()) {
    case Term::Kind::Var:
      if (a->var_index() != b->var_index())
        return a->var_index() < b->var_index() ? -1 : 1;
      return 0;
    case Term::Kind::Const:
      return a->const_name().compare(b->const_name()) < 0   ? -1
             : a->const_name().compare(b->const_name()) > 0 ? 1
                                                            : 0;
    case Term::Kind::M:
      for (int i = 0; i < 3; ++i)
        if (int c = compare(a->child(i), b->child(i)); c != 0) return c;
      return 0;
    case Term::Kind::Box:
      return compare(a->child(0), b->child(0));
  }
  return 0;
}

namespace {
void print_into(const TermPtr& t, std::string& out) {
  switch (t->kind()) {
    case Term::Kind::Var:
      out += 'x';
      out += std::to_string(t->var_index());
      return;
    case Term::Kind::Const:
      out += t->const_name();
      return;
    case Term::Kind::M:
      out += "m(";
      print_into(t->child(0), out);
      out += ',';
      print_into(t->child(1), out);
      out += ',';
      print_into(t->child(2), out);
      out += ')';
      return;
    case Term::Kind::Box:
      out += "box(";
      print_into(t->child(0), out);
      out += ')';
      return;
  }
}
}  // namespace

std::string to_string(const TermPtr& t) {
  std::string out;
  print_into(t, out);
  return out;
}

int term_depth(const TermPtr& t) {
  switch (t->kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const:
      return 0;
    case Term::Kind::M:
      return 1 + std::max({term_depth(t->child(0)), term_depth(t->child(1)),
                           term_depth(t->child(2))});
    case Term::Kind::Box:
      return 1 + term_depth(t->child(0));
  }
  return 0;
}

TermPtr substitute(const TermPtr& t, const std::map<int, TermPtr>& subst) {
  switch (t->kind()) {
    case Term::Kind::Var: {
      auto it = subst.find(t->var_index());
      return it == subst.end() ? t : it->second;
    }
    case Term::Kind::Const:
      return t;
    case Term::Kind::M:
      return Term::m(substitute(t->child(0), subst), substitute(t->child(1), subst),
                     substitute(t->child(2), subst));
    case Term::Kind::Box:
      return Term::box(substitute(t->child(0), subst));
  }
  return t;
}

namespace {
void collect_vars(const TermPtr& t, std::vector<int>& order, std::set<int>& seen) {
  switch (t->kind()) {
    case Term::Kind::Var:
      if (seen.insert(t->var_index()).second) order.push_back(t->var_index());
      return;
    case Term::Kind::Const:
      return;
    case Term::Kind::M:
      for (int i = 0; i < 3; ++i) collect_vars(t->child(i), order, seen);
      return;
    case Term::Kind::Box:
      collect_vars(t->child(0), order, seen);
      return;
  }
}
}  // namespace

std::vector<int> variables_of(const TermPtr& t) {
  std::vector<int> order;
  std::set<int> seen;
  collect_vars(t, order, seen);
  return order;
}

TermPtr build_mn(const std::vector<TermPtr>& args, const TermPtr& last) {
  if (args.empty()) throw std::invalid_argument("build_mn: empty argument list");
  TermPtr acc = Term::m(args[0], args[0], last);
  for (std::size_t i = 1; i < args.size(); ++i) acc = Term::m(acc, args[i], last);
  return acc;
}

namespace {

class Parser {
 public:
  Parser(const std::string& text, const Signature& sig) : text_(text), sig_(sig) {}

  TermPtr parse() {
    TermPtr t = parse_term();
    skip_ws();
    if (pos_ != text_.size())
      throw FormulaError("unexpected trailing input", pos_);
    return t;
  }

 private:
  TermPtr parse_term() {
    TermPtr t = parse_atom();
    for (;;) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '|') {
        ++pos_;
        t = Term::join(t, parse_atom());
      } else {
        return t;
      }
    }
  }

  TermPtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw FormulaError("unexpected end of formula", pos_);
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      TermPtr t = parse_term();
      expect(')');
      return t;
    }
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      throw FormulaError(std::string("unexpected character '") + c + "'", pos_);
    std::size_t start = pos_;
    std::string word = read_word();
    if (word == "m") {
      expect('(');
      TermPtr a = parse_term();
      expect(',');
      TermPtr b = parse_term();
      expect(',');
      TermPtr d = parse_term();
      expect(')');
      return Term::m(a, b, d);
    }
    if (word == "box") {
      if (!sig_.has_box)
        throw FormulaError("'box' is not part of this signature", start);
      expect('(');
      TermPtr a = parse_term();
      expect(')');
      return Term::box(a);
    }
    if (word.size() >= 2 && word[0] == 'x' &&
        std::all_of(word.begin() + 1, word.end(),
                    [](unsigned char ch) { return std::isdigit(ch); })) {
      return Term::var(std::stoi(word.substr(1)));
    }
    if (sig_.has_constant(word)) return Term::constant(word);
    throw FormulaError("unknown identifier '" + word + "'", start);
  }

  std::string read_word() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      throw FormulaError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  const std::string& text_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

}  // namespace

TermPtr parse_formula(const std::string& text, const Signature& sig) {
  return Parser(text, sig).parse();
}

}  // namespace nearlat
