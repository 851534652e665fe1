#include "wsikit/parser.hpp"

#include "wsikit/error.hpp"

#include <cctype>
#include <set>
#include <vector>

namespace wsikit {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\'';
}

const std::set<std::string>& reserved() {
  static const std::set<std::string> r{"nu", "mu", "true", "false"};
  return r;
}

class Parser {
 public:
  Parser(std::string_view text, const std::optional<Signature>& sig) : s_(text), sig_(sig) {}

  Formula run() {
    Formula f = parse_or();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(std::string_view tok) {
    skip_ws();
    return s_.substr(pos_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  std::string ident() {
    skip_ws();
    if (pos_ >= s_.size() || !is_ident_start(s_[pos_])) fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  std::uint32_t nat() {
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected number");
    std::uint64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + static_cast<unsigned>(s_[pos_] - '0');
      if (v > 1000000) fail("number too large");
      ++pos_;
    }
    return static_cast<std::uint32_t>(v);
  }

  std::uint32_t coalition() {
    expect("{");
    std::uint32_t mask = 0;
    if (!accept("}")) {
      do {
        std::size_t at = pos_;
        std::uint32_t agent = nat();
        if (agent < 1 || agent > 31) {
          pos_ = at;
          fail("agent index out of range");
        }
        if (sig_ && sig_->functor() == Functor::Game && agent > sig_->agents()) {
          pos_ = at;
          throw SignatureError("agent " + std::to_string(agent) + " out of range for " + sig_->name());
        }
        mask |= 1u << (agent - 1);
      } while (accept(","));
      expect("}");
    }
    return mask;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept("|")) f = Formula::disj(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (accept("&")) f = Formula::conj(f, parse_unary());
    return f;
  }

  Formula modal(Modality m, std::size_t at) {
    if (sig_ && !sig_->contains(m)) {
      pos_ = at;
      throw SignatureError("modality " + to_string(m) + " is not available in " + sig_->name());
    }
    return Formula::modal(m, parse_unary());
  }

  Formula parse_unary() {
    skip_ws();
    std::size_t at = pos_;
    if (accept("(")) {
      Formula f = parse_or();
      expect(")");
      return f;
    }
    if (accept("<>")) {
      if (accept("_")) return modal(Modality::graded_diamond(nat()), at);
      return modal(Modality::diamond(), at);
    }
    if (accept("[]")) {
      if (accept("_")) return modal(Modality::graded_box(nat()), at);
      return modal(Modality::box(), at);
    }
    if (accept("[")) {
      std::uint32_t c = coalition();
      expect("]");
      return modal(Modality::coal_box(c), at);
    }
    if (accept("<")) {
      std::uint32_t c = coalition();
      expect(">");
      return modal(Modality::coal_diamond(c), at);
    }
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (!is_ident_start(s_[pos_])) fail(std::string("unexpected character '") + s_[pos_] + "'");
    std::string id = ident();
    if (id == "true") return Formula::top();
    if (id == "false") return Formula::bot();
    if (id == "nu" || id == "mu") return fixpoint(id == "nu");
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (it->count(id)) return Formula::var(id);
    return Formula::atom(id);
  }

  std::string binder() {
    std::size_t at = pos_;
    std::string b = ident();
    if (reserved().count(b)) {
      pos_ = at;
      fail("reserved word '" + b + "' cannot be bound");
    }
    return b;
  }

  // nu(x; y1, y2).(body; aux1, aux2)  or the shorthand  nu x. body
  Formula fixpoint(bool greatest) {
    std::vector<std::string> binders;
    std::vector<Formula> bodies;
    if (accept("(")) {
      binders.push_back(binder());
      if (accept(";") && !peek(")")) {
        do binders.push_back(binder());
        while (accept(","));
      }
      expect(")");
      std::set<std::string> distinct(binders.begin(), binders.end());
      if (distinct.size() != binders.size()) fail("fixpoint variables must be distinct");
      expect(".");
      scopes_.emplace_back(binders.begin(), binders.end());
      expect("(");
      bodies.push_back(parse_or());
      if (accept(";") && !peek(")")) {
        do bodies.push_back(parse_or());
        while (accept(","));
      }
      expect(")");
      scopes_.pop_back();
      if (bodies.size() != binders.size()) fail("fixpoint block needs one body per bound variable");
    } else {
      binders.push_back(binder());
      expect(".");
      scopes_.emplace_back(binders.begin(), binders.end());
      bodies.push_back(parse_or());  // the body extends as far right as possible
      scopes_.pop_back();
    }
    return greatest ? Formula::nu(binders, bodies) : Formula::mu(binders, bodies);
  }

  std::string_view s_;
  std::optional<Signature> sig_;
  std::size_t pos_ = 0;
  std::vector<std::set<std::string>> scopes_;
};

// Precedence levels: 0 = or, 1 = and, 2 = prefix/atomic.
void print(const Formula& f, int level, std::string& out) {
  switch (f.kind()) {
    case NodeKind::Top: out += "true"; return;
    case NodeKind::Bot: out += "false"; return;
    case NodeKind::Atom:
    case NodeKind::Var: out += f.name(); return;
    case NodeKind::Or:
      if (level > 0) out += "(";
      print(f.child(0), 0, out);
      out += " | ";
      print(f.child(1), 1, out);
      if (level > 0) out += ")";
      return;
    case NodeKind::And:
      if (level > 1) out += "(";
      print(f.child(0), 1, out);
      out += " & ";
      print(f.child(1), 2, out);
      if (level > 1) out += ")";
      return;
    case NodeKind::Modal: {
      out += to_string(f.modality());
      const auto k = f.modality().kind;
      const auto ck = f.child(0).kind();
      // A graded index must be separated from a following identifier.
      if ((k == ModKind::GradedBox || k == ModKind::GradedDiamond) &&
          (ck == NodeKind::Atom || ck == NodeKind::Var || ck == NodeKind::Top || ck == NodeKind::Bot ||
           ck == NodeKind::Nu || ck == NodeKind::Mu))
        out += " ";
      print(f.child(0), 2, out);
      return;
    }
    case NodeKind::Nu:
    case NodeKind::Mu: {
      out += f.kind() == NodeKind::Nu ? "nu(" : "mu(";
      const auto& b = f.binders();
      out += b[0] + ";";
      for (std::size_t i = 1; i < b.size(); ++i) out += (i > 1 ? ", " : " ") + b[i];
      out += ").(";
      print(f.child(0), 0, out);
      if (b.size() > 1) {
        out += ";";
        for (std::size_t i = 1; i < b.size(); ++i) {
          out += i > 1 ? ", " : " ";
          print(f.child(i), 0, out);
        }
      }
      out += ")";
      return;
    }
  }
}

}  // namespace

Formula parse_formula(std::string_view text, const std::optional<Signature>& sig) {
  return Parser(text, sig).run();
}

std::string print_formula(const Formula& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

}  // namespace wsikit
