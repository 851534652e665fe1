#include "wsikit/signature.hpp"

#include "wsikit/error.hpp"

#include <charconv>

namespace wsikit {

Modality dual(const Modality& m) {
  Modality d = m;
  switch (m.kind) {
    case ModKind::Box: d.kind = ModKind::Diamond; break;
    case ModKind::Diamond: d.kind = ModKind::Box; break;
    case ModKind::GradedBox: d.kind = ModKind::GradedDiamond; break;
    case ModKind::GradedDiamond: d.kind = ModKind::GradedBox; break;
    case ModKind::CoalBox: d.kind = ModKind::CoalDiamond; break;
    case ModKind::CoalDiamond: d.kind = ModKind::CoalBox; break;
  }
  return d;
}

std::string coalition_to_string(std::uint32_t mask) {
  std::string s = "{";
  bool first = true;
  for (unsigned i = 0; i < 32; ++i) {
    if (mask & (1u << i)) {
      if (!first) s += ",";
      s += std::to_string(i + 1);
      first = false;
    }
  }
  return s + "}";
}

std::string to_string(const Modality& m) {
  switch (m.kind) {
    case ModKind::Box: return "[]";
    case ModKind::Diamond: return "<>";
    case ModKind::GradedBox: return "[]_" + std::to_string(m.param);
    case ModKind::GradedDiamond: return "<>_" + std::to_string(m.param);
    case ModKind::CoalBox: return "[" + coalition_to_string(m.param) + "]";
    case ModKind::CoalDiamond: return "<" + coalition_to_string(m.param) + ">";
  }
  return "?";
}

Signature Signature::k_diamond() { return {Logic::KDiamond, Functor::Kripke, false, false, true, 0}; }
Signature Signature::k_box() { return {Logic::KBox, Functor::Kripke, false, true, false, 0}; }
Signature Signature::k() { return {Logic::K, Functor::Kripke, false, true, true, 0}; }
Signature Signature::kd() { return {Logic::KD, Functor::Kripke, true, true, true, 0}; }
Signature Signature::m() { return {Logic::M, Functor::Monotone, false, true, true, 0}; }
Signature Signature::ms() { return {Logic::Ms, Functor::Monotone, true, true, true, 0}; }
Signature Signature::cl(unsigned agents) {
  if (agents < 1 || agents > 6) throw SignatureError("cl:N needs 1 <= N <= 6");
  return {Logic::CL, Functor::Game, false, true, true, agents};
}
Signature Signature::graded() { return {Logic::Graded, Functor::Multiset, false, true, true, 0}; }

Signature Signature::parse(std::string_view name) {
  if (name == "k-diamond") return k_diamond();
  if (name == "k-box") return k_box();
  if (name == "k") return k();
  if (name == "kd") return kd();
  if (name == "m") return m();
  if (name == "ms") return ms();
  if (name == "graded") return graded();
  if (name.starts_with("cl:")) {
    unsigned n = 0;
    auto tail = name.substr(3);
    auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), n);
    if (ec != std::errc() || ptr != tail.data() + tail.size())
      throw SignatureError("malformed agent count in '" + std::string(name) + "'");
    return cl(n);
  }
  throw SignatureError("unknown logic '" + std::string(name) + "'");
}

std::string Signature::name() const {
  switch (logic_) {
    case Logic::KDiamond: return "k-diamond";
    case Logic::KBox: return "k-box";
    case Logic::K: return "k";
    case Logic::KD: return "kd";
    case Logic::M:
      if (box_ && diamond_) return "m";
      return box_ ? "m[box]" : "m[diamond]";
    case Logic::Ms: return "ms";
    case Logic::CL: return "cl:" + std::to_string(agents_);
    case Logic::Graded: return "graded";
  }
  return "?";
}

bool Signature::contains(const Modality& m) const {
  switch (functor_) {
    case Functor::Kripke:
    case Functor::Monotone:
      return (m.kind == ModKind::Box && box_) || (m.kind == ModKind::Diamond && diamond_);
    case Functor::Multiset:
      return m.kind == ModKind::GradedDiamond || m.kind == ModKind::GradedBox;
    case Functor::Game:
      return (m.kind == ModKind::CoalBox || m.kind == ModKind::CoalDiamond) &&
             (m.param & ~grand_coalition(agents_)) == 0;
  }
  return false;
}

std::vector<Modality> Signature::lambda() const {
  std::vector<Modality> out;
  switch (functor_) {
    case Functor::Kripke:
    case Functor::Monotone:
      if (box_) out.push_back(Modality::box());
      if (diamond_) out.push_back(Modality::diamond());
      break;
    case Functor::Game:
      for (std::uint32_t c = 0; c <= grand_coalition(agents_); ++c) {
        out.push_back(Modality::coal_box(c));
        out.push_back(Modality::coal_diamond(c));
      }
      break;
    case Functor::Multiset:
      throw UnsupportedError("graded similarity type is infinite");
  }
  return out;
}

std::vector<Modality> Signature::lambda_bar() const {
  auto l = lambda();
  for (auto& m : l) m = dual(m);
  return l;
}

bool Signature::self_dual_closed() const {
  switch (functor_) {
    case Functor::Kripke:
    case Functor::Monotone: return box_ && diamond_;
    case Functor::Game: return true;
    case Functor::Multiset: return true;
  }
  return false;
}

bool Signature::concretizable() const {
  return logic_ == Logic::KDiamond || logic_ == Logic::KBox || logic_ == Logic::KD ||
         logic_ == Logic::Ms;
}

Signature Signature::restricted(bool box, bool diamond) const {
  if (functor_ != Functor::Kripke && functor_ != Functor::Monotone)
    throw UnsupportedError("only Kripke and monotone signatures can be restricted");
  if (box == box_ && diamond == diamond_) return *this;
  if (functor_ == Functor::Kripke && !serial_) {
    if (box && !diamond) return k_box();
    if (diamond && !box) return k_diamond();
  }
  Signature s = *this;
  s.box_ = box;
  s.diamond_ = diamond;
  return s;
}

}  // namespace wsikit
