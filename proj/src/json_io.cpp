#include "wsikit/json_io.hpp"

#include "wsikit/error.hpp"

namespace wsikit {

namespace {

std::vector<std::size_t> mask_indices(oracle::Mask a) {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; a; ++x, a >>= 1)
    if (a & 1) out.push_back(x);
  return out;
}

oracle::Mask indices_mask(const Json& j, std::size_t n) {
  oracle::Mask out = 0;
  for (const auto& x : j) {
    auto i = x.get<std::size_t>();
    if (i >= n) throw ParseError("state index " + std::to_string(i) + " out of range", 0);
    out |= oracle::Mask{1} << i;
  }
  return out;
}

}  // namespace

Json model_to_json(const AbstractWsiModel& m, bool concrete) {
  const auto& sys = m.system();
  Json j;
  j["signature"] = m.sig().name();
  Json vars = Json::array();
  Json eqs = Json::array();
  for (std::uint32_t i = 0; i < sys.size(); ++i) {
    vars.push_back(sys.var_name(i));
    eqs.push_back(sys.var_name(i) + " = " + sys.body(i).to_string(sys.namer()));
  }
  j["variables"] = vars;
  j["equations"] = eqs;
  j["root"] = m.state(AbstractWsiModel::root()).vars;
  std::optional<oracle::ExplicitModel> explicit_model;
  if (concrete) explicit_model = oracle::concretize(m);
  Json states = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto& st = m.state(i);
    Json s;
    s["vars"] = st.vars;
    Json os;
    os["formula"] = st.phi.to_string(sys.namer());
    os["states"] = st.onestep;
    s["onestep"] = os;
    if (explicit_model) {
      if (const auto* k = std::get_if<oracle::KripkeModel>(&*explicit_model)) {
        s["succ"] = mask_indices(k->succ[i]);
      } else if (const auto* mm = std::get_if<oracle::MonotoneModel>(&*explicit_model)) {
        Json nb = Json::array();
        for (auto a : mm->nbhd[i]) nb.push_back(mask_indices(a));
        s["neighbourhoods"] = nb;
      }
    }
    states.push_back(s);
  }
  j["states"] = states;
  return j;
}

Json explicit_to_json(const oracle::ExplicitModel& m, const Signature& sig) {
  using namespace oracle;
  Json j;
  j["signature"] = sig.name();
  const std::size_t n = model_size(m);
  j["size"] = n;
  Json props = Json::object();
  for (const auto& [p, ext] : model_props(m)) props[p] = mask_indices(ext);
  j["props"] = props;
  Json states = Json::array();
  for (std::size_t x = 0; x < n; ++x) {
    Json s = Json::object();
    std::visit(
        [&](const auto& mod) {
          using T = std::decay_t<decltype(mod)>;
          if constexpr (std::is_same_v<T, KripkeModel>) {
            s["succ"] = mask_indices(mod.succ[x]);
          } else if constexpr (std::is_same_v<T, MonotoneModel>) {
            Json nb = Json::array();
            for (auto a : mod.nbhd[x]) nb.push_back(mask_indices(a));
            s["neighbourhoods"] = nb;
          } else if constexpr (std::is_same_v<T, Multigraph>) {
            Json e = Json::array();
            for (std::size_t y = 0; y < n; ++y)
              if (mod.mult[x][y]) {
                if (mod.mult[x][y] == kInfinity)
                  e.push_back(Json::array({y, "inf"}));
                else
                  e.push_back(Json::array({y, mod.mult[x][y]}));
              }
            s["succ"] = e;
          } else {
            s["actions"] = mod.local[x].actions;
            s["outcome"] = mod.local[x].outcome;
          }
        },
        m);
    states.push_back(s);
  }
  j["states"] = states;
  return j;
}

oracle::ExplicitModel explicit_from_json(const Json& j, const Signature& sig) {
  using namespace oracle;
  try {
    const std::size_t n = j.at("states").size();
    if (n == 0 || n > 64) throw ParseError("explicit models need 1..64 states", 0);
    Props props;
    if (j.contains("props"))
      for (const auto& [p, ext] : j.at("props").items()) props[p] = indices_mask(ext, n);
    const auto& st = j.at("states");
    switch (sig.functor()) {
      case Functor::Kripke: {
        KripkeModel k{n, {}, props, sig.serial()};
        for (const auto& s : st) k.succ.push_back(indices_mask(s.at("succ"), n));
        if (k.serial)
          for (auto m : k.succ)
            if (!m) throw ParseError("serial model has a state without successors", 0);
        return k;
      }
      case Functor::Monotone: {
        MonotoneModel mm{n, {}, props, sig.serial()};
        for (const auto& s : st) {
          std::vector<Mask> fam;
          for (const auto& a : s.at("neighbourhoods")) fam.push_back(indices_mask(a, n));
          std::sort(fam.begin(), fam.end());
          mm.nbhd.push_back(fam);
        }
        return mm;
      }
      case Functor::Multiset: {
        Multigraph g{n, std::vector<std::vector<std::uint32_t>>(n, std::vector<std::uint32_t>(n, 0)), props};
        for (std::size_t x = 0; x < n; ++x)
          for (const auto& e : st[x].at("succ")) {
            auto y = e.at(0).get<std::size_t>();
            if (y >= n) throw ParseError("state index out of range", 0);
            g.mult[x][y] = e.at(1).is_string() ? kInfinity : e.at(1).get<std::uint32_t>();
          }
        return g;
      }
      case Functor::Game: {
        GameFrame g{n, sig.agents(), {}, props};
        for (const auto& s : st) {
          GameFrame::Local l{s.at("actions").get<std::vector<unsigned>>(), s.at("outcome").get<std::vector<std::size_t>>()};
          std::size_t joint = 1;
          for (auto a : l.actions) joint *= a;
          if (l.actions.size() != g.agents || l.outcome.size() != joint)
            throw ParseError("game state does not match the agent count", 0);
          g.local.push_back(std::move(l));
        }
        return g;
      }
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed model JSON: ") + e.what(), 0);
  }
  throw ParseError("unknown model kind", 0);
}

Json verdict_to_json(const Verdict& v) {
  Json j;
  j["result"] = v.result;
  j["signature"] = v.sig.name();
  j["witness"] = v.result ? "model-check-trace" : "wsi-counter-model-ref";
  j["mu_query"] = v.mu_query;
  if (v.model) j["model_states"] = v.model->size();
  return j;
}

}  // namespace wsikit
