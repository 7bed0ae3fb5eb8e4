#include "reflbound/report.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>

namespace reflbound::report {

namespace {

using numthy::Pair;
using numthy::Single;

template <class T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json index_json(const bounds::FieldIndex& idx) {
  Json j = Json::object();
  if (const auto* one = std::get_if<Single>(&idx)) {
    j["l"] = one->l;
  } else {
    const auto& p = std::get<Pair>(idx);
    j["k"] = p.k;
    j["s"] = p.s;
  }
  return j;
}

Json optional_index(const std::optional<bounds::FieldIndex>& idx) {
  return idx ? index_json(*idx) : Json(nullptr);
}

Json params_json(const bounds::CaseParams& p) {
  Json j = Json::object();
  j["a1"] = to_double(p.a1);
  j["a2"] = to_double(p.a2);
  j["b1"] = to_double(p.b1);
  j["b2"] = to_double(p.b2);
  j["s0"] = p.s0;
  j["exact"] = {{"a1", to_string(p.a1)}, {"a2", to_string(p.a2)}, {"b1", to_string(p.b1)}, {"b2", to_string(p.b2)}};
  return j;
}

Json constants_json(const bounds::StageConstants& c, bounds::CaseKind kind) {
  bool single = kind == bounds::CaseKind::Single;
  Json j = Json::object();
  j["C"] = c.C;
  j[single ? "L0" : "K0"] = c.threshold_start;
  j["delta"] = c.delta;
  j["delta_at"] = index_json(c.delta_at);
  j[single ? "L1" : "K1"] = c.threshold_end;
  return j;
}

Json envelope_json(const campaign::GramEnvelope& e) {
  Json j = Json::object();
  j["system"] = e.system;
  j["min"] = e.min_value;
  j["max"] = e.max_value;
  j["argmin"] = e.argmin;
  j["argmax"] = e.argmax;
  j["residual_tol"] = e.residual_tol;
  j["samples"] = e.samples;
  j["seed"] = e.seed;
  j["implied_a1"] = e.implied_a1;
  j["implied_a2"] = e.implied_a2;
  j["consistent"] = e.consistent;
  return j;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

Json to_json(const bounds::CandidateVerdict& v) {
  Json j = index_json(v.index);
  j["M"] = v.base_degree;
  j["exceptional"] = v.exceptional;
  if (v.methodB_holds) {
    j["methodB"] = {{"holds", *v.methodB_holds}, {"n0", opt(v.n0_B)}, {"N", opt(v.N_B)}};
  } else {
    j["methodB"] = nullptr;
  }
  if (v.methodA_attempted) {
    j["methodA"] = {{"applicable", opt(v.methodA_applicable)}, {"n0", opt(v.n0_A)}, {"N", opt(v.N_A)}};
  } else {
    j["methodA"] = nullptr;
  }
  j["final_N"] = opt(v.final_N);
  return j;
}

Json to_json(const campaign::FamilyReport& f) {
  const auto& en = f.enumeration;
  Json j = Json::object();
  j["campaign"] = f.spec.name;
  j["case"] = f.spec.kind == bounds::CaseKind::Single ? 1 : 2;
  j["params"] = params_json(f.spec.params);
  j["target"] = f.spec.target;
  j["constants"] = constants_json(en.constants, f.spec.kind);
  j["exceptional_l"] = en.exceptional_l;
  Json pairs = Json::array();
  for (auto [k, s] : en.exceptional_pairs) pairs.push_back({k, s});
  j["exceptional_pairs"] = pairs;
  j["counts"] = {{"examined", en.examined},
                 {"rejected", en.rejected},
                 {"skipped_exceptional_l", en.skipped_exceptional_l},
                 {"kept", en.verdicts.size()}};
  Json cands = Json::array();
  for (const auto& v : en.verdicts) cands.push_back(to_json(v));
  j["candidates"] = cands;
  Json fb = Json::array();
  for (const auto& v : f.fallbacks) fb.push_back(to_json(v));
  j["fallbacks"] = fb;
  if (f.spec.fallback) j["fallback_params"] = params_json(f.spec.fallback->params);
  Json sup = Json::array();
  for (const auto& v : f.superseded) sup.push_back(to_json(v));
  j["superseded"] = sup;
  Json unres = Json::array();
  for (const auto& idx : en.unresolved) unres.push_back(index_json(idx));
  j["unresolved"] = unres;
  Json over = Json::array();
  for (const auto& idx : en.over_target) over.push_back(index_json(idx));
  j["over_target"] = over;
  j["gram_envelopes"] = f.envelope ? Json::array({envelope_json(*f.envelope)}) : Json::array();
  j["grand_bound"] = opt(f.grand_bound);
  j["achiever"] = optional_index(f.achiever);
  j["flags"] = f.flags;
  return j;
}

Json to_json(const campaign::CampaignReport& r, bool with_timing) {
  Json j;
  if (r.families.size() == 1) {
    j = to_json(r.families.front());
  } else {
    j = Json::object();
    j["campaign"] = r.campaign;
    Json fams = Json::array();
    Json per = Json::object();
    for (const auto& f : r.families) {
      fams.push_back(to_json(f));
      per[f.spec.name] = opt(f.grand_bound);
    }
    j["per_family_bounds"] = per;
    j["families"] = fams;
    j["grand_bound"] = opt(r.grand_bound);
    Json ach = optional_index(r.achiever);
    if (r.achiever) ach["family"] = r.achiever_family;
    j["achiever"] = ach;
  }
  j["seed"] = r.seed;
  j["precision_bits"] = r.precision_bits;
  j["precision_escalations"] = r.precision_escalations;
  if (with_timing) j["wall_ms"] = r.wall_ms;
  return j;
}

std::string body(const campaign::CampaignReport& r) { return to_json(r, false).dump(2); }

std::uint64_t body_hash(const campaign::CampaignReport& r) { return fnv1a(body(r)); }

void write_atomically(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << text;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string summary_table(const campaign::CampaignReport& r) {
  std::ostringstream os;
  auto index_str = [](const std::optional<bounds::FieldIndex>& idx) {
    return idx ? numthy::to_string(*idx) : std::string("-");
  };
  os << std::left << std::setw(9) << "family" << std::setw(6) << "case" << std::setw(8) << "start"
     << std::setw(12) << "delta" << std::setw(8) << "end" << std::setw(8) << "excl" << std::setw(8) << "pairs"
     << std::setw(8) << "kept" << std::setw(7) << "bound" << "achiever\n";
  for (const auto& f : r.families) {
    const auto& en = f.enumeration;
    std::ostringstream delta;
    delta << std::setprecision(7) << en.constants.delta;
    os << std::left << std::setw(9) << f.spec.name << std::setw(6)
       << (f.spec.kind == bounds::CaseKind::Single ? "1" : "2") << std::setw(8) << en.constants.threshold_start
       << std::setw(12) << delta.str() << std::setw(8) << en.constants.threshold_end << std::setw(8)
       << en.exceptional_l.size() << std::setw(8) << en.exceptional_pairs.size() << std::setw(8)
       << en.verdicts.size() << std::setw(7) << (f.grand_bound ? std::to_string(*f.grand_bound) : "-")
       << index_str(f.achiever) << "\n";
    for (const auto& v : f.fallbacks) {
      os << "  fallback " << numthy::to_string(v.index) << ": "
         << (v.final_N ? std::to_string(*v.final_N) : std::string("none")) << "\n";
    }
    for (const auto& flag : f.flags) os << "  note: " << flag << "\n";
  }
  os << "grand bound: " << (r.grand_bound ? std::to_string(*r.grand_bound) : "none");
  if (r.achiever) os << " at " << numthy::to_string(*r.achiever);
  if (r.families.size() > 1 && r.achiever) os << " (" << r.achiever_family << ")";
  os << "\nprecision: " << r.precision_bits << " bits, escalations " << r.precision_escalations
     << ", wall " << std::fixed << std::setprecision(0) << r.wall_ms << " ms\n";
  return os.str();
}

}  // namespace reflbound::report
