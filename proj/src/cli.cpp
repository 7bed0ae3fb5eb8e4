#include "reflbound/cli.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <optional>
#include <string>

#include "reflbound/campaign.hpp"
#include "reflbound/report.hpp"

namespace reflbound::cli {

namespace {

struct FieldFlags {
  std::optional<std::int64_t> l, k, s;
  std::string a1 = "0", a2 = "0", b1 = "0", b2 = "0";
  std::int64_t s0 = 3;
  int precision = 53;
};

void add_index_flags(CLI::App* cmd, FieldFlags& f) {
  cmd->add_option("--l", f.l, "single index l");
  cmd->add_option("--k", f.k, "pair index k");
  cmd->add_option("--s", f.s, "pair index s");
}

void add_case_flags(CLI::App* cmd, FieldFlags& f) {
  add_index_flags(cmd, f);
  cmd->add_option("--a1", f.a1, "lower conjugate bound a1 (exact decimal or p/q)")->required();
  cmd->add_option("--a2", f.a2, "upper conjugate bound a2")->required();
  cmd->add_option("--b1", f.b1, "lower bound b1 for the identity embedding")->required();
  cmd->add_option("--b2", f.b2, "upper bound b2 for the identity embedding")->required();
  cmd->add_option("--s0", f.s0, "smallest admissible s")->capture_default_str();
  cmd->add_option("--precision", f.precision, "working precision in bits (>= 53)")->capture_default_str();
}

bounds::CaseParams params_of(const FieldFlags& f) {
  return {parse_rational(f.a1), parse_rational(f.a2), parse_rational(f.b1), parse_rational(f.b2), f.s0};
}

std::int64_t need(const std::optional<std::int64_t>& v, const char* name) {
  if (!v) throw CLI::ValidationError(std::string("--") + name + " is required here");
  return *v;
}

std::string opt_str(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : "-"; }

void print_verdict(std::ostream& out, const bounds::CandidateVerdict& v) {
  out << "index=" << numthy::to_string(v.index) << " M=" << v.base_degree
      << " exceptional=" << (v.exceptional ? "yes" : "no");
  if (v.methodB_holds) {
    out << " methodB=" << (*v.methodB_holds ? "holds" : "fails") << " n0_B=" << opt_str(v.n0_B)
        << " N_B=" << opt_str(v.N_B);
  }
  if (v.methodA_attempted) {
    out << " methodA=" << (v.methodA_applicable.value_or(false) ? "applicable" : "inapplicable")
        << " n0_A=" << opt_str(v.n0_A) << " N_A=" << opt_str(v.N_A);
  }
  out << "\nN=" << opt_str(v.final_N) << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Degree bounds for ground fields of arithmetic reflection groups", "reflbound"};
  app.require_subcommand(1);

  FieldFlags nf;
  auto* nt = app.add_subcommand("numthy", "cyclotomic invariants")->require_subcommand(1);
  auto* nt_phi = nt->add_subcommand("phi", "Euler totient of --l");
  auto* nt_gamma = nt->add_subcommand("gamma", "gamma(l) and gamma~(l)");
  auto* nt_disc = nt->add_subcommand("disc", "log discriminants of F_l or F_{k,s}");
  for (auto* c : {nt_phi, nt_gamma, nt_disc}) add_index_flags(c, nf);

  FieldFlags mf;
  auto* mb = app.add_subcommand("methodb", "Method B verdict")->require_subcommand(1);
  auto* mb1 = mb->add_subcommand("case1", "single index --l");
  auto* mb2 = mb->add_subcommand("case2", "pair --k --s");
  auto* ma = app.add_subcommand("methoda", "Method A verdict")->require_subcommand(1);
  auto* ma1 = ma->add_subcommand("case1", "single index --l");
  auto* ma2 = ma->add_subcommand("case2", "pair --k --s");
  for (auto* c : {mb1, mb2, ma1, ma2}) add_case_flags(c, mf);

  int grid = gram::kDefaultGrid;
  int refine = gram::kDefaultRefine;
  std::uint64_t seed = gram::kDefaultSeed;
  auto* gr = app.add_subcommand("gram", "Gram-system extrema")->require_subcommand(1);
  auto* gq = gr->add_subcommand("quad", "quadrilateral product b13 b14 b23 b24");
  auto* gp = gr->add_subcommand("pentagon", "pentagon product b13 b14 b24 b25 b35");
  for (auto* c : {gq, gp}) {
    c->add_option("--grid", grid, "grid points per axis (>= 50)")->capture_default_str();
    c->add_option("--refine", refine, "refinement iteration budget")->capture_default_str();
    c->add_option("--seed", seed, "multistart seed")->capture_default_str();
  }

  std::string out_path;
  int workers = campaign::default_workers();
  int precision = 53;
  std::optional<std::int64_t> expect;
  std::optional<std::int64_t> target;
  auto* cp = app.add_subcommand("campaign", "run a graph-family campaign")->require_subcommand(1);
  std::vector<CLI::App*> camps;
  for (const char* name : {"gamma64", "gamma15", "gamma46", "all"}) camps.push_back(cp->add_subcommand(name));
  for (auto* c : camps) {
    c->add_option("--out", out_path, "write the JSON report here");
    c->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--precision", precision, "working precision in bits (53..512)")
        ->check(CLI::Range(53, 512))
        ->capture_default_str();
    c->add_option("--expect", expect, "exit 3 unless the grand bound equals this");
    c->add_option("--target", target, "Method A trigger threshold");
    c->add_option("--seed", seed, "multistart seed for the Gram envelopes")->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (nt->parsed()) {
      if (nt_phi->parsed()) {
        out << numthy::euler_phi(static_cast<std::uint64_t>(need(nf.l, "l"))) << "\n";
      } else if (nt_gamma->parsed()) {
        std::int64_t l = need(nf.l, "l");
        out << "gamma=" << numthy::gamma(l) << " gamma_tilde=" << numthy::gamma_tilde(l) << "\n";
      } else {
        out << std::setprecision(17);
        if (nf.l) {
          out << "ln_disc_cyclotomic=" << numthy::ln_disc_cyclotomic(*nf.l).value
              << " ln_disc_Fl=" << numthy::ln_disc_Fl(*nf.l).value << "\n";
        } else {
          std::int64_t k = need(nf.k, "k"), s = need(nf.s, "s");
          out << "degree=" << numthy::degree_Fks(k, s) << " rho=" << numthy::rho(k, s)
              << " ln_disc_Fks=" << numthy::ln_disc_Fks(k, s).value << "\n";
        }
      }
      return kOk;
    }

    if (mb->parsed() || ma->parsed()) {
      auto params = params_of(mf);
      NumericPolicy policy(mf.precision);
      bounds::CandidateVerdict v;
      if (mb1->parsed()) v = bounds::case1_methodB(need(mf.l, "l"), params, policy);
      if (mb2->parsed()) v = bounds::case2_methodB(need(mf.k, "k"), need(mf.s, "s"), params, policy);
      if (ma1->parsed()) v = bounds::case1_methodA(need(mf.l, "l"), params, policy);
      if (ma2->parsed()) v = bounds::case2_methodA(need(mf.k, "k"), need(mf.s, "s"), params, policy);
      print_verdict(out, v);
      return kOk;
    }

    if (gr->parsed()) {
      out << std::setprecision(12);
      auto show = [&](const char* which, double mn, double mx, const std::vector<double>& amin,
                      const std::vector<double>& amax, std::int64_t samples) {
        out << which << " min=" << mn << " max=" << mx << " samples=" << samples << "\n  argmin:";
        for (double x : amin) out << " " << x;
        out << "\n  argmax:";
        for (double x : amax) out << " " << x;
        out << "\n";
      };
      if (gq->parsed()) {
        auto r = gram::quad_extrema(grid, refine, seed);
        show("quad", r.min_value, r.max_value, {r.argmin.b13, r.argmin.b14, r.argmin.b23, r.argmin.b24},
             {r.argmax.b13, r.argmax.b14, r.argmax.b23, r.argmax.b24}, r.samples);
      } else {
        auto r = gram::pent_extrema(grid, refine, seed);
        auto c = [](const gram::GramPentPoint& p) { return std::vector<double>{p.c, p.b13, p.b14, p.b24, p.b25, p.b35}; };
        show("pentagon", r.min_value, r.max_value, c(r.argmin), c(r.argmax), r.samples);
      }
      return kOk;
    }

    std::string name;
    for (auto* c : camps) {
      if (c->parsed()) name = c->get_name();
    }
    campaign::RunOptions opt;
    opt.workers = workers;
    opt.policy = NumericPolicy(precision);
    opt.seed = seed;
    opt.target_override = target;
    auto rep = campaign::run(name, opt);
    out << report::summary_table(rep);
    if (!out_path.empty()) report::write_atomically(out_path, report::to_json(rep).dump(2) + "\n");
    if (expect && (!rep.grand_bound || *rep.grand_bound != *expect)) {
      err << "expected grand bound " << *expect << ", got "
          << (rep.grand_bound ? std::to_string(*rep.grand_bound) : "none") << "\n";
      return kExpectationMismatch;
    }
    return kOk;
  } catch (const PrecisionFailure& e) {
    err << "precision failure: " << e.what() << "\n";
    return kPrecisionFailure;
  } catch (const CLI::Error& e) {
    err << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace reflbound::cli
