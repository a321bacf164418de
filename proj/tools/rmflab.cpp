// rmflab: exact and Monte Carlo moments of random multiplicative sums over
// integers with a fixed number of prime factors, plus the ratio tables that
// go with them.
//
// Exit codes: 0 success, 1 a verified inequality/identity failed, 2 invalid
// arguments, 3 work budget exceeded. Errors print a JSON object on stderr.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmf/analysis.hpp"
#include "rmf/counts.hpp"
#include "rmf/errors.hpp"
#include "rmf/moments.hpp"
#include "rmf/report.hpp"
#include "rmf/sampler.hpp"
#include "rmf/sieve.hpp"
#include "rmf/version.hpp"

using namespace rmf;
using nlohmann::json;

namespace {

u64 parse_seed(const std::string &text) {
    size_t pos = 0;
    int base = 10;
    std::string body = text;
    if (body.size() > 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X')) {
        base = 16;
        body = body.substr(2);
    }
    if (body.empty()) throw std::invalid_argument("empty seed");
    u64 v = std::stoull(body, &pos, base);
    if (pos != body.size()) throw std::invalid_argument("bad seed: " + text);
    return v;
}

void print_error(const std::string &code, const std::string &message,
                 const json &extra = json::object()) {
    json err{{"code", code}, {"message", message}};
    for (auto it = extra.begin(); it != extra.end(); ++it) err[it.key()] = it.value();
    std::cerr << json{{"error", err}}.dump() << "\n";
}

// table commands: CSV to stdout by default, --format json for the full
// report object, --out for an atomic file write
void emit_report(const RatioReport &report, const std::string &format, const std::string &out) {
    std::string text = (format == "json") ? to_json(report).dump(2) + "\n" : to_csv(report);
    if (out.empty()) {
        std::cout << text;
    } else {
        write_text_atomic(out, text);
        std::cout << "wrote " << out << "\n";
    }
}

struct CommonOpts {
    u64 budget_ops = WorkBudget::defaults().max_ops;
    std::string format;
    std::string out;

    WorkBudget budget() const { return WorkBudget{budget_ops}; }
};

void add_table_opts(CLI::App *cmd, CommonOpts &opts) {
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", opts.out, "write the report to PATH (atomic)");
    cmd->add_option("--budget", opts.budget_ops, "elementary-operation budget")
        ->envname("RMFLAB_BUDGET");
}

int run_sieve_info(u64 limit, const std::string &save_cache, const std::string &load_cache) {
    FactorSieve sv = load_cache.empty() ? build_sieve(limit)
                                        : FactorSieve::load_cache(load_cache);
    if (!save_cache.empty()) sv.save_cache(save_cache);
    json j{{"limit", sv.limit()},
           {"n_primes", sv.primes().size()},
           {"largest_prime", sv.primes().back()},
           {"tool_version", RMF_VERSION}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_counts(u64 limit, int m_max, const CommonOpts &opts) {
    FactorSieve sv(std::max<u64>(limit, 2));
    CountTable table = count_table(sv, limit);

    if (opts.format.empty() && opts.out.empty()) {
        std::string line;
        for (int m = 0; m <= m_max; ++m) {
            if (m) line += ',';
            u64 c = m < static_cast<int>(table.counts.size()) ? table.counts[m] : 0;
            line += std::to_string(c);
        }
        std::cout << line << "\n";
        return 0;
    }

    RatioReport report;
    report.name = "counts";
    report.columns = {"m", "count"};
    report.metadata = report_metadata({}, 0);
    for (int m = 0; m <= m_max; ++m) {
        u64 c = m < static_cast<int>(table.counts.size()) ? table.counts[m] : 0;
        report.add_row({Value(m), Value(c)});
    }
    emit_report(report, opts.format, opts.out);
    return 0;
}

int run_approx(u64 limit, int m) {
    FactorSieve sv(std::max<u64>(limit, 2));
    u64 exact = count_E(sv, limit, m);
    double sathe = sathe_approx(limit, m);
    double bdn = bdn_approx(limit, m);
    json j{{"N", limit},          {"m", m},
           {"exact", exact},      {"sathe", sathe},
           {"bdn", bdn},          {"ratio_sathe", exact / sathe},
           {"ratio_bdn", exact / bdn}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_moment(u64 limit, int m, int k, const std::string &model_str, bool allow_large,
               const CommonOpts &opts) {
    // k=3 work grows like |r2| * |E|
    if (k == 3 && !allow_large && (limit > 3000 || m > 4))
        throw ResourceLimitError(
            "exact k=3 moments are capped at N <= 3000, m <= 4 by default; pass "
            "--allow-large to override (the --budget guard still applies)",
            limit, 3000);
    FactorSieve sv(std::max<u64>(limit, 2));
    Model model = model_from_name(model_str);
    MomentValue mv = (model == Model::steinhaus)
                         ? exact_moment(sv, limit, m, k, opts.budget())
                         : exact_moment_rademacher(sv, limit, m, k, opts.budget());
    std::cout << moment_record(mv, model).dump(2) << "\n";
    return 0;
}

int run_s_count(const SCountParams &params, const CommonOpts &opts) {
    u64 max_bound = std::max({params.n1, params.n2, params.n1p, params.n2p, u64(2)});

    // the bound needs N1'*N2' <= N1*N2; the quadruple count is side-symmetric
    SCountParams oriented = params;
    bool swapped = false;
    if (static_cast<u128>(params.n1p) * params.n2p > static_cast<u128>(params.n1) * params.n2) {
        oriented = SCountParams{params.n1p, params.n2p, params.n1, params.n2,
                                params.m1p, params.m2p, params.m1, params.m2};
        swapped = true;
    }

    // the bound's count arguments reach up to N/N1 and N/N2 with N = N1'*N2';
    // size the sieve for them when that stays practical
    constexpr u64 kBoundSieveCap = 20000000;
    u128 n_for_bound = static_cast<u128>(oriented.n1p) * oriented.n2p;
    u128 need = std::max({static_cast<u128>(max_bound), n_for_bound / oriented.n1,
                          n_for_bound / oriented.n2});
    bool bound_feasible = need <= kBoundSieveCap;

    FactorSieve sv(bound_feasible ? std::max<u64>(static_cast<u64>(need), 2) : max_bound);
    u128 exact = count_S(sv, params, opts.budget());

    json j{{"count", u128_to_string(exact)},
           {"cs_bound", bound_feasible ? json(cs_bound(sv, oriented)) : json(nullptr)},
           {"cs_bound_sides_swapped", swapped},
           {"params",
            {{"N1", params.n1},
             {"N2", params.n2},
             {"N1p", params.n1p},
             {"N2p", params.n2p},
             {"m1", params.m1},
             {"m2", params.m2},
             {"m1p", params.m1p},
             {"m2p", params.m2p}}}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_mc(u64 limit, int m, double q, u64 samples, const std::string &seed_str,
           const std::string &model_str) {
    FactorSieve sv(std::max<u64>(limit, 2));
    u64 seed = parse_seed(seed_str);
    Model model = model_from_name(model_str);
    McEstimate est = mc_moment(sv, limit, m, q, samples, seed, model);
    json j{{"model", model_name(model)}, {"N", est.limit},     {"m", *est.m},
           {"q", est.q},                 {"n_samples", est.n_samples},
           {"seed", est.seed},           {"mean", est.mean},
           {"stderr", est.stderr_mean}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_verify_identity22(const std::vector<u64> &limits, const std::vector<int> &m_values,
                          int trials, const std::string &seed_str, double tolerance,
                          const CommonOpts &opts) {
    u64 seed = parse_seed(seed_str);
    u64 max_limit = *std::max_element(limits.begin(), limits.end());
    FactorSieve sv(std::max<u64>(max_limit, 2));
    bool all_ok = true;
    for (u64 n : limits) {
        for (int m : m_values) {
            double max_err = 0.0;
            for (int t = 0; t < trials; ++t) {
                auto z = sample_assignment(sv.primes(), Model::steinhaus, seed,
                                           static_cast<u64>(t));
                max_err = std::max(max_err, verify_identity_2_2(sv, n, m, z, opts.budget()));
            }
            bool ok = max_err < tolerance;
            all_ok = all_ok && ok;
            std::printf("identity22 N=%llu m=%d trials=%d max_rel_err=%.3e %s\n",
                        static_cast<unsigned long long>(n), m, trials, max_err,
                        ok ? "PASS" : "FAIL");
        }
    }
    return all_ok ? 0 : 1;
}

int run_verify_prop21(u64 limit, int m_max, const CommonOpts &opts) {
    FactorSieve sv(std::max<u64>(limit, 2));
    bool all_ok = true;
    for (int m = 0; m <= m_max; ++m) {
        Prop21Result r = verify_prop_2_1(sv, limit, m, opts.budget());
        all_ok = all_ok && r.holds;
        std::printf("prop21 N=%llu m=%d lhs=%s rhs=%s %s\n",
                    static_cast<unsigned long long>(limit), m, u128_to_string(r.lhs).c_str(),
                    u128_to_string(r.rhs).c_str(), r.holds ? "PASS" : "FAIL");
    }
    return all_ok ? 0 : 1;
}

int run_verify_cs(int tuples, u64 max_bound, const std::string &seed_str,
                  const CommonOpts &opts) {
    FactorSieve sv(std::max<u64>(max_bound, 2));
    std::mt19937_64 rng(parse_seed(seed_str));
    std::uniform_int_distribution<u64> nd(1, max_bound);
    std::uniform_int_distribution<int> md(0, 3);
    int violations = 0;
    for (int t = 0; t < tuples; ++t) {
        SCountParams p{nd(rng), nd(rng), nd(rng), nd(rng), md(rng), md(rng), md(rng), md(rng)};
        u128 s = count_S(sv, p, opts.budget());
        u128 a = pair_second_moment(sv, p.n1, p.n2, p.m1, p.m2, opts.budget());
        u128 b = pair_second_moment(sv, p.n1p, p.n2p, p.m1p, p.m2p, opts.budget());
        if (s * s > a * b) ++violations;
    }
    std::printf("cs: %d/%d tuples satisfy count_S^2 <= psm_a*psm_b %s\n", tuples - violations,
                tuples, violations == 0 ? "PASS" : "FAIL");
    return violations == 0 ? 0 : 1;
}

constexpr u64 kDefaultLemmaLimits[] = {10000, 100000, 1000000};
constexpr int kDefaultKs[] = {1, 2, 3};

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"moments of random multiplicative sums restricted by prime-factor count"};
    app.set_version_flag("--version", RMF_VERSION);
    app.require_subcommand(1);

    CommonOpts opts;

    // sieve-info
    auto *cmd_sieve = app.add_subcommand("sieve-info", "build a sieve and print its shape");
    u64 si_limit = 1000;
    std::string si_save, si_load;
    cmd_sieve->add_option("--limit", si_limit, "sieve limit")->required();
    cmd_sieve->add_option("--save-cache", si_save, "write the spf table to PATH");
    cmd_sieve->add_option("--load-cache", si_load, "load the spf table from PATH instead");

    // counts
    auto *cmd_counts = app.add_subcommand("counts", "|E_{N,m}| for m = 0..m-max");
    u64 c_limit = 0;
    int c_mmax = 0;
    cmd_counts->add_option("--limit", c_limit)->required();
    cmd_counts->add_option("--m-max", c_mmax)->required();
    add_table_opts(cmd_counts, opts);

    // approx
    auto *cmd_approx = app.add_subcommand("approx", "exact count vs the approximation formulas");
    u64 a_limit = 0;
    int a_m = 1;
    cmd_approx->add_option("--limit", a_limit)->required();
    cmd_approx->add_option("--m", a_m)->required();

    // moment
    auto *cmd_moment = app.add_subcommand("moment", "exact E|S_{N,m}|^(2k) by collision counting");
    u64 mo_limit = 0;
    int mo_m = 0, mo_k = 1;
    std::string mo_model = "steinhaus";
    bool mo_allow_large = false;
    cmd_moment->add_option("--limit", mo_limit)->required();
    cmd_moment->add_option("--m", mo_m)->required();
    cmd_moment->add_option("--k", mo_k)->required();
    cmd_moment->add_option("--model", mo_model)->check(CLI::IsMember({"steinhaus", "rademacher"}));
    cmd_moment->add_flag("--allow-large", mo_allow_large, "lift the default k=3 size cap");
    cmd_moment->add_option("--budget", opts.budget_ops)->envname("RMFLAB_BUDGET");

    // s-count
    auto *cmd_scount = app.add_subcommand("s-count", "quadruple collision count with its bound");
    SCountParams sp;
    cmd_scount->add_option("--n1", sp.n1)->required();
    cmd_scount->add_option("--n2", sp.n2)->required();
    cmd_scount->add_option("--n1p", sp.n1p)->required();
    cmd_scount->add_option("--n2p", sp.n2p)->required();
    cmd_scount->add_option("--m1", sp.m1)->required();
    cmd_scount->add_option("--m2", sp.m2)->required();
    cmd_scount->add_option("--m1p", sp.m1p)->required();
    cmd_scount->add_option("--m2p", sp.m2p)->required();
    cmd_scount->add_option("--budget", opts.budget_ops)->envname("RMFLAB_BUDGET");

    // mc
    auto *cmd_mc = app.add_subcommand("mc", "Monte Carlo moment estimate");
    u64 mc_limit = 0, mc_samples = 0;
    int mc_m = 0;
    double mc_q = 2.0;
    std::string mc_seed = "1", mc_model = "steinhaus";
    cmd_mc->add_option("--limit", mc_limit)->required();
    cmd_mc->add_option("--m", mc_m)->required();
    cmd_mc->add_option("--q", mc_q)->required();
    cmd_mc->add_option("--samples", mc_samples)->required();
    cmd_mc->add_option("--seed", mc_seed, "decimal or 0x-hex");
    cmd_mc->add_option("--model", mc_model)->check(CLI::IsMember({"steinhaus", "rademacher"}));

    // verify
    auto *cmd_verify = app.add_subcommand("verify", "exact identity and inequality checks");
    cmd_verify->require_subcommand(1);

    auto *v_id = cmd_verify->add_subcommand("identity22", "square-expansion identity");
    std::vector<u64> vi_limits{50, 200};
    std::vector<int> vi_ms{1, 2, 3};
    int vi_trials = 10;
    std::string vi_seed = "1";
    double vi_tol = 1e-9;
    v_id->add_option("--limits", vi_limits)->delimiter(',');
    v_id->add_option("--m-values", vi_ms)->delimiter(',');
    v_id->add_option("--trials", vi_trials);
    v_id->add_option("--seed", vi_seed);
    v_id->add_option("--tolerance", vi_tol);
    v_id->add_option("--budget", opts.budget_ops)->envname("RMFLAB_BUDGET");

    auto *v_prop = cmd_verify->add_subcommand("prop21", "6th-moment inequality");
    u64 vp_limit = 120;
    int vp_mmax = 3;
    v_prop->add_option("--limit", vp_limit);
    v_prop->add_option("--m-max", vp_mmax);
    v_prop->add_option("--budget", opts.budget_ops)->envname("RMFLAB_BUDGET");

    auto *v_cs = cmd_verify->add_subcommand("cs", "count_S^2 <= psm_a * psm_b on random tuples");
    int vc_tuples = 200;
    u64 vc_bound = 200;
    std::string vc_seed = "2";
    v_cs->add_option("--tuples", vc_tuples);
    v_cs->add_option("--max-bound", vc_bound);
    v_cs->add_option("--seed", vc_seed);
    v_cs->add_option("--budget", opts.budget_ops)->envname("RMFLAB_BUDGET");

    // ratios
    auto *cmd_ratios = app.add_subcommand("ratios", "diagnostic ratio tables");
    cmd_ratios->require_subcommand(1);

    auto *r_theorem = cmd_ratios->add_subcommand("theorem", "M2/M4/M6 table");
    std::vector<u64> rt_limits{500, 1000, 2000};
    std::vector<int> rt_ms{1, 2, 3};
    r_theorem->add_option("--limits", rt_limits)->delimiter(',');
    r_theorem->add_option("--m-values", rt_ms)->delimiter(',');
    add_table_opts(r_theorem, opts);

    auto *r_l33 = cmd_ratios->add_subcommand("lemma33", "sum |E_{b,k}|/b^2 over 2^(2k)");
    std::vector<u64> l33_limits(std::begin(kDefaultLemmaLimits), std::end(kDefaultLemmaLimits));
    std::vector<int> l33_ks(std::begin(kDefaultKs), std::end(kDefaultKs));
    r_l33->add_option("--limits", l33_limits)->delimiter(',');
    r_l33->add_option("--k-values", l33_ks)->delimiter(',');
    add_table_opts(r_l33, opts);

    auto *r_l34 = cmd_ratios->add_subcommand("lemma34", "tail sum over its predicted size");
    std::vector<u64> l34_limits(std::begin(kDefaultLemmaLimits), std::end(kDefaultLemmaLimits));
    std::vector<int> l34_ks(std::begin(kDefaultKs), std::end(kDefaultKs));
    std::vector<int> l34_kps(std::begin(kDefaultKs), std::end(kDefaultKs));
    r_l34->add_option("--limits", l34_limits)->delimiter(',');
    r_l34->add_option("--k-values", l34_ks)->delimiter(',');
    r_l34->add_option("--kprime-values", l34_kps)->delimiter(',');
    add_table_opts(r_l34, opts);

    auto *r_gauss = cmd_ratios->add_subcommand("gaussian", "M_{2k}/|E|^k vs both limit constants");
    std::vector<u64> rg_limits{200, 500, 1000};
    std::vector<int> rg_ms{1, 2, 3};
    int rg_k = 2;
    u64 rg_samples = 2000;
    std::string rg_seed = "42";
    r_gauss->add_option("--limits", rg_limits)->delimiter(',');
    r_gauss->add_option("--m-values", rg_ms)->delimiter(',');
    r_gauss->add_option("--k", rg_k);
    r_gauss->add_option("--samples", rg_samples);
    r_gauss->add_option("--seed", rg_seed);
    add_table_opts(r_gauss, opts);

    auto *r_helson = cmd_ratios->add_subcommand("helson", "E|S_N| / sqrt(N) trend");
    std::vector<u64> rh_limits{100, 1000, 10000};
    u64 rh_samples = 500;
    std::string rh_seed = "42";
    r_helson->add_option("--limits", rh_limits)->delimiter(',');
    r_helson->add_option("--samples", rh_samples);
    r_helson->add_option("--seed", rh_seed);
    add_table_opts(r_helson, opts);

    // report
    auto *cmd_report = app.add_subcommand("report", "run the default suite and write it out");
    std::string rep_out;
    cmd_report->add_option("--out", rep_out, "output file (json) or directory (csv)")->required();
    cmd_report->add_option("--format", opts.format)->check(CLI::IsMember({"csv", "json"}));
    cmd_report->add_option("--budget", opts.budget_ops)->envname("RMFLAB_BUDGET");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        print_error("invalid_argument", e.what());
        return 2;
    }

    try {
        if (*cmd_sieve) return run_sieve_info(si_limit, si_save, si_load);
        if (*cmd_counts) return run_counts(c_limit, c_mmax, opts);
        if (*cmd_approx) return run_approx(a_limit, a_m);
        if (*cmd_moment) return run_moment(mo_limit, mo_m, mo_k, mo_model, mo_allow_large, opts);
        if (*cmd_scount) return run_s_count(sp, opts);
        if (*cmd_mc) return run_mc(mc_limit, mc_m, mc_q, mc_samples, mc_seed, mc_model);
        if (*v_id)
            return run_verify_identity22(vi_limits, vi_ms, vi_trials, vi_seed, vi_tol, opts);
        if (*v_prop) return run_verify_prop21(vp_limit, vp_mmax, opts);
        if (*v_cs) return run_verify_cs(vc_tuples, vc_bound, vc_seed, opts);

        if (*r_theorem) {
            u64 max_n = *std::max_element(rt_limits.begin(), rt_limits.end());
            FactorSieve sv(std::max<u64>(max_n, 2));
            emit_report(theorem_ratios(sv, rt_limits, rt_ms, opts.budget()), opts.format,
                        opts.out);
            return 0;
        }
        if (*r_l33) {
            u64 max_n = *std::max_element(l33_limits.begin(), l33_limits.end());
            FactorSieve sv(std::max<u64>(max_n, 2));
            emit_report(lemma33_table(sv, l33_limits, l33_ks), opts.format, opts.out);
            return 0;
        }
        if (*r_l34) {
            u64 max_n = *std::max_element(l34_limits.begin(), l34_limits.end());
            FactorSieve sv(std::max<u64>(max_n, 2));
            emit_report(lemma34_table(sv, l34_limits, l34_ks, l34_kps), opts.format, opts.out);
            return 0;
        }
        if (*r_gauss) {
            u64 max_n = *std::max_element(rg_limits.begin(), rg_limits.end());
            FactorSieve sv(std::max<u64>(max_n, 2));
            McConfig mc{rg_samples, parse_seed(rg_seed)};
            emit_report(gaussian_ratios(sv, rg_limits, rg_ms, rg_k, mc, opts.budget()),
                        opts.format, opts.out);
            return 0;
        }
        if (*r_helson) {
            u64 max_n = *std::max_element(rh_limits.begin(), rh_limits.end());
            FactorSieve sv(std::max<u64>(max_n, 2));
            emit_report(helson_trend(sv, rh_limits, rh_samples, parse_seed(rh_seed)),
                        opts.format, opts.out);
            return 0;
        }

        if (*cmd_report) {
            FactorSieve sv(1000000);
            WorkBudget budget = opts.budget();

            std::vector<RatioReport> reports;
            std::vector<u64> approx_limits{10000, 100000, 1000000};
            std::vector<int> small_ms{1, 2, 3};
            reports.push_back(approx_ratio_table(sv, approx_limits, small_ms));
            std::vector<u64> theorem_limits{500, 1000, 2000};
            reports.push_back(theorem_ratios(sv, theorem_limits, small_ms, budget));
            std::vector<u64> lemma_limits(std::begin(kDefaultLemmaLimits),
                                          std::end(kDefaultLemmaLimits));
            std::vector<int> ks(std::begin(kDefaultKs), std::end(kDefaultKs));
            reports.push_back(lemma33_table(sv, lemma_limits, ks));
            reports.push_back(lemma34_table(sv, lemma_limits, ks, ks));
            std::vector<u64> gauss_limits{200, 500, 1000};
            reports.push_back(gaussian_ratios(sv, gauss_limits, small_ms, 2, McConfig{}, budget));
            std::vector<u64> helson_limits{100, 1000, 10000};
            reports.push_back(helson_trend(sv, helson_limits, 500, 42));

            if (opts.format == "csv") {
                std::filesystem::create_directories(rep_out);
                for (const auto &r : reports)
                    write_text_atomic(std::filesystem::path(rep_out) / (r.name + ".csv"),
                                      to_csv(r));
            } else {
                json all = json::array();
                for (const auto &r : reports) all.push_back(to_json(r));
                write_text_atomic(rep_out,
                                  json{{"tool_version", RMF_VERSION}, {"reports", all}}.dump(2) +
                                      "\n");
            }
            std::cout << "wrote " << rep_out << "\n";
            return 0;
        }
    } catch (const ResourceLimitError &e) {
        print_error("resource_limit", e.what(),
                    {{"estimated_ops", e.estimated_ops()}, {"budget_ops", e.budget_ops()}});
        return 3;
    } catch (const ZeroDenominatorError &e) {
        print_error("zero_denominator", e.what());
        return 2;
    } catch (const std::invalid_argument &e) {
        print_error("invalid_argument", e.what());
        return 2;
    } catch (const std::out_of_range &e) {
        print_error("out_of_range", e.what());
        return 2;
    } catch (const std::exception &e) {
        print_error("internal", e.what());
        return 4;
    }

    print_error("invalid_argument", "no subcommand selected");
    return 2;
}
