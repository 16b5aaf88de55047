// Command-line front end: identity suites, certification pipeline, and
// certificate explanation with deterministic reports.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dpcert/suites.hpp"
#include "dpcert/verdict.hpp"

namespace {

using namespace dpcert;

struct CommonOutput {
    std::string format = "json";
    std::string out_path;
};

void write_or_print(const CommonOutput& fmt, const nlohmann::json& json_doc,
                    const std::string& md_doc, const std::string& summary)
{
    std::string body = fmt.format == "md" ? md_doc : json_doc.dump(2) + "\n";
    if (!fmt.out_path.empty()) {
        std::ofstream out(fmt.out_path, std::ios::binary);
        if (!out)
            throw InputError("cannot open output path " + fmt.out_path);
        out << body;
        std::cout << summary;
    } else {
        std::cout << body;
    }
}

int cmd_lemma_suite(const std::string& filter, std::uint64_t seed, bool corrupt_vz,
                    const CommonOutput& fmt)
{
    SuiteContext ctx;
    ctx.seed = seed;
    ctx.corrupt_vz = corrupt_vz;
    std::vector<SuiteResult> results = run_lemma_suites(ctx, filter);

    bool all_pass = true;
    nlohmann::json suites(nlohmann::json::value_t::array);
    std::string md = "# lemma suites\n\n| suite | result | detail |\n|---|---|---|\n";
    std::string summary;
    for (const SuiteResult& r : results) {
        all_pass = all_pass && r.pass;
        suites.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        md += "| " + r.name + " | " + (r.pass ? "PASS" : "FAIL") + " | " + r.detail + " |\n";
        char line[256];
        std::snprintf(line, sizeof(line), "[%s] %-12s %s (%.1f ms)\n",
                      r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(), r.wall_ms);
        summary += line;
    }
    nlohmann::json doc{{"schema", kReportSchema},
                       {"tool", {{"name", "dpcert"}, {"version", kToolVersion}}},
                       {"suites", std::move(suites)},
                       {"overall", all_pass ? "PASS" : "FAIL"}};
    write_or_print(fmt, doc, md, summary);
    return all_pass ? 0 : 1;
}

struct SurfaceArgs {
    std::string a_text;
    std::string b_text;
    int n = -1;
    std::string alpha_text;
    std::string beta_text;
};

VerdictRequest build_request(const SurfaceArgs& args, const SaturationConfig& cfg, bool h_flag)
{
    bool general = !args.a_text.empty() || !args.b_text.empty() || args.n >= 0;
    bool shorthand = !args.alpha_text.empty() || !args.beta_text.empty();
    if (general == shorthand)
        throw InputError("give exactly one surface style: --a/--b/--n or --alpha/--beta");

    VerdictRequest req;
    req.cfg = cfg;
    req.h_flag = h_flag;
    if (shorthand) {
        if (args.alpha_text.empty() || args.beta_text.empty())
            throw InputError("--alpha and --beta must be given together");
        Scalar alpha = parse_scalar(args.alpha_text);
        Scalar beta = parse_scalar(args.beta_text);
        if (!shorthand_smooth(alpha, beta))
            throw InputError("the (0,0) member of the family is singular");
        req.surface = make_shorthand_surface(alpha, beta);
        req.shorthand = {alpha, beta};
        return req;
    }
    if (args.a_text.empty() || args.b_text.empty() || args.n < 0)
        throw InputError("--a, --b and --n must be given together");
    VarSet vars(args.n, 0);
    Poly a = parse_poly(args.a_text, vars);
    Poly b = parse_poly(args.b_text, vars);
    req.surface = make_surface(std::move(a), std::move(b));
    if (auto ab = recognize_shorthand(*req.surface))
        req.shorthand = ab;
    return req;
}

int cmd_certify(const SurfaceArgs& args, const SaturationConfig& cfg, bool h_flag,
                const CommonOutput& fmt)
{
    VerdictRequest req = build_request(args, cfg, h_flag);
    MainVerdict verdict = main_theorem_verdict(req);
    Report report = build_report(req, verdict);

    std::string summary;
    for (const CheckOutcome& c : report.checks) {
        char line[512];
        std::snprintf(line, sizeof(line), "[%-15s] %-28s %s (%.1f ms)\n",
                      to_string(c.verdict), c.name.c_str(), c.detail.c_str(), c.wall_ms);
        summary += line;
    }
    summary += std::string("overall: ") + to_string(report.overall) + "\n";
    write_or_print(fmt, report.to_json(), report.to_markdown(), summary);
    return exit_code(report.overall);
}

// --- explain: replay a certificate bundle and print derivations -----------

struct ReplayedRows {
    std::vector<Poly> polys;                  // replayed content by id
    std::vector<std::string> how;             // one-line provenance per id
    PolyEchelon echelon{true};
};

OpSpec parse_op_name(const std::string& name)
{
    // Format: x^K*v_x or y^K*v_y.
    OpSpec op;
    op.x_family = name.rfind("x^", 0) == 0;
    auto star = name.find('*');
    if (star == std::string::npos || name.size() < 4)
        throw InputError("malformed operator name: " + name);
    op.k = std::stoi(name.substr(2, star - 2));
    return op;
}

ReplayedRows replay_bundle(const nlohmann::json& bundle, const SurfacePtr& s)
{
    ReplayedRows out;
    const auto& rows = bundle.at("rows");
    VectorField vx = build_vx(s, 0);
    VectorField vy = build_vy(s, 0);
    for (std::size_t id = 0; rows.contains(std::to_string(id)); ++id) {
        const auto& row = rows.at(std::to_string(id));
        Poly raw;
        std::string how;
        if (row.contains("seed")) {
            raw = reduce_against_relation(
                parse_poly(row.at("poly").get<std::string>(), s->vars), *s);
            how = "seed " + row.at("seed").get<std::string>();
        } else {
            OpSpec op = parse_op_name(row.at("op").get<std::string>());
            int parent = row.at("parent").get<int>();
            if (parent < 0 || parent >= static_cast<int>(id))
                throw InputError("row " + std::to_string(id) + " references a later parent");
            const VectorField& field = op.x_family ? vx : vy;
            Mono shift(s->vars.count(), 0);
            shift[(op.x_family ? Var::x() : Var::y()).idx] = op.k;
            raw = reduce_against_relation(
                detail::mul_monomial(field.apply_ambient(out.polys[parent]), shift, Scalar(1)),
                *s);
            how = "[" + row.at("op").get<std::string>() + "] r" + std::to_string(parent);
        }
        int got = out.echelon.insert(raw);
        if (got != static_cast<int>(id))
            throw InputError("row " + std::to_string(id) + " does not replay to a new row");
        out.polys.push_back(out.echelon.rows()[id]);
        out.how.push_back(std::move(how));
    }
    return out;
}

void print_chain(const ReplayedRows& rows, const nlohmann::json& bundle, int id,
                 std::set<int>& printed)
{
    if (printed.count(id))
        return;
    printed.insert(id);
    const auto& row = bundle.at("rows").at(std::to_string(id));
    if (!row.contains("seed")) {
        print_chain(rows, bundle, row.at("parent").get<int>(), printed);
    }
    std::cout << "  r" << id << " = " << rows.how[id] << " = "
              << to_string(rows.polys[id]) << "\n";
}

int cmd_explain(const std::string& path, const std::string& target_filter)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open certificate file " + path);
    nlohmann::json doc = nlohmann::json::parse(in);
    if (!doc.contains("certificates"))
        throw InputError("report carries no certificates");

    bool printed_any = false;
    for (const auto& bundle : doc.at("certificates")) {
        Scalar alpha = parse_scalar(bundle.at("surface").at("alpha").get<std::string>());
        Scalar beta = parse_scalar(bundle.at("surface").at("beta").get<std::string>());
        SurfacePtr s = make_shorthand_surface(alpha, beta);
        ReplayedRows rows = replay_bundle(bundle, s);
        for (const auto& target : bundle.at("targets")) {
            std::string label = target.at("target").get<std::string>();
            if (!target_filter.empty() && label != target_filter)
                continue;
            printed_any = true;
            Poly goal = reduce_against_relation(
                parse_poly(target.at("goal").get<std::string>(), s->vars), *s);
            Poly acc = rows.echelon.strip(goal);
            std::cout << bundle.at("family").get<std::string>() << " target " << label << "\n";
            std::set<int> chain_printed;
            for (const auto& entry : target.at("combination")) {
                Scalar c = parse_scalar(entry.at(0).get<std::string>());
                int id = entry.at(1).get<int>();
                if (id < 0 || id >= static_cast<int>(rows.polys.size()))
                    throw InputError("combination references a missing row");
                acc -= rows.polys[id].scaled(c);
                std::cout << "  uses (" << to_string(c) << ") * r" << id << "\n";
                print_chain(rows, bundle, id, chain_printed);
            }
            if (!acc.is_zero())
                throw InputError("replay mismatch: combination misses the target by " +
                                 to_string(acc));
            std::cout << "  combination verified exactly (modulo a constant)\n";
        }
    }
    if (!printed_any)
        throw InputError(target_filter.empty() ? "no targets in the report"
                                               : "target not found: " + target_filter);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"dpcert: exact certification toolkit for the hypersurface family "
                 "x^2 y = a(z) + x b(z)"};
    app.require_subcommand(1);

    // lemma-suite
    auto* lemma = app.add_subcommand("lemma-suite", "run the symbolic identity suites");
    std::string filter;
    std::uint64_t seed = 0;
    bool corrupt_vz = false;
    CommonOutput lemma_fmt;
    lemma->add_option("--suite", filter, "run a single suite by name");
    lemma->add_option("--seed", seed, "seed for the randomized suites")->default_val(0);
    lemma->add_flag("--corrupt-vz", corrupt_vz,
                    "swap in the deliberately wrong v_z variant (tangency must fail)");
    lemma->add_option("--format", lemma_fmt.format, "json or md")
        ->check(CLI::IsMember({"json", "md"}))
        ->default_val("json");
    lemma->add_option("--out", lemma_fmt.out_path, "write the report to a file");

    // certify
    auto* certify = app.add_subcommand("certify", "run the certification pipeline");
    SurfaceArgs surface;
    SaturationConfig cfg;
    bool h_flag = false;
    CommonOutput certify_fmt;
    certify->add_option("--a", surface.a_text, "polynomial a(z0..zn)");
    certify->add_option("--b", surface.b_text, "polynomial b(z0..zn)");
    certify->add_option("--n", surface.n, "index of the last z variable");
    certify->add_option("--alpha", surface.alpha_text, "constant alpha of the n = 0 family");
    certify->add_option("--beta", surface.beta_text, "constant beta of the n = 0 family");
    certify->add_option("--degree", cfg.degree_target, "saturation target degree")
        ->default_val(5);
    certify->add_option("--cap", cfg.degree_cap, "saturation retention cap")->default_val(12);
    certify->add_option("--kmax", cfg.k_max, "largest operator exponent")->default_val(6);
    certify->add_option("--rounds", cfg.max_rounds, "round budget")->default_val(32);
    certify->add_option("--jobs", cfg.jobs, "worker threads for saturation")->default_val(1);
    certify->add_option("--seed", cfg.seed, "seed echoed into the report")->default_val(0);
    certify->add_flag("--h-flag", h_flag,
                      "assert vanishing of the middle cohomology (echoed, not computed)");
    certify->add_option("--format", certify_fmt.format, "json or md")
        ->check(CLI::IsMember({"json", "md"}))
        ->default_val("json");
    certify->add_option("--out", certify_fmt.out_path, "write the report to a file");

    // explain
    auto* explain = app.add_subcommand("explain", "replay and print certificate derivations");
    std::string cert_path;
    std::string target;
    explain->add_option("--cert", cert_path, "report JSON with certificates")->required();
    explain->add_option("--target", target, "single target label to explain");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (lemma->parsed())
            return cmd_lemma_suite(filter, seed, corrupt_vz, lemma_fmt);
        if (certify->parsed()) {
            cfg.validate();
            return cmd_certify(surface, cfg, h_flag, certify_fmt);
        }
        return cmd_explain(cert_path, target);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
