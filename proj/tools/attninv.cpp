// attninv: generate, check, solve and report attention-inversion instances.
//
// Exit codes: 0 success, 1 check or solve failure, 2 usage or I/O error.

#include "attninv/attninv.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace attninv;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Options {
    std::uint64_t seed = 0;
    long n = 3;
    long d = 2;
    double r_target = 1.2;
    std::string gamma;
    std::string solver = "newton";
    double eps = 1e-10;
    long max_iter = -1;
    std::string eta = "auto";
    std::string init = "perturb:0.01";
    std::string out = ".";
    std::string level = "all";
    std::string problem;
    std::string x_path;
    std::vector<std::string> runs;
    std::string format = "csv";
    bool no_timing = false;
};

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

std::string sibling(const std::string& path, const std::string& name) {
    return (fs::path(path).parent_path() / name).string();
}

int cmd_generate(const Options& o) {
    require_dense_cap(o.n, o.d);
    const GammaMode g = parse_gamma(o.gamma.empty() ? "0" : o.gamma);
    const Instance inst = generate_instance(o.seed, o.n, o.d, o.r_target, g);
    ensure_dir(o.out);
    write_problem((fs::path(o.out) / "problem.json").string(), inst.spec);
    write_matrix((fs::path(o.out) / "x_true.json").string(), inst.X_true);
    std::printf("wrote %s/problem.json and %s/x_true.json (n=%ld, d=%ld, gamma=%s)\n", o.out.c_str(), o.out.c_str(),
                o.n, o.d, format_double(inst.spec.gamma).c_str());
    return kOk;
}

int cmd_check(const Options& o) {
    const ProblemSpec<double> spec = read_problem(o.problem);
    require_dense_cap(spec.n, spec.d);
    const CheckLevel level = parse_level(o.level);
    MatrixXd X;
    std::string source;
    if (!o.x_path.empty()) {
        X = read_matrix(o.x_path);
        spec.validate_input(X);
        source = o.x_path;
    } else {
        SplitMix64 rng(o.seed);
        X = random_matrix(rng, spec.d, spec.n, o.r_target);
        source = "sampled: seed " + std::to_string(o.seed) + ", spectral norm " + format_double(o.r_target);
    }
    const CheckSuite suite = run_checks(spec, X, level, o.seed, o.r_target);
    std::string json = suite.json();
    json.insert(1, "\n  \"problem\": \"" + o.problem + "\",\n  \"x_source\": \"" + source + "\",\n  \"level\": \"" +
                       o.level + "\",");
    std::cout << json;
    if (o.out != ".") {
        ensure_dir(o.out);
        write_file((fs::path(o.out) / "check_report.json").string(), json);
    }
    for (const auto& e : suite.entries)
        if (!e.pass)
            std::fprintf(stderr, "FAIL %s/%s: %s > %s %s\n", e.level.c_str(), e.name.c_str(),
                         format_double(e.lhs).c_str(), format_double(e.rhs).c_str(), e.detail.c_str());
    return suite.pass() ? kOk : kFail;
}

int cmd_solve(const Options& o) {
    ProblemSpec<double> spec = read_problem(o.problem);
    require_dense_cap(spec.n, spec.d);
    const std::string truth_path = sibling(o.problem, "x_true.json");
    const bool have_truth = fs::exists(truth_path);
    MatrixXd X_true;
    if (have_truth) {
        X_true = read_matrix(truth_path);
        spec.validate_input(X_true);
    }

    MatrixXd X0;
    if (o.init.rfind("file:", 0) == 0) {
        X0 = read_matrix(o.init.substr(5));
    } else if (o.init.rfind("perturb:", 0) == 0) {
        if (!have_truth) throw PreconditionError("--init perturb needs x_true.json next to the problem file");
        const double radius = std::stod(o.init.substr(8));
        if (!(radius >= 0)) throw PreconditionError("perturbation radius must be >= 0");
        SplitMix64 rng(o.seed);
        X0 = X_true + random_perturbation(rng, spec.d, spec.n, radius);
    } else {
        throw PreconditionError("--init must be file:<path> or perturb:<radius>");
    }
    spec.validate_input(X0);
    if (!o.gamma.empty()) {
        const GammaMode g = parse_gamma(o.gamma);
        spec.gamma = g.automatic ? choose_gamma(spec.n, spec.d, r_eff(spec, X0)) : g.value;
    }

    SolveResult<double> res;
    if (o.solver == "newton") {
        NewtonConfig cfg;
        cfg.eps = o.eps;
        if (o.max_iter > 0) cfg.max_iter = o.max_iter;
        cfg.record_time = !o.no_timing;
        res = newton_solve(spec, X0, cfg);
    } else if (o.solver == "gd") {
        GdConfig cfg;
        cfg.eps = o.eps;
        if (o.max_iter > 0) cfg.max_iter = o.max_iter;
        cfg.record_time = !o.no_timing;
        if (o.eta == "auto") {
            const MatrixXd H = hessian_L(forward_cache(spec, X0), spec, X0);
            Eigen::SelfAdjointEigenSolver<MatrixXd> es(H, Eigen::EigenvaluesOnly);
            cfg.eta = 1.0 / es.eigenvalues().cwiseAbs().maxCoeff();
        } else {
            cfg.eta = std::stod(o.eta);
        }
        res = gd_solve(spec, X0, cfg);
    } else {
        throw PreconditionError("--solver must be newton or gd");
    }

    ensure_dir(o.out);
    write_matrix((fs::path(o.out) / "x_out.json").string(), res.X);
    write_records((fs::path(o.out) / "run.jsonl").string(), res.records);
    const double dist = have_truth ? (res.X - X_true).norm() : -1.0;
    const RunSummary s = summarize(o.problem, o.solver, status_name(res.status), res.records, dist);
    write_file((fs::path(o.out) / "summary.json").string(), summary_json(s));

    std::printf("status %s\niterations %ld\nfinal loss %s\ngrad norm %s\n", status_name(res.status),
                res.iterations(), format_double(s.final_loss).c_str(), format_double(s.final_grad_norm).c_str());
    if (have_truth) std::printf("distance to x_true %s\n", format_double(dist).c_str());
    if (res.status != SolveStatus::Converged && !res.records.empty())
        std::fprintf(stderr, "last record: %s\n", record_json(res.records.back()).c_str());
    return res.status == SolveStatus::Converged ? kOk : kFail;
}

int cmd_report(const Options& o) {
    std::vector<RunSummary> rows;
    for (const auto& path : o.runs) {
        std::vector<std::string> warnings;
        const auto records = parse_records(read_file(path), &warnings);
        for (const auto& w : warnings) std::fprintf(stderr, "warning: %s: skipped %s\n", path.c_str(), w.c_str());
        RunSummary meta;
        meta.instance = path;
        const std::string sp = sibling(path, "summary.json");
        if (fs::exists(sp)) meta = parse_summary(read_file(sp));
        rows.push_back(summarize(meta.instance, meta.solver, meta.status, records, meta.distance));
    }
    if (o.format == "csv")
        std::cout << csv_table(rows);
    else if (o.format == "text")
        std::cout << text_table(rows);
    else
        throw PreconditionError("--format must be csv or text");
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recover the input of a softmax attention layer"};
    app.require_subcommand(1);
    Options o;

    auto* gen = app.add_subcommand("generate", "write problem.json and x_true.json for a seeded instance");
    gen->add_option("--seed", o.seed, "generator seed");
    gen->add_option("--n", o.n, "token count")->check(CLI::PositiveNumber);
    gen->add_option("--d", o.d, "feature dimension")->check(CLI::PositiveNumber);
    gen->add_option("--r-target", o.r_target, "spectral norm of W, V and X_true");
    gen->add_option("--gamma", o.gamma, "regularization: auto or a number (default 0)");
    gen->add_option("--out", o.out, "output directory");

    auto* chk = app.add_subcommand("check", "run derivative, bound, PSD and Lipschitz checks");
    chk->add_option("problem", o.problem, "problem.json")->required();
    chk->add_option("--x", o.x_path, "input matrix file; sampled from --seed when omitted");
    chk->add_option("--level", o.level, "grad | hessian | bounds | psd | lipschitz | all");
    chk->add_option("--seed", o.seed, "seed for sampled inputs and Lipschitz pairs");
    chk->add_option("--r-target", o.r_target, "spectral norm of sampled inputs");
    chk->add_option("--out", o.out, "directory for check_report.json");

    auto* sol = app.add_subcommand("solve", "run Newton or gradient descent");
    sol->add_option("problem", o.problem, "problem.json")->required();
    sol->add_option("--init", o.init, "file:<path> or perturb:<radius> around x_true.json");
    sol->add_option("--seed", o.seed, "seed for the perturbation");
    sol->add_option("--solver", o.solver, "newton | gd");
    sol->add_option("--gamma", o.gamma, "override gamma: auto or a number");
    sol->add_option("--eps", o.eps, "stop when ||grad|| <= eps (1 + loss)");
    sol->add_option("--max-iter", o.max_iter, "iteration limit");
    sol->add_option("--eta", o.eta, "gradient descent step: auto (1 / lambda_max at X0) or a number");
    sol->add_option("--out", o.out, "output directory");
    sol->add_flag("--no-timing", o.no_timing, "write wallclock_ms as 0 for reproducible logs");

    auto* rep = app.add_subcommand("report", "summarize run.jsonl files");
    rep->add_option("runs", o.runs, "run.jsonl files");
    rep->add_option("--format", o.format, "csv | text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) return cmd_generate(o);
        if (*chk) return cmd_check(o);
        if (*sol) return cmd_solve(o);
        if (*rep) return cmd_report(o);
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const PreconditionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const DenseCapError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: bad number: %s\n", e.what());
        return kUsage;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kFail;
    }
    return kUsage;
}
