// cotsum: command-line front end for the cotangent-sum library.
//
//   cotsum c0 --r R --b B [--precision default|oracle]
//   cotsum scan --b B [--figure] [--a0 A0 --a1 A1 --kmax K] [--ks --m1 M --samples N]
//               [--format csv|json] [--out PATH] [--threads T] [--deterministic]
//   cotsum asympt [--n N] [--b B1,B2,...] [--out PATH]
//   cotsum asympt --c1 --r R --b0 B0 [--bmin B --bmax B]
//   cotsum verify [--suite NAME] [--bmax B] [--b B] [--threads T]
//
// Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 I/O error.
// Relative --out paths are resolved against $COTSUM_OUTPUT_DIR when it is set.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cotsum/cotsum.hpp"

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kIo = 3 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::filesystem::path resolve_output(const std::string& out) {
    std::filesystem::path p(out);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("COTSUM_OUTPUT_DIR"); dir && *dir) p = std::filesystem::path(dir) / p;
    }
    return p;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw IoError("cannot open " + p.string() + " for writing");
    os << content;
    os.flush();
    if (!os) throw IoError("failed writing " + p.string());
}

// Writes to the resolved path, or stdout when no path was given.
void emit(const std::string& out, const std::string& content) {
    if (out.empty()) {
        std::cout << content;
        std::cout.flush();
        return;
    }
    write_file(resolve_output(out), content);
}

struct C0Args {
    std::int64_t r = 0, b = 0;
    std::string precision = "default";
};

int cmd_c0(const C0Args& a) {
    using namespace cotsum;
    if (a.b < 2 || a.r < 1 || a.r > a.b || gcd64(a.r, a.b) != 1) {
        std::cerr << "c0: need 1 <= r <= b, b >= 2 and gcd(r, b) = 1 (got r = " << a.r << ", b = " << a.b << ")\n";
        return kUsage;
    }
    const ReducedFraction f(a.r, a.b);
    const Precision p = a.precision == "oracle" ? Precision::oracle : Precision::standard;
    const auto c = c0(f, p);
    const auto q = q_sum(f, p);
    const auto v = vasyunin(f, p);
    std::cout << "c0 " << format_number(c.value) << " err_bound " << format_number(c.err_bound) << '\n'
              << "Q " << format_number(q.value) << " err_bound " << format_number(q.err_bound) << '\n'
              << "V " << format_number(v.value) << " err_bound " << format_number(v.err_bound) << '\n'
              << "estermann_at_zero " << format_number(0.25) << ' ' << format_number(0.5 * c.value) << '\n';
    return kOk;
}

struct ScanArgs {
    std::int64_t b = 0;
    bool figure = false;
    double a0 = 0.6, a1 = 0.8;
    int kmax = 3;
    bool ks = false;
    int m1 = 14;
    std::int64_t samples = 100000;
    std::string format;
    std::string out;
    unsigned threads = cotsum::default_threads();
    bool deterministic = false;
};

int cmd_scan(const ScanArgs& a) {
    using namespace cotsum;
    if (a.b < 2) {
        std::cerr << "scan: b must be >= 2\n";
        return kUsage;
    }
    if (a.figure) {
        if (a.format == "json") {
            std::cerr << "scan: figure mode writes CSV only\n";
            return kUsage;
        }
        std::ostringstream os;
        write_figure_csv(os, scan_points(a.b, 1, a.b - 1, a.threads));
        emit(a.out, os.str());
        return kOk;
    }
    std::optional<ScanWindow> w;
    try {
        w.emplace(a.b, a.a0, a.a1);
    } catch (const std::domain_error& e) {
        std::cerr << "scan: " << e.what() << '\n';
        return kUsage;
    }
    std::optional<EmpiricalCDF> ref;
    if (a.ks) ref = empirical_F(TruncatedGSeries(a.m1), a.samples, 1.0 / M_PI, a.threads);
    auto rep = scan(*w, a.kmax, {a.threads, ref ? &*ref : nullptr});
    // timing is the only run-dependent field
    if (a.deterministic) rep.wall_ms = 0.0;
    const std::string json = to_json(rep).dump(2) + "\n";
    std::ostringstream rows;
    write_figure_csv(rows, scan_points(w->b, w->r_lo(), w->r_hi(), a.threads));
    if (a.out.empty()) {
        emit("", a.format == "csv" ? rows.str() : json);
        return kOk;
    }
    // CSV rows at --out, the JSON report alongside with a .json extension
    auto base = resolve_output(a.out);
    if (a.format == "json") {
        write_file(base, json);
        return kOk;
    }
    write_file(base, rows.str());
    write_file(std::filesystem::path(base).replace_extension(".json"), json);
    return kOk;
}

struct AsymptArgs {
    int n = 0;
    std::vector<std::int64_t> bs = {100, 200, 400, 800, 1600};
    std::string out;
    bool c1 = false;
    std::int64_t r = 2, b0 = 1, bmin = 101, bmax = 5001;
};

int cmd_asympt(const AsymptArgs& a) {
    using namespace cotsum;
    if (a.c1) {
        if (a.r < 1 || gcd64(a.r, a.b0) != 1 || a.bmin < 2 || a.bmax <= a.bmin) {
            std::cerr << "asympt --c1: need r >= 1, gcd(r, b0) = 1 and bmin < bmax\n";
            return kUsage;
        }
        std::vector<std::int64_t> bs;
        for (std::int64_t b = std::max(a.bmin, a.r + 1); b <= a.bmax; ++b)
            if ((b - a.b0) % a.r == 0) bs.push_back(b);
        const double direct = c1_direct(C1Input(a.r, a.b0));
        const auto fit = c1_empirical(a.r, a.b0, bs);
        std::ostringstream os;
        os << "r,b0,c1_direct,c1_empirical,confidence\n"
           << a.r << ',' << a.b0 << ',' << format_number(direct) << ',' << format_number(fit.slope) << ','
           << format_number(fit.confidence) << '\n';
        emit(a.out, os.str());
        return kOk;
    }
    if (a.n < 0) {
        std::cerr << "asympt: n must be >= 0\n";
        return kUsage;
    }
    for (std::size_t i = 1; i < a.bs.size(); ++i)
        if (a.bs[i] <= a.bs[i - 1]) {
            std::cerr << "asympt: b list must be ascending\n";
            return kUsage;
        }
    const AsymptoticExpansion e(a.n);
    std::vector<AsymptRow> rows;
    for (std::int64_t b : a.bs) {
        if (b < 2) {
            std::cerr << "asympt: b must be >= 2\n";
            return kUsage;
        }
        AsymptRow row;
        row.b = b;
        const DoubleDouble exact = c0_dd(ReducedFraction(1, b));
        row.exact = static_cast<double>(exact);
        if (b < e.min_b()) {
            row.below_threshold = true;
            std::cerr << "asympt: b = " << b << " is below the threshold " << e.min_b() << " for n = " << a.n << '\n';
        } else {
            const DoubleDouble main = c0_asymptotic_dd(b, a.n);
            row.main = static_cast<double>(main);
            row.residual = static_cast<double>(exact - main);
            row.scaled_residual = row.residual * std::pow(static_cast<double>(b), a.n + 1);
        }
        rows.push_back(row);
    }
    std::ostringstream os;
    write_asympt_csv(os, rows);
    emit(a.out, os.str());
    return kOk;
}

struct VerifyArgs {
    std::string suite = "all";
    cotsum::VerifyConfig cfg;
};

int cmd_verify(const VerifyArgs& a) {
    const auto results = cotsum::run_suite(a.suite, a.cfg);
    cotsum::print_results(std::cout, results);
    std::size_t failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    std::cout << (failed == 0 ? "verify: all " : "verify: ") << (results.size() - failed) << '/' << results.size()
              << " checks passed\n";
    return failed == 0 ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cotangent sums c0(r/b): values, scans, asymptotics and self-checks"};
    app.require_subcommand(1);

    C0Args c0a;
    auto* c0cmd = app.add_subcommand("c0", "c0, Q, Vasyunin sum and Estermann value at s = 0");
    c0cmd->add_option("--r", c0a.r, "numerator")->required();
    c0cmd->add_option("--b", c0a.b, "denominator")->required();
    c0cmd->add_option("--precision", c0a.precision, "default or oracle (double-double)")
        ->check(CLI::IsMember({"default", "oracle"}));

    ScanArgs sa;
    auto* scancmd = app.add_subcommand("scan", "scan r coprime to b: figure data or window moments");
    scancmd->add_option("--b", sa.b, "denominator")->required();
    scancmd->add_flag("--figure", sa.figure, "CSV of (r, c0) over the full range 1 <= r < b");
    scancmd->add_option("--a0", sa.a0, "window start A0 (1/2 < A0 < A1 < 1)");
    scancmd->add_option("--a1", sa.a1, "window end A1");
    scancmd->add_option("--kmax", sa.kmax, "moments up to power 2*kmax")->check(CLI::PositiveNumber);
    scancmd->add_flag("--ks", sa.ks, "KS distance against the limit law of c0/b");
    scancmd->add_option("--m1", sa.m1, "truncation exponent for the limit law")->check(CLI::Range(1, 30));
    scancmd->add_option("--samples", sa.samples, "sample count for the limit law")->check(CLI::Range(1000, 100000000));
    scancmd->add_option("--format", sa.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    scancmd->add_option("--out", sa.out, "output path");
    scancmd->add_option("--threads", sa.threads, "worker threads")->check(CLI::Range(1, 1024));
    scancmd->add_flag("--deterministic", sa.deterministic, "suppress timing so reruns are byte-identical");

    AsymptArgs aa;
    auto* asymcmd = app.add_subcommand("asympt", "residuals of the asymptotic expansion of c0(1/b)");
    asymcmd->add_option("--n", aa.n, "expansion order");
    asymcmd->add_option("--b", aa.bs, "ascending list of b")->delimiter(',');
    asymcmd->add_option("--out", aa.out, "output path");
    asymcmd->add_flag("--c1", aa.c1, "compare C1(r, b0) closed form with the fitted slope");
    asymcmd->add_option("--r", aa.r, "C1: numerator r");
    asymcmd->add_option("--b0", aa.b0, "C1: residue class of b mod r");
    asymcmd->add_option("--bmin", aa.bmin, "C1: smallest b");
    asymcmd->add_option("--bmax", aa.bmax, "C1: largest b");

    VerifyArgs va;
    va.cfg.threads = cotsum::default_threads();
    auto* vcmd = app.add_subcommand("verify", "run self-check suites");
    std::vector<std::string> suites = cotsum::suite_names();
    suites.push_back("all");
    vcmd->add_option("--suite", va.suite, "suite name or all")->check(CLI::IsMember(suites));
    vcmd->add_option("--bmax", va.cfg.bmax, "largest b in the identity suite")->check(CLI::Range(3, 100000));
    vcmd->add_option("--b", va.cfg.b, "b for the moment suite")->check(CLI::Range(100, 10000000));
    vcmd->add_option("--threads", va.cfg.threads, "worker threads")->check(CLI::Range(1, 1024));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*c0cmd) return cmd_c0(c0a);
        if (*scancmd) return cmd_scan(sa);
        if (*asymcmd) return cmd_asympt(aa);
        if (*vcmd) return cmd_verify(va);
    } catch (const IoError& e) {
        std::cerr << "cotsum: " << e.what() << '\n';
        return kIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "cotsum: " << e.what() << '\n';
        return kIo;
    } catch (const std::domain_error& e) {
        std::cerr << "cotsum: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "cotsum: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
