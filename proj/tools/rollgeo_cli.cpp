#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "rollgeo/catalog.hpp"
#include "rollgeo/controllability.hpp"
#include "rollgeo/io.hpp"

using nlohmann::json;
using namespace rollgeo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

struct PairOptions {
    std::string pair;
    std::string config;  // "random" or a JSON file path
    unsigned seed = 17;
    int kmax = 4;
    double tolRank = 1e-6;
    double tolDet = 1e-8;
    std::string out;
};

void addPairOptions(CLI::App* cmd, PairOptions& opt, bool needConfig = true) {
    cmd->add_option("--pair", opt.pair,
                    "Manifold pair, e.g. sphere(2,1):euclidean(2)")
        ->required();
    if (needConfig)
        cmd->add_option("--config", opt.config,
                        "Configuration JSON file, or 'random'")
            ->default_val("random");
    cmd->add_option("--seed", opt.seed, "Seed for random draws")
        ->default_val(17);
    cmd->add_option("--kmax", opt.kmax, "Filtration depth")->default_val(4);
    cmd->add_option("--tol-rank", opt.tolRank, "SVD rank tolerance")
        ->default_val(1e-6);
    cmd->add_option("--tol-det", opt.tolDet, "Determinant threshold")
        ->default_val(1e-8);
    cmd->add_option("--out", opt.out, "Output path (default stdout)");
}

Configuration resolveConfig(const PairOptions& opt, const ChartManifold& M,
                            const ChartManifold& Mhat) {
    if (opt.config == "random") {
        std::mt19937_64 rng(opt.seed);
        return randomConfiguration(M, Mhat, rng);
    }
    std::ifstream in(opt.config);
    if (!in) throw ArgumentError("cannot open config file " + opt.config);
    json j;
    in >> j;
    Configuration q = configurationFromJson(j);
    M.requireDomain(q.x);
    Mhat.requireDomain(q.xhat);
    if (q.soResidual() > 1e-8)
        throw ArgumentError("config Q is not special orthogonal");
    return q;
}

void writeText(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot open output file " + path);
    out << text;
}

int cmdReport(const PairOptions& opt, const std::vector<std::string>& tests) {
    auto [M, Mhat] = parsePair(opt.pair);
    Configuration q = resolveConfig(opt, M, Mhat);
    ControllabilityReport rep =
        analyze(M, Mhat, q, opt.kmax, opt.tolRank, opt.tolDet, opt.seed);

    auto wanted = [&](const std::string& name) {
        if (tests.empty()) return true;
        for (const std::string& t : tests)
            if (t == name || t == "all") return true;
        return false;
    };
    std::vector<TestResult> kept;
    for (TestResult& t : rep.tests)
        if (wanted(t.name)) kept.push_back(std::move(t));
    rep.tests = std::move(kept);

    if (wanted("promote-complete")) {
        TestResult promo =
            promoteComplete(M, Mhat, q.x, 50, opt.seed, opt.tolDet);
        rep.promoted = promo.outcome == TestOutcome::Pass;
        rep.promotion = promo.detail;
        rep.tests.push_back(std::move(promo));
    }
    writeText(opt.out, reportToJson(rep, M, Mhat).dump(2) + "\n");
    return kExitOk;
}

int cmdRoll(const PairOptions& opt, const std::string& curvePath) {
    auto [M, Mhat] = parsePair(opt.pair);
    std::ifstream in(curvePath);
    if (!in) throw ArgumentError("cannot open curve file " + curvePath);
    BaseCurve base = readBaseCurveCsv(in, M.dim());

    Configuration q0;
    if (opt.config == "random" || opt.config.empty()) {
        q0.x = base.pos(0.0);
        q0.xhat = Vec::Zero(Mhat.dim());
        q0.Q = Mat::Identity(M.dim(), M.dim());
    } else {
        q0 = resolveConfig(opt, M, Mhat);
    }

    RollingCurve rc = rollAlong(M, Mhat, base, q0);
    RollingResiduals res = verifyRolling(M, Mhat, rc, 1e-5, opt.seed);

    std::ostringstream csv;
    writeRollingCsv(csv, rc);
    writeText(opt.out, csv.str());

    json summary;
    summary["schema"] = kSchemaVersion;
    summary["seed"] = opt.seed;
    summary["steps"] = static_cast<int>(rc.ts.size()) - 1;
    summary["no_slip_residual"] = res.noSlip;
    summary["no_twist_residual"] = res.noTwist;
    summary["so_drift"] = res.soDrift;
    summary["pass"] = res.pass;
    std::cerr << summary.dump(2) << "\n";
    return res.pass ? kExitOk : kExitDomain;
}

// Grid spec: comma-separated "var=lo:hi:count". Variables: x<i>,
// xhat<i> (chart coordinates), and frame-relation angles: "angle" (2D
// rotation) or "theta"/"phi"/"psi" (3D three-angle parametrization).
struct GridAxis {
    std::string var;
    double lo = 0.0, hi = 0.0;
    int count = 1;

    double value(int k) const {
        return count < 2 ? lo : lo + (hi - lo) * k / (count - 1);
    }
};

std::vector<GridAxis> parseGrid(const std::string& spec) {
    std::vector<GridAxis> axes;
    std::istringstream is(spec);
    std::string part;
    while (std::getline(is, part, ',')) {
        if (part.empty()) continue;
        GridAxis ax;
        auto eq = part.find('=');
        if (eq == std::string::npos)
            throw ArgumentError("grid axis '" + part + "' must be var=lo:hi:count");
        ax.var = part.substr(0, eq);
        std::istringstream rng(part.substr(eq + 1));
        std::string tok;
        std::vector<double> vals;
        while (std::getline(rng, tok, ':')) vals.push_back(std::stod(tok));
        if (vals.size() != 3)
            throw ArgumentError("grid axis '" + part + "' must be var=lo:hi:count");
        ax.lo = vals[0];
        ax.hi = vals[1];
        ax.count = static_cast<int>(vals[2]);
        if (ax.count < 1) throw ArgumentError("grid axis count must be >= 1");
        axes.push_back(std::move(ax));
    }
    if (axes.empty()) throw ArgumentError("empty grid spec");
    return axes;
}

Mat rot2(double angle) {
    Mat R(2, 2);
    R << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return R;
}

int cmdSweep(const PairOptions& opt, const std::string& gridSpec) {
    auto [M, Mhat] = parsePair(opt.pair);
    const int n = M.dim();
    std::vector<GridAxis> axes = parseGrid(gridSpec);

    std::ostringstream csv;
    for (const GridAxis& ax : axes) csv << ax.var << ",";
    for (int k = 1; k <= opt.kmax; ++k) csv << "r" << k << ",";
    csv << "det,kappa_min,kappa_max,verdict\n";

    std::vector<int> idx(axes.size(), 0);
    bool more = true;
    while (more) {
        // Base configuration at the chart origins, identity relation,
        // then apply the grid variables.
        Configuration q;
        q.x = Vec::Zero(n);
        q.xhat = Vec::Zero(n);
        q.Q = Mat::Identity(n, n);
        double theta = 0, phi = 0, psi = 0;
        bool angles3 = false;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const std::string& var = axes[a].var;
            double v = axes[a].value(idx[a]);
            if (var == "angle" && n == 2) {
                q.Q = rot2(v);
            } else if ((var == "theta" || var == "phi" || var == "psi") &&
                       n == 3) {
                angles3 = true;
                (var == "theta" ? theta : var == "phi" ? phi : psi) = v;
            } else if (var.rfind("xhat", 0) == 0) {
                q.xhat[std::stoi(var.substr(4))] = v;
            } else if (var.rfind("x", 0) == 0) {
                q.x[std::stoi(var.substr(1))] = v;
            } else {
                throw ArgumentError("unknown grid variable " + var);
            }
        }
        if (angles3) q.Q = catalog::so3FromAngles(theta, phi, psi);

        M.requireDomain(q.x);
        Mhat.requireDomain(q.xhat);
        Filtration f = filtration(M, Mhat, q, opt.kmax, opt.tolRank);
        CurvatureGap gap = curvatureGap(M, Mhat, q);
        SectionalGap sec = sectionalGap(M, Mhat, q, 64, opt.seed);
        Verdict verdict = verdictFor(f, gap, opt.tolDet);

        for (std::size_t a = 0; a < axes.size(); ++a)
            csv << csvNumber(axes[a].value(idx[a])) << ",";
        for (int k = 0; k < opt.kmax; ++k) {
            int r = k < static_cast<int>(f.ranks.size())
                        ? f.ranks[k]
                        : f.ranks.back();  // full rank reached early
            csv << r << ",";
        }
        csv << csvNumber(gap.det) << "," << csvNumber(sec.lo) << ","
            << csvNumber(sec.hi) << "," << verdictName(verdict) << "\n";

        more = false;
        for (int a = static_cast<int>(axes.size()) - 1; a >= 0; --a) {
            if (++idx[a] < axes[a].count) {
                more = true;
                break;
            }
            idx[a] = 0;
        }
    }
    writeText(opt.out, csv.str());
    return kExitOk;
}

int cmdBracketTable(const PairOptions& opt) {
    auto [M, Mhat] = parsePair(opt.pair);
    Configuration q = resolveConfig(opt, M, Mhat);
    Filtration f = filtration(M, Mhat, q, opt.kmax, opt.tolRank);
    json j = filtrationToJson(f);
    j["seed"] = opt.seed;
    writeText(opt.out, j.dump(2) + "\n");
    return kExitOk;
}

int cmdCatalog(const std::string& out) {
    json entries = json::array();
    for (const std::string& name : catalog::names())
        entries.push_back(manifoldToJson(catalog::byName(name, {})));
    json j;
    j["schema"] = kSchemaVersion;
    j["entries"] = std::move(entries);
    writeText(out, j.dump(2) + "\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rolling-manifold distributions and controllability tests"};
    app.require_subcommand(1);

    PairOptions repOpt;
    std::vector<std::string> tests;
    CLI::App* report =
        app.add_subcommand("report", "Controllability report as JSON");
    addPairOptions(report, repOpt);
    report->add_option("--tests", tests,
                       "Subset of tests to include (default all)")
        ->delimiter(',');

    PairOptions rollOpt;
    std::string curvePath;
    CLI::App* roll =
        app.add_subcommand("roll", "Roll along a base curve CSV");
    addPairOptions(roll, rollOpt);
    roll->add_option("--curve", curvePath, "Base curve CSV (t, x...)")
        ->required();

    PairOptions sweepOpt;
    std::string gridSpec;
    CLI::App* sweep =
        app.add_subcommand("sweep", "Verdict table over a configuration grid");
    addPairOptions(sweep, sweepOpt, false);
    sweep->add_option("--grid", gridSpec, "Grid spec var=lo:hi:count[,...]")
        ->required();

    PairOptions btOpt;
    CLI::App* bracket =
        app.add_subcommand("bracket-table", "Filtration dump as JSON");
    addPairOptions(bracket, btOpt);

    std::string catalogOut;
    CLI::App* cat =
        app.add_subcommand("catalog", "List built-in manifolds as JSON");
    cat->add_option("--out", catalogOut, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (report->parsed()) return cmdReport(repOpt, tests);
        if (roll->parsed()) return cmdRoll(rollOpt, curvePath);
        if (sweep->parsed()) return cmdSweep(sweepOpt, gridSpec);
        if (bracket->parsed()) return cmdBracketTable(btOpt);
        if (cat->parsed()) return cmdCatalog(catalogOut);
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const CompositionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}
