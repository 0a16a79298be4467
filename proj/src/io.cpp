#include "rollgeo/io.hpp"

#include <charconv>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "rollgeo/catalog.hpp"

namespace rollgeo {

using nlohmann::json;

namespace {

json vecToJson(const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Vec vecFromJson(const json& a) {
    Vec v(static_cast<int>(a.size()));
    for (int i = 0; i < v.size(); ++i) v[i] = a.at(i).get<double>();
    return v;
}

json matToJson(const Mat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat matFromJson(const json& rows) {
    const int n = static_cast<int>(rows.size());
    const int m = n ? static_cast<int>(rows.at(0).size()) : 0;
    Mat out(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) out(i, j) = rows.at(i).at(j).get<double>();
    return out;
}

}  // namespace

json manifoldToJson(const ChartManifold& M) {
    json j;
    j["name"] = M.name();
    j["dim"] = M.dim();
    j["params"] = M.params;
    j["complete"] = M.complete;
    j["locally_symmetric"] = M.locallySymmetric;
    j["flat"] = M.flat;
    return j;
}

ChartManifold manifoldFromJson(const json& j) {
    std::vector<double> params;
    if (j.contains("params")) params = j.at("params").get<std::vector<double>>();
    return catalog::byName(j.at("name").get<std::string>(), params);
}

std::pair<ChartManifold, ChartManifold> parsePair(const std::string& spec) {
    // "name(p1,p2,...)" with an optional parameter list, twice, separated
    // by a colon that is not inside parentheses.
    auto parseOne = [](const std::string& s) -> ChartManifold {
        auto open = s.find('(');
        if (open == std::string::npos)
            return catalog::byName(s, {});
        if (s.back() != ')')
            throw ArgumentError("malformed manifold spec '" + s + "'");
        std::string name = s.substr(0, open);
        std::string inner = s.substr(open + 1, s.size() - open - 2);
        std::vector<double> params;
        std::istringstream is(inner);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            if (tok.empty()) continue;
            params.push_back(std::stod(tok));
        }
        return catalog::byName(name, params);
    };
    int depth = 0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        char c = spec[i];
        if (c == '(') ++depth;
        else if (c == ')') --depth;
        else if (c == ':' && depth == 0)
            return {parseOne(spec.substr(0, i)), parseOne(spec.substr(i + 1))};
    }
    throw ArgumentError("pair spec '" + spec +
                        "' must be '<manifold>:<manifold>'");
}

json configurationToJson(const Configuration& q) {
    json j;
    j["x"] = vecToJson(q.x);
    j["xhat"] = vecToJson(q.xhat);
    j["Q"] = matToJson(q.Q);
    return j;
}

Configuration configurationFromJson(const json& j) {
    Configuration q;
    q.x = vecFromJson(j.at("x"));
    q.xhat = vecFromJson(j.at("xhat"));
    q.Q = matFromJson(j.at("Q"));
    return q;
}

json filtrationToJson(const Filtration& f) {
    json j;
    j["schema"] = kSchemaVersion;
    j["configuration"] = configurationToJson(f.at);
    j["dim_q"] = f.dimQ;
    j["ranks"] = f.ranks;
    j["step"] = f.step;
    j["bracket_generating"] = f.bracketGenerating;
    json levels = json::array();
    for (std::size_t k = 0; k < f.ranks.size(); ++k) {
        json level;
        level["depth"] = static_cast<int>(k + 1);
        level["rank"] = f.ranks[k];
        level["singular_values"] = f.spectra[k];
        level["words"] = f.words[k];
        levels.push_back(std::move(level));
    }
    j["levels"] = std::move(levels);
    return j;
}

json testResultToJson(const TestResult& t) {
    json j;
    j["name"] = t.name;
    j["outcome"] = outcomeName(t.outcome);
    j["value"] = t.value;
    j["detail"] = t.detail;
    return j;
}

json reportToJson(const ControllabilityReport& rep, const ChartManifold& M,
                  const ChartManifold& Mhat) {
    json j;
    j["schema"] = kSchemaVersion;
    j["seed"] = rep.seed;
    j["manifold"] = manifoldToJson(M);
    j["partner"] = manifoldToJson(Mhat);
    j["configuration"] = configurationToJson(rep.at);
    j["verdict"] = verdictName(rep.verdict);
    j["step"] = rep.step;
    j["ranks"] = rep.ranks;
    j["dim_q"] = rep.dimQ;

    json gap;
    gap["matrix"] = matToJson(rep.gap.matrix);
    gap["det"] = rep.gap.det;
    std::vector<double> sv(rep.gap.singularValues.data(),
                           rep.gap.singularValues.data() +
                               rep.gap.singularValues.size());
    gap["singular_values"] = sv;
    gap["rank"] = rep.gap.rank();
    j["curvature_gap"] = std::move(gap);

    json sec;
    sec["min"] = rep.sectional.lo;
    sec["max"] = rep.sectional.hi;
    sec["planes"] = rep.sectional.planes;
    sec["definite"] = rep.sectional.definite();
    j["sectional_gap"] = std::move(sec);

    json xi;
    xi["n"] = rep.xi.n;
    xi["rank_gap"] = rep.xi.rankGap;
    xi["rank_xi"] = rep.xi.rankXi;
    xi["bound"] = rep.xi.bound;
    j["xi_rank_bound"] = std::move(xi);

    json tests = json::array();
    for (const TestResult& t : rep.tests) tests.push_back(testResultToJson(t));
    j["tests"] = std::move(tests);

    j["promoted"] = rep.promoted;
    j["promotion"] = rep.promotion;
    return j;
}

std::string csvNumber(double v) {
    if (v == 0.0) return "0";  // normalize negative zero
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void writeRollingCsv(std::ostream& os, const RollingCurve& rc) {
    if (rc.configs.empty()) throw ArgumentError("empty rolling curve");
    const int n = static_cast<int>(rc.configs.front().x.size());
    os << "t";
    for (int i = 0; i < n; ++i) os << ",x" << i;
    for (int i = 0; i < n; ++i) os << ",xhat" << i;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) os << ",q" << i << j;
    os << "\n";
    for (std::size_t k = 0; k < rc.ts.size(); ++k) {
        const Configuration& q = rc.configs[k];
        os << csvNumber(rc.ts[k]);
        for (int i = 0; i < n; ++i) os << "," << csvNumber(q.x[i]);
        for (int i = 0; i < n; ++i) os << "," << csvNumber(q.xhat[i]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) os << "," << csvNumber(q.Q(i, j));
        os << "\n";
    }
}

BaseCurve readBaseCurveCsv(std::istream& is, int dim) {
    std::vector<double> ts;
    std::vector<Vec> xs;
    std::string line;
    bool first = true;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (first) {
            first = false;
            // Optional header row.
            char* end = nullptr;
            std::strtod(cells[0].c_str(), &end);
            if (end == cells[0].c_str()) continue;
        }
        if (static_cast<int>(cells.size()) < dim + 1)
            throw ArgumentError("curve CSV line " + std::to_string(lineno) +
                                ": expected t plus " + std::to_string(dim) +
                                " coordinates");
        ts.push_back(std::stod(cells[0]));
        Vec x(dim);
        for (int i = 0; i < dim; ++i) x[i] = std::stod(cells[i + 1]);
        xs.push_back(std::move(x));
    }
    if (ts.size() < 2)
        throw ArgumentError("curve CSV needs at least two samples");
    for (std::size_t k = 1; k < ts.size(); ++k)
        if (ts[k] <= ts[k - 1])
            throw ArgumentError("curve CSV times must be strictly increasing");

    // Central-difference node velocities for the Hermite interpolant.
    std::vector<Vec> vs(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) {
        std::size_t a = k == 0 ? 0 : k - 1;
        std::size_t b = k + 1 == ts.size() ? k : k + 1;
        vs[k] = (xs[b] - xs[a]) / (ts[b] - ts[a]);
    }
    return makeSampledCurve(std::move(ts), std::move(xs), std::move(vs));
}

}  // namespace rollgeo
