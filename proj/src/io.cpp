#include "detnet/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "detnet/errors.hpp"

namespace detnet {

namespace {

[[noreturn]] void fail(const std::string& name, int line, const std::string& msg) {
    throw ValidationError(name + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& tok, const std::string& name, int line) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        fail(name, line, "expected a number, got '" + tok + "'");
    return v;
}

long long to_int(const std::string& tok, const std::string& name, int line) {
    long long v = 0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        fail(name, line, "expected an integer, got '" + tok + "'");
    return v;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

NetworkFile parse_network(std::istream& in, const std::string& name) {
    int n = 0;
    bool have_n = false;
    std::vector<std::pair<int, int>> edges;
    std::optional<WgnModel> wgn;
    std::optional<CorrelatedModel> corr;
    std::optional<double> prior1;
    std::optional<CostMatrix> cost;

    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(std::move(t));
        if (tok.empty()) continue;

        const std::string& kw = tok[0];
        if (kw == "n") {
            if (have_n) fail(name, line, "duplicate 'n' directive");
            if (tok.size() != 2) fail(name, line, "usage: n <count>");
            const long long v = to_int(tok[1], name, line);
            if (v < 1 || v > 1000000) fail(name, line, "node count out of range");
            n = static_cast<int>(v);
            have_n = true;
        } else if (kw == "edge") {
            if (!have_n) fail(name, line, "'edge' before 'n'");
            if (tok.size() != 3) fail(name, line, "usage: edge <from> <to>");
            const long long f = to_int(tok[1], name, line);
            const long long t = to_int(tok[2], name, line);
            if (f < 1 || f > n || t < 1 || t > n)
                fail(name, line, "edge endpoint out of range 1.." + std::to_string(n));
            if (f == 1)
                fail(name, line,
                     "fusion-center violation: node 1 must be a sink but has an outgoing arrow");
            edges.emplace_back(static_cast<int>(f), static_cast<int>(t));
        } else if (kw == "model") {
            if (wgn || corr) fail(name, line, "duplicate 'model' directive");
            if (tok.size() < 2) fail(name, line, "usage: model wgn|corr ...");
            if (tok[1] == "wgn") {
                if (!have_n) fail(name, line, "'model' before 'n'");
                if (tok.size() < 3 || tok[2] != "sigma")
                    fail(name, line, "usage: model wgn sigma <s1> ... <sn>");
                if (static_cast<int>(tok.size()) != 3 + n)
                    fail(name, line, "expected " + std::to_string(n) + " noise levels");
                std::vector<double> s;
                for (int i = 0; i < n; ++i) s.push_back(to_double(tok[3 + i], name, line));
                try {
                    wgn = n_sensor_wgn(s);
                } catch (const ValidationError& e) {
                    fail(name, line, e.what());
                }
            } else if (tok[1] == "corr") {
                const char* usage = "usage: model corr mu <m> sigs2 <v> tau <t> lam <l>";
                if (tok.size() != 10 || tok[2] != "mu" || tok[4] != "sigs2" || tok[6] != "tau" ||
                    tok[8] != "lam")
                    fail(name, line, usage);
                try {
                    corr = CorrelatedModel(to_double(tok[3], name, line),
                                           to_double(tok[5], name, line),
                                           to_double(tok[7], name, line),
                                           to_double(tok[9], name, line));
                } catch (const ValidationError& e) {
                    fail(name, line, e.what());
                }
            } else {
                fail(name, line, "unknown model kind '" + tok[1] + "'");
            }
        } else if (kw == "prior") {
            if (prior1) fail(name, line, "duplicate 'prior' directive");
            if (tok.size() != 2) fail(name, line, "usage: prior <pi1>");
            const double p = to_double(tok[1], name, line);
            if (!(p > 0.0) || !(p < 1.0)) fail(name, line, "prior must lie strictly in (0,1)");
            prior1 = p;
        } else if (kw == "cost") {
            if (cost) fail(name, line, "duplicate 'cost' directive");
            if (tok.size() != 5) fail(name, line, "usage: cost <C00> <C01> <C10> <C11>");
            try {
                cost = CostMatrix(to_double(tok[1], name, line), to_double(tok[2], name, line),
                                  to_double(tok[3], name, line), to_double(tok[4], name, line));
            } catch (const ValidationError& e) {
                fail(name, line, e.what());
            }
        } else {
            fail(name, line, "unknown directive '" + kw + "'");
        }
    }
    if (!have_n) throw ValidationError(name + ": missing 'n' directive");

    try {
        NetworkFile nf{dag_from_edges(n, edges), std::move(wgn), std::move(corr), prior1, cost};
        return nf;
    } catch (const CyclicGraphError& e) {
        throw CyclicGraphError(name + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(name + ": " + e.what());
    }
}

NetworkFile load_network_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError(path + ": cannot open file");
    return parse_network(f, path);
}

std::string serialize_network(const NetworkFile& nf) {
    std::ostringstream out;
    out << "n " << nf.dag.n() << "\n";
    for (const auto& [f, t] : nf.dag.edges()) out << "edge " << f << " " << t << "\n";
    if (nf.wgn) {
        out << "model wgn sigma";
        for (double s : nf.wgn->sigma) out << " " << fmt(s);
        out << "\n";
    }
    if (nf.corr)
        out << "model corr mu " << fmt(nf.corr->mu) << " sigs2 " << fmt(nf.corr->sigma_s2)
            << " tau " << fmt(nf.corr->tau) << " lam " << fmt(nf.corr->lam) << "\n";
    if (nf.prior1) out << "prior " << fmt(*nf.prior1) << "\n";
    if (nf.cost)
        out << "cost " << fmt(nf.cost->c00) << " " << fmt(nf.cost->c01) << " "
            << fmt(nf.cost->c10) << " " << fmt(nf.cost->c11) << "\n";
    return out.str();
}

}  // namespace detnet
