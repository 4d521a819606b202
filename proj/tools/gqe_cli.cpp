// Command-line driver; links only the C API.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "gqe.h"

namespace {

int die(const std::string& where) {
    std::cerr << "error: " << where << ": " << gqe_last_error() << "\n";
    return 2;
}

void write_or_print(const std::string& out, const char* text) {
    if (out.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream f(out, std::ios::binary);
        f << text;
        if (!f.good()) {
            std::cerr << "error: cannot write " << out << "\n";
            std::exit(2);
        }
        std::cout << "wrote " << out << "\n";
    }
}

std::string config_json(int q, int sigma, int m, const std::string& model, bool exhaustive,
                        uint64_t seed, int samples) {
    std::string j = "{";
    j += "\"q\":" + std::to_string(q);
    j += ",\"sigma\":" + std::to_string(sigma);
    j += ",\"m\":" + std::to_string(m);
    j += ",\"model\":\"" + model + "\"";
    j += exhaustive ? ",\"exhaustive\":true" : ",\"exhaustive\":false";
    j += ",\"seed\":" + std::to_string(seed);
    j += ",\"samples\":" + std::to_string(samples);
    j += "}";
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gqe - generalized quadrangle engine"};
    app.require_subcommand(1);

    int q = 9, sigma = 1, m = -1;
    uint64_t seed = 1;
    int samples = 50;
    bool exhaustive = false;
    std::string model = "kantor", out, suite;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--q", q, "field size q = p^h");
        c->add_option("--sigma", sigma, "Frobenius exponent for the Kantor-Knuth model");
        c->add_option("--m", m, "clan nonsquare override (-1 = canonical)");
        c->add_option("--seed", seed, "random seed for sampled checks");
        c->add_option("--out", out, "output path (default: stdout)");
    };

    auto* cbuild = app.add_subcommand("build", "construct a model and export it");
    add_common(cbuild);
    cbuild->add_option("--model", model, "kantor | parabolic | elliptic | tits");
    std::string sidecar_path;
    cbuild->add_option("--sidecar", sidecar_path, "write the model sidecar to this path");

    auto* cverify = app.add_subcommand("verify", "run a named verification suite");
    add_common(cverify);
    cverify->add_option("--suite", suite, "suite name (see --list)")->required();
    cverify->add_option("--model", model, "model for suites that take one");
    cverify->add_flag("--exhaustive", exhaustive, "force exhaustive pair scans");
    cverify->add_option("--samples", samples, "sample count for sampled suites");

    auto* clist = app.add_subcommand("list-suites", "print the available suite names");

    auto* cenum = app.add_subcommand("enumerate-subgqs", "census of order-q subquadrangles");
    add_common(cenum);

    auto* covoid = app.add_subcommand("ovoid-report", "census with special-line class sizes");
    add_common(covoid);

    auto* cdec = app.add_subcommand("decompose", "decompose a serialized cover");
    add_common(cdec);
    std::string pmap_path, lmap_path;
    cdec->add_option("--cover-points", pmap_path, "point map file (one image id per line)")
        ->required();
    cdec->add_option("--cover-lines", lmap_path, "line map file (one image id per line)")
        ->required();

    auto* cexp = app.add_subcommand("export", "build a model and write the canonical format");
    add_common(cexp);
    cexp->add_option("--model", model, "kantor | parabolic | elliptic | tits");

    auto* cimp = app.add_subcommand("import", "read a geometry file and validate it");
    std::string in_path;
    cimp->add_option("path", in_path, "geometry file")->required();
    cimp->add_flag("--exhaustive", exhaustive, "force exhaustive validation");

    CLI11_PARSE(app, argc, argv);

    if (clist->parsed()) {
        char* names = nullptr;
        if (gqe_suite_names(&names) != GQE_OK) return die("list-suites");
        std::cout << names << "\n";
        gqe_string_free(names);
        return 0;
    }
    if (cbuild->parsed() || cexp->parsed()) {
        gqe_geometry* g = nullptr;
        if (gqe_build(model.c_str(), q, sigma, m, &g) != GQE_OK) return die("build");
        int pts = 0, lns = 0;
        gqe_geometry_counts(g, &pts, &lns);
        std::string path = out.empty() ? model + "-" + std::to_string(q) + ".geom" : out;
        if (gqe_export_geometry(g, path.c_str()) != GQE_OK) return die("export");
        std::cout << "built " << model << " q=" << q << ": " << pts << " points, " << lns
                  << " lines -> " << path << "\n";
        if (!sidecar_path.empty() &&
            gqe_write_model_sidecar(model.c_str(), q, sigma, m, sidecar_path.c_str()) != GQE_OK)
            return die("sidecar");
        gqe_geometry_free(g);
        return 0;
    }
    if (cimp->parsed()) {
        gqe_geometry* g = nullptr;
        if (gqe_import_geometry(in_path.c_str(), &g) != GQE_OK) return die("import");
        int pts = 0, lns = 0, isgq = 0, s = 0, t = 0;
        gqe_geometry_counts(g, &pts, &lns);
        if (gqe_validate_gq(g, exhaustive ? 1 : 0, &isgq, &s, &t) != GQE_OK) return die("validate");
        std::cout << "imported " << pts << " points, " << lns << " lines; gq=" << isgq << " order ("
                  << s << "," << t << ")\n";
        gqe_geometry_free(g);
        return 0;
    }
    if (cverify->parsed()) {
        char* report = nullptr;
        int pass = 0;
        std::string cfg = config_json(q, sigma, m, model, exhaustive, seed, samples);
        if (gqe_run_suite(suite.c_str(), cfg.c_str(), &report, &pass) != GQE_OK)
            return die("verify");
        write_or_print(out, report);
        gqe_string_free(report);
        std::cout << (pass ? "PASS" : "FAIL") << " " << suite << "\n";
        return pass ? 0 : 1;
    }
    if (cenum->parsed() || covoid->parsed()) {
        char* report = nullptr;
        if (gqe_subgq_report(q, sigma, m, covoid->parsed() ? 1 : 0, &report) != GQE_OK)
            return die("census");
        write_or_print(out, report);
        gqe_string_free(report);
        return 0;
    }
    if (cdec->parsed()) {
        char* report = nullptr;
        if (gqe_decompose(q, sigma, m, pmap_path.c_str(), lmap_path.c_str(), &report) != GQE_OK)
            return die("decompose");
        write_or_print(out, report);
        gqe_string_free(report);
        return 0;
    }
    return 0;
}
