#include "gqe.h"

#include <cstring>

#include "json.hpp"

#include "gqe/io.hpp"
#include "gqe/suites.hpp"

using nlohmann::json;

struct gqe_geometry {
    gqe::Geometry g;
};

namespace {

thread_local std::string t_last_error;

int set_error(int code, const std::string& msg) {
    t_last_error = msg;
    return code;
}

char* dup_string(const std::string& s) {
    char* out = (char*)std::malloc(s.size() + 1);
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

bool parse_q(int q, gqe::SuiteConfig& cfg) {
    return gqe::factor_prime_power(q, cfg.p, cfg.h);
}

template <class F>
int guarded(F&& f) {
    try {
        return f();
    } catch (const std::exception& ex) {
        return set_error(GQE_ERR_RUNTIME, ex.what());
    } catch (...) {
        return set_error(GQE_ERR_RUNTIME, "unknown error");
    }
}

}  // namespace

extern "C" {

const char* gqe_last_error(void) { return t_last_error.c_str(); }

int gqe_build(const char* model, int q, int sigma, int m_override, gqe_geometry** out) {
    if (!model || !out) return set_error(GQE_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        gqe::SuiteConfig cfg;
        cfg.model = model;
        cfg.sigma = sigma;
        cfg.m = m_override;
        if (!parse_q(q, cfg)) return set_error(GQE_ERR_INVALID_ARGUMENT, "q is not a prime power");
        std::map<std::string, std::string> sidecar;
        const gqe::Geometry& g = gqe::build_model(cfg, sidecar);
        *out = new gqe_geometry{g};
        return GQE_OK;
    });
}

void gqe_geometry_free(gqe_geometry* g) { delete g; }

int gqe_geometry_counts(const gqe_geometry* g, int* points, int* lines) {
    if (!g) return set_error(GQE_ERR_INVALID_ARGUMENT, "null geometry");
    if (points) *points = g->g.points();
    if (lines) *lines = g->g.lines();
    return GQE_OK;
}

int gqe_validate_gq(const gqe_geometry* g, int exhaustive, int* is_gq, int* s, int* t) {
    if (!g) return set_error(GQE_ERR_INVALID_ARGUMENT, "null geometry");
    return guarded([&] {
        gqe::ValidateOpts vo;
        vo.force_exhaustive = exhaustive != 0;
        if (!exhaustive) vo.exhaustive_pair_limit = 0;
        auto rep = gqe::validate_gq(g->g, vo);
        if (is_gq) *is_gq = rep.is_gq ? 1 : 0;
        if (s) *s = rep.s;
        if (t) *t = rep.t;
        return GQE_OK;
    });
}

int gqe_export_geometry(const gqe_geometry* g, const char* path) {
    if (!g || !path) return set_error(GQE_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        gqe::export_geometry(g->g, path);
        return GQE_OK;
    });
}

int gqe_import_geometry(const char* path, gqe_geometry** out) {
    if (!path || !out) return set_error(GQE_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new gqe_geometry{gqe::import_geometry(path)};
        return GQE_OK;
    });
}

int gqe_write_model_sidecar(const char* model, int q, int sigma, int m_override,
                            const char* path) {
    if (!model || !path) return set_error(GQE_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        gqe::SuiteConfig cfg;
        cfg.model = model;
        cfg.sigma = sigma;
        cfg.m = m_override;
        if (!parse_q(q, cfg)) return set_error(GQE_ERR_INVALID_ARGUMENT, "q is not a prime power");
        std::map<std::string, std::string> sidecar;
        gqe::build_model(cfg, sidecar);
        gqe::write_model_file(path, sidecar);
        return GQE_OK;
    });
}

int gqe_run_suite(const char* suite, const char* config_json, char** report_out, int* pass_out) {
    if (!suite || !report_out) return set_error(GQE_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        gqe::SuiteConfig cfg;
        cfg.suite = suite;
        if (config_json && *config_json) {
            json j = json::parse(config_json);
            if (j.contains("model")) cfg.model = j["model"].get<std::string>();
            if (j.contains("q")) {
                if (!parse_q(j["q"].get<int>(), cfg))
                    return set_error(GQE_ERR_INVALID_ARGUMENT, "q is not a prime power");
            }
            if (j.contains("p")) cfg.p = j["p"].get<int>();
            if (j.contains("h")) cfg.h = j["h"].get<int>();
            if (j.contains("sigma")) cfg.sigma = j["sigma"].get<int>();
            if (j.contains("m")) cfg.m = j["m"].get<int>();
            if (j.contains("exhaustive")) cfg.exhaustive = j["exhaustive"].get<bool>();
            if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
            if (j.contains("samples")) cfg.samples = j["samples"].get<int>();
        }
        auto outcome = gqe::run_suite(cfg);
        *report_out = dup_string(outcome.report_json);
        if (pass_out) *pass_out = outcome.pass ? 1 : 0;
        return GQE_OK;
    });
}

int gqe_suite_names(char** names_json_out) {
    if (!names_json_out) return set_error(GQE_ERR_INVALID_ARGUMENT, "null argument");
    json j = gqe::suite_names();
    *names_json_out = dup_string(j.dump());
    return GQE_OK;
}

int gqe_decompose(int q, int sigma, int m_override, const char* point_map_path,
                  const char* line_map_path, char** report_out) {
    if (!point_map_path || !line_map_path || !report_out)
        return set_error(GQE_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        gqe::SuiteConfig cfg;
        cfg.sigma = sigma;
        cfg.m = m_override;
        if (!parse_q(q, cfg)) return set_error(GQE_ERR_INVALID_ARGUMENT, "q is not a prime power");
        *report_out = dup_string(gqe::run_decompose(cfg, point_map_path, line_map_path));
        return GQE_OK;
    });
}

int gqe_subgq_report(int q, int sigma, int m_override, int with_special_lines,
                     char** report_out) {
    if (!report_out) return set_error(GQE_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        gqe::SuiteConfig cfg;
        cfg.sigma = sigma;
        cfg.m = m_override;
        if (!parse_q(q, cfg)) return set_error(GQE_ERR_INVALID_ARGUMENT, "q is not a prime power");
        *report_out = dup_string(gqe::run_subgq_report(cfg, with_special_lines != 0));
        return GQE_OK;
    });
}

void gqe_string_free(char* s) { std::free(s); }

}  // extern "C"
