#include "chaoskit.h"

#include <cstring>
#include <new>
#include <string>

#include "chaoskit/chaos.hpp"
#include "chaoskit/runner.hpp"

struct ck_chaos {
    ck::ChaosVector value;
};

struct ck_target {
    ck::TargetSpec value;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// run fn, translating exceptions into status codes + the thread-local message
template <class Fn>
ck_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        return fn();
    } catch (const ck::json::exception& e) {
        g_last_error = e.what();
        return CK_ERR_PARSE;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return CK_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CK_ERR_INTERNAL;
    }
}

ck_status run_command(ck::RunResult (*runner)(const ck::json&), const char* runspec_json,
                      char** out) {
    return guarded([&]() -> ck_status {
        if (!runspec_json || !out) {
            g_last_error = "null argument";
            return CK_ERR_INVALID_ARGUMENT;
        }
        const ck::json rs = ck::json::parse(runspec_json);
        const ck::RunResult res = runner(rs);
        ck::json envelope{{"exit_code", res.exit_code}, {"report", res.report}};
        if (!res.csv.empty()) envelope["csv"] = res.csv;
        *out = dup_string(envelope.dump(2));
        return *out ? CK_OK : CK_ERR_INTERNAL;
    });
}

}  // namespace

extern "C" {

const char* ck_version(void) { return ck::kVersion; }

const char* ck_last_error(void) { return g_last_error.c_str(); }

void ck_string_free(char* s) { delete[] s; }

ck_status ck_chaos_parse(const char* json, ck_chaos** out) {
    return guarded([&]() -> ck_status {
        if (!json || !out) {
            g_last_error = "null argument";
            return CK_ERR_INVALID_ARGUMENT;
        }
        *out = new ck_chaos{ck::chaos_from_json(ck::json::parse(json))};
        return CK_OK;
    });
}

ck_status ck_target_parse(const char* json, ck_target** out) {
    return guarded([&]() -> ck_status {
        if (!json || !out) {
            g_last_error = "null argument";
            return CK_ERR_INVALID_ARGUMENT;
        }
        *out = new ck_target{ck::target_from_json(ck::json::parse(json))};
        return CK_OK;
    });
}

void ck_chaos_free(ck_chaos* f) { delete f; }
void ck_target_free(ck_target* x) { delete x; }

ck_status ck_chaos_mean(const ck_chaos* f, double* out) {
    return guarded([&]() -> ck_status {
        if (!f || !out) {
            g_last_error = "null argument";
            return CK_ERR_INVALID_ARGUMENT;
        }
        *out = ck::mean(f->value);
        return CK_OK;
    });
}

ck_status ck_chaos_variance(const ck_chaos* f, double* out) {
    return guarded([&]() -> ck_status {
        if (!f || !out) {
            g_last_error = "null argument";
            return CK_ERR_INVALID_ARGUMENT;
        }
        *out = ck::variance(f->value);
        return CK_OK;
    });
}

ck_status ck_chaos_cumulant(const ck_chaos* f, int r, double* out) {
    return guarded([&]() -> ck_status {
        if (!f || !out) {
            g_last_error = "null argument";
            return CK_ERR_INVALID_ARGUMENT;
        }
        *out = ck::cumulant(f->value, r);
        return CK_OK;
    });
}

ck_status ck_target_cumulant(const ck_target* x, int r, double* out) {
    return guarded([&]() -> ck_status {
        if (!x || !out) {
            g_last_error = "null argument";
            return CK_ERR_INVALID_ARGUMENT;
        }
        *out = ck::target_cumulant(x->value, r);
        return CK_OK;
    });
}

ck_status ck_target_cf(const ck_target* x, double t, double* out_re, double* out_im) {
    return guarded([&]() -> ck_status {
        if (!x || !out_re || !out_im) {
            g_last_error = "null argument";
            return CK_ERR_INVALID_ARGUMENT;
        }
        const auto v = ck::target_cf(x->value, t);
        *out_re = v.real();
        *out_im = v.imag();
        return CK_OK;
    });
}

ck_status ck_target_to_chaos(const ck_target* x, int dim, ck_chaos** out) {
    return guarded([&]() -> ck_status {
        if (!x || !out) {
            g_last_error = "null argument";
            return CK_ERR_INVALID_ARGUMENT;
        }
        *out = new ck_chaos{ck::to_chaos(x->value, ck::SpaceDim(dim))};
        return CK_OK;
    });
}

ck_status ck_chaos_to_json(const ck_chaos* f, char** out) {
    return guarded([&]() -> ck_status {
        if (!f || !out) {
            g_last_error = "null argument";
            return CK_ERR_INVALID_ARGUMENT;
        }
        *out = dup_string(ck::to_json(f->value).dump(2));
        return *out ? CK_OK : CK_ERR_INTERNAL;
    });
}

ck_status ck_target_to_json(const ck_target* x, char** out) {
    return guarded([&]() -> ck_status {
        if (!x || !out) {
            g_last_error = "null argument";
            return CK_ERR_INVALID_ARGUMENT;
        }
        *out = dup_string(ck::to_json(x->value).dump(2));
        return *out ? CK_OK : CK_ERR_INTERNAL;
    });
}

ck_status ck_run_check(const char* runspec_json, char** out) {
    return run_command(&ck::run_check, runspec_json, out);
}

ck_status ck_run_canonicalize(const char* runspec_json, char** out) {
    return run_command(&ck::run_canonicalize, runspec_json, out);
}

ck_status ck_run_feasibility(const char* runspec_json, char** out) {
    return run_command(&ck::run_feasibility, runspec_json, out);
}

ck_status ck_run_simulate(const char* runspec_json, char** out) {
    return run_command(&ck::run_simulate, runspec_json, out);
}

ck_status ck_run_selftest(const char* runspec_json, char** out) {
    return run_command(&ck::run_selftest, runspec_json, out);
}

}  // extern "C"
