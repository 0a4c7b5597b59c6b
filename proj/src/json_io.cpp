#include "chaoskit/json_io.hpp"

#include <cmath>
#include <sstream>

namespace ck {

namespace {

// shortest-roundtrip decimal for a double, shared by JSON and CSV output
std::string num(double v) { return json(v).dump(); }

void advance_or_end(std::vector<int>& idx, int d, bool& more) {
    for (int k = int(idx.size()) - 1; k >= 0; --k) {
        if (++idx[std::size_t(k)] < d) return;
        idx[std::size_t(k)] = 0;
    }
    more = false;
}

}  // namespace

json to_json(const SymTensor& f) {
    json entries = json::array();
    std::vector<int> idx(std::size_t(f.order()), 0);
    bool more = true;
    std::size_t flat = 0;
    while (more) {
        const double v = f[flat];
        if (v != 0.0) {
            json one;
            one["index"] = json::array();
            for (int k : idx) one["index"].push_back(k + 1);
            one["value"] = v;
            entries.push_back(std::move(one));
        }
        ++flat;
        if (f.order() == 0) break;
        advance_or_end(idx, f.dim(), more);
    }
    return json{{"dim", f.dim()}, {"order", f.order()}, {"entries", std::move(entries)}};
}

SymTensor tensor_from_json(const json& j) {
    const int dim = j.at("dim").get<int>();
    const int order = j.at("order").get<int>();
    if (dim < 1) throw std::invalid_argument("tensor JSON: dim must be >= 1");
    if (order < 0) throw std::invalid_argument("tensor JSON: order must be >= 0");
    RawTensor raw(dim, order);
    for (const json& one : j.at("entries")) {
        const auto& ji = one.at("index");
        if (int(ji.size()) != order)
            throw std::invalid_argument("tensor JSON: index length != order");
        std::vector<int> idx;
        for (const json& k : ji) {
            const int i = k.get<int>();
            if (i < 1 || i > dim) throw std::invalid_argument("tensor JSON: index out of range");
            idx.push_back(i - 1);
        }
        raw.at(idx) = one.at("value").get<double>();
    }
    return symmetrize(raw);
}

json to_json(const ChaosVector& F) {
    json kernels;
    kernels["0"] = F.constant();
    for (int p = 1; p <= F.max_order(); ++p)
        if (norm(F.kernel(p)) != 0.0) kernels[std::to_string(p)] = to_json(F.kernel(p));
    return json{{"dim", F.dim()}, {"kernels", std::move(kernels)}};
}

ChaosVector chaos_from_json(const json& j) {
    const int dim = j.at("dim").get<int>();
    ChaosVector F(dim, 0.0);
    for (const auto& [key, val] : j.at("kernels").items()) {
        const int p = std::stoi(key);
        if (p == 0) {
            F.set_constant(val.get<double>());
            continue;
        }
        SymTensor f = tensor_from_json(val);
        if (f.dim() != dim) throw std::invalid_argument("chaos JSON: kernel dim mismatch");
        if (f.order() != p) throw std::invalid_argument("chaos JSON: kernel order mismatch");
        F.set_kernel(p, std::move(f));
    }
    return F;
}

json to_json(const TargetSpec& X) {
    json cd = json::array();
    for (auto [c, d] : X.cd) cd.push_back(json::array({c, d}));
    return json{{"a", X.a}, {"b", X.b}, {"cd", std::move(cd)}};
}

TargetSpec target_from_json(const json& j) {
    TargetSpec X;
    X.a = j.value("a", 0.0);
    if (j.contains("b")) X.b = j.at("b").get<std::vector<double>>();
    if (j.contains("cd"))
        for (const json& p : j.at("cd")) {
            if (p.size() != 2) throw std::invalid_argument("target JSON: cd entries are [c, d]");
            X.cd.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
    X.validate();
    return X;
}

json to_json(const CorrelatedSpec& Y) {
    return json{{"a0", Y.a0}, {"lambda", Y.lambdas}, {"sigma", Y.sigmas}};
}

CorrelatedSpec correlated_from_json(const json& j) {
    CorrelatedSpec Y;
    Y.a0 = j.value("a0", 0.0);
    if (j.contains("lambda")) Y.lambdas = j.at("lambda").get<std::vector<double>>();
    if (j.contains("sigma")) Y.sigmas = j.at("sigma").get<std::vector<double>>();
    Y.validate();
    return Y;
}

json to_json(const ConvergenceReport& rep) {
    json out;
    out["poly_degree"] = rep.poly_degree;
    out["r_max"] = rep.r_max;
    out["n"] = json::array();
    out["kappa"] = json::array();
    out["kappa_target"] = json::array();
    out["kappa_gaps"] = json::array();
    out["combo_l2"] = json::array();
    bool any_conditional = false;
    for (const ConvergenceRow& row : rep.rows) {
        out["n"].push_back(row.n);
        out["kappa"].push_back(row.kappa_F);
        out["kappa_target"].push_back(row.kappa_X);
        out["kappa_gaps"].push_back(row.kappa_gaps);
        out["combo_l2"].push_back(row.combo_l2);
        any_conditional = any_conditional || row.conditional_l1.has_value();
    }
    if (any_conditional) {
        out["conditional_l1"] = json::array();
        for (const ConvergenceRow& row : rep.rows)
            out["conditional_l1"].push_back(row.conditional_l1 ? json(*row.conditional_l1)
                                                               : json());
    }
    out["kappa_slopes"] = rep.kappa_slopes;  // NaN serializes as null
    out["combo_slope"] = rep.combo_slope;
    out["contractions"] = json::object();
    out["verdict"] = rep.verdict;
    return out;
}

std::string to_csv(const ConvergenceReport& rep) {
    std::ostringstream os;
    os << "n,statistic,value\n";
    for (const ConvergenceRow& row : rep.rows) {
        const std::string n = num(row.n);
        for (std::size_t r = 0; r < row.kappa_gaps.size(); ++r)
            os << n << ",kappa_gap_" << (r + 1) << ',' << num(row.kappa_gaps[r]) << '\n';
        os << n << ",combo_l2," << num(row.combo_l2) << '\n';
        if (row.conditional_l1)
            os << n << ",conditional_l1," << num(*row.conditional_l1) << '\n';
    }
    for (std::size_t r = 0; r < rep.kappa_slopes.size(); ++r)
        if (std::isfinite(rep.kappa_slopes[r]))
            os << ",kappa_gap_" << (r + 1) << "_slope," << num(rep.kappa_slopes[r]) << '\n';
    if (std::isfinite(rep.combo_slope)) os << ",combo_l2_slope," << num(rep.combo_slope) << '\n';
    os << ",verdict," << rep.verdict << '\n';
    return os.str();
}

json to_json(const FeasibilityVerdict& v) {
    return json{{"excluded", v.excluded},
                {"failed_conditions", v.failed_conditions},
                {"blocks", v.blocks},
                {"beta", v.beta},
                {"gamma", v.gamma_counts},
                {"failing_blocks", v.failing_blocks},
                {"message", v.message}};
}

namespace {

json offhalf_json(const std::vector<std::pair<int, double>>& offhalf) {
    json out = json::array();
    for (auto [l, nrm] : offhalf) out.push_back(json{{"l", l}, {"norm", nrm}});
    return out;
}

}  // namespace

json to_json(const ContractionReport& rep) {
    return json{{"c_p", rep.c_p},
                {"kappa_gaps", rep.kappa_gaps},
                {"offhalf_norms", offhalf_json(rep.offhalf_norms)},
                {"combo_norm", rep.combo_norm},
                {"note", rep.note}};
}

json to_json(const ChiSquareReport& rep) {
    return json{{"c_p", rep.c_p},
                {"b2_statistic", rep.b2_statistic},
                {"combo_statistic", rep.combo_statistic},
                {"offhalf_norms", offhalf_json(rep.offhalf_norms)},
                {"kappa_gaps", rep.kappa_gaps},
                {"tol", rep.tol},
                {"sides_agree", rep.sides_agree}};
}

json to_json(const McEstimate& est) {
    return json{{"value", est.value}, {"se", est.se}, {"N", est.N}};
}

json to_json(const ConditionalL1& est) {
    return json{{"estimate", to_json(est.estimate)},
                {"bins", est.bins},
                {"binning_estimator", est.binning_estimator}};
}

json to_json(const std::vector<JointFunctionalRow>& rows) {
    json out = json::array();
    for (const JointFunctionalRow& r : rows) {
        out.push_back(json{{"t1", r.t1},
                           {"t2", r.t2},
                           {"pairing", json::array({r.pairing_mean.real(), r.pairing_mean.imag()})},
                           {"pairing_se", r.pairing_se},
                           {"weighted", json::array({r.weighted_mean.real(), r.weighted_mean.imag()})},
                           {"weighted_se", r.weighted_se}});
    }
    return out;
}

}  // namespace ck
