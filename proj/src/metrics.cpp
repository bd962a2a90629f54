#include "sockspot/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "sockspot/errors.hpp"

namespace sockspot {

Confusion confusion(const std::vector<int8_t>& pred, const std::vector<int8_t>& truth) {
    if (pred.size() != truth.size())
        throw DataError("confusion: prediction/truth length mismatch");
    Confusion cm;
    for (size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] == 1)
            (truth[i] == 1 ? cm.tp : cm.fp)++;
        else
            (truth[i] == 1 ? cm.fn : cm.tn)++;
    }
    return cm;
}

Rates rates(const Confusion& cm) {
    Rates r;
    if (cm.tp + cm.fp > 0)
        r.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
    else
        r.precision_defined = false;
    if (cm.tp + cm.fn > 0)
        r.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    else
        r.recall_defined = false;
    if (2 * cm.tp + cm.fp + cm.fn > 0)
        r.f1 = static_cast<double>(2 * cm.tp) / static_cast<double>(2 * cm.tp + cm.fp + cm.fn);
    else
        r.f1_defined = false;
    if (cm.total() > 0) {
        r.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
        r.accuracy_tpfn_variant =
            static_cast<double>(cm.tp + cm.fn) / static_cast<double>(cm.total());
    }
    return r;
}

namespace {

// integer tie-grouped sweep; numerator is 2*sum over segments of
// fp_step*(tp_lo+tp_hi), so the value is exact
void sweep_counts(const std::vector<double>& scores, const std::vector<int8_t>& truth,
                  int64_t* pos_out, int64_t* neg_out, int64_t* num2_out,
                  std::vector<RocPoint>* points) {
    const size_t n = scores.size();
    if (n != truth.size())
        throw DataError("roc_auc: score/truth length mismatch");
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (scores[a] != scores[b])
            return scores[a] > scores[b];
        return a < b;
    });

    int64_t pos = 0, neg = 0;
    for (int8_t t : truth)
        (t == 1 ? pos : neg)++;
    if (pos == 0 || neg == 0)
        throw DataError("roc_auc: need at least one positive and one negative label");

    int64_t tp = 0, fp = 0, num2 = 0;
    size_t i = 0;
    while (i < n) {
        const double s = scores[order[i]];
        int64_t dtp = 0, dfp = 0;
        size_t j = i;
        while (j < n && scores[order[j]] == s) {
            (truth[order[j]] == 1 ? dtp : dfp)++;
            ++j;
        }
        num2 += dfp * (2 * tp + dtp);
        tp += dtp;
        fp += dfp;
        if (points)
            points->push_back({s, static_cast<double>(fp) / static_cast<double>(neg),
                               static_cast<double>(tp) / static_cast<double>(pos)});
        i = j;
    }
    *pos_out = pos;
    *neg_out = neg;
    *num2_out = num2;
}

std::string fmt(double v) {
    char buf[64];
    snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

double roc_auc(const std::vector<double>& scores, const std::vector<int8_t>& truth) {
    int64_t pos, neg, num2;
    sweep_counts(scores, truth, &pos, &neg, &num2, nullptr);
    return static_cast<double>(num2) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

std::vector<RocPoint> roc_points(const std::vector<double>& scores,
                                 const std::vector<int8_t>& truth) {
    std::vector<RocPoint> pts;
    int64_t pos, neg, num2;
    pts.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    sweep_counts(scores, truth, &pos, &neg, &num2, &pts);
    return pts;
}

EvalReport evaluate(const std::vector<double>& scores, const std::vector<int8_t>& pred,
                    const std::vector<int8_t>& truth) {
    if (scores.size() != pred.size() || pred.size() != truth.size())
        throw DataError("evaluate: input length mismatch");
    EvalReport rep;
    std::vector<double> s;
    std::vector<int8_t> p, t;
    for (size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] < 0) {
            ++rep.n_unknown;
            continue;
        }
        s.push_back(scores[i]);
        p.push_back(pred[i]);
        t.push_back(truth[i]);
    }
    rep.n_scored = static_cast<int64_t>(s.size());
    rep.cm = confusion(p, t);
    rep.r = rates(rep.cm);
    rep.auc = roc_auc(s, t);
    return rep;
}

std::string report_to_json(const EvalReport& rep) {
    nlohmann::json j;
    j["tp"] = rep.cm.tp;
    j["fp"] = rep.cm.fp;
    j["tn"] = rep.cm.tn;
    j["fn"] = rep.cm.fn;
    j["precision"] = rep.r.precision;
    j["recall"] = rep.r.recall;
    j["f1"] = rep.r.f1;
    j["accuracy"] = rep.r.accuracy;
    j["accuracy_tpfn_variant"] = rep.r.accuracy_tpfn_variant;
    j["auc"] = rep.auc;
    j["n_scored"] = rep.n_scored;
    j["n_unknown"] = rep.n_unknown;
    j["precision_defined"] = rep.r.precision_defined;
    j["recall_defined"] = rep.r.recall_defined;
    j["f1_defined"] = rep.r.f1_defined;
    return j.dump(2);
}

std::string report_csv_header() {
    return "tp,fp,tn,fn,precision,recall,f1,accuracy,auc,n_scored,n_unknown";
}

std::string report_csv_row(const EvalReport& rep) {
    std::ostringstream os;
    os << rep.cm.tp << ',' << rep.cm.fp << ',' << rep.cm.tn << ',' << rep.cm.fn << ','
       << fmt(rep.r.precision) << ',' << fmt(rep.r.recall) << ',' << fmt(rep.r.f1) << ','
       << fmt(rep.r.accuracy) << ',' << fmt(rep.auc) << ',' << rep.n_scored << ','
       << rep.n_unknown;
    return os.str();
}

} // namespace sockspot
