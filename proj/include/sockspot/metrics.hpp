#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sockspot {

struct Confusion {
    int64_t tp = 0, fp = 0, tn = 0, fn = 0;
    int64_t total() const { return tp + fp + tn + fn; }
};

// predictions and truth in {0,1}, equal lengths
Confusion confusion(const std::vector<int8_t>& pred, const std::vector<int8_t>& truth);

struct Rates {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    // same total but tp+fn in the numerator; kept alongside for auditability
    double accuracy_tpfn_variant = 0.0;
    bool precision_defined = true;
    bool recall_defined = true;
    bool f1_defined = true;
};

Rates rates(const Confusion& cm);

// Area under the ROC curve by trapezoidal integration over the full
// threshold sweep, with tie groups collapsed to single segments; this equals
// the rank (Mann–Whitney) value exactly. Throws DataError when truth has a
// single class.
double roc_auc(const std::vector<double>& scores, const std::vector<int8_t>& truth);

struct RocPoint {
    double threshold;
    double fpr;
    double tpr;
};

std::vector<RocPoint> roc_points(const std::vector<double>& scores,
                                 const std::vector<int8_t>& truth);

struct EvalReport {
    Confusion cm;
    Rates r;
    double auc = 0.0;
    int64_t n_scored = 0;
    int64_t n_unknown = 0; // pairs left out for lack of ground truth
};

// truth entries may be -1 (unknown); those pairs are excluded and counted.
EvalReport evaluate(const std::vector<double>& scores, const std::vector<int8_t>& pred,
                    const std::vector<int8_t>& truth);

std::string report_to_json(const EvalReport& rep);
std::string report_csv_header();
std::string report_csv_row(const EvalReport& rep);

} // namespace sockspot
