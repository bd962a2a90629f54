#include "sockspot/pair_ops.hpp"

#include <cmath>

#include "sockspot/errors.hpp"

namespace sockspot {

PairOp parse_pair_op(const std::string& name) {
    if (name == "average")
        return PairOp::Average;
    if (name == "l1")
        return PairOp::L1;
    if (name == "l2")
        return PairOp::L2;
    if (name == "cosine")
        return PairOp::Cosine;
    throw ConfigError("unknown pair operator '" + name + "' (average|l1|l2|cosine)");
}

std::string pair_op_name(PairOp op) {
    switch (op) {
    case PairOp::Average:
        return "average";
    case PairOp::L1:
        return "l1";
    case PairOp::L2:
        return "l2";
    case PairOp::Cosine:
        return "cosine";
    }
    return "?";
}

int pair_op_dim(PairOp op, int d) {
    return op == PairOp::Cosine ? 1 : d;
}

void apply_pair_op(PairOp op, const double* wu, const double* wv, int d, double* out) {
    switch (op) {
    case PairOp::Average:
        for (int i = 0; i < d; ++i)
            out[i] = 0.5 * (wu[i] + wv[i]);
        return;
    case PairOp::L1:
        for (int i = 0; i < d; ++i)
            out[i] = std::abs(wu[i] - wv[i]);
        return;
    case PairOp::L2:
        for (int i = 0; i < d; ++i) {
            const double diff = wu[i] - wv[i];
            out[i] = diff * diff;
        }
        return;
    case PairOp::Cosine: {
        double dot = 0.0, nu = 0.0, nv = 0.0;
        for (int i = 0; i < d; ++i) {
            dot += wu[i] * wv[i];
            nu += wu[i] * wu[i];
            nv += wv[i] * wv[i];
        }
        out[0] = (nu == 0.0 || nv == 0.0) ? 0.0 : dot / (std::sqrt(nu) * std::sqrt(nv));
        return;
    }
    }
}

} // namespace sockspot
