#pragma once

#include <string>

#include "sockspot/skipgram.hpp"

namespace sockspot {

// Pairwise operators turning two node vectors into one pair feature.
enum class PairOp { Average, L1, L2, Cosine };

PairOp parse_pair_op(const std::string& name); // average|l1|l2|cosine
std::string pair_op_name(PairOp op);

// feature length: d for average/l1/l2, 1 for cosine
int pair_op_dim(PairOp op, int d);

// out must hold pair_op_dim(op, d) doubles. Cosine of a zero vector is 0.
void apply_pair_op(PairOp op, const double* wu, const double* wv, int d, double* out);

} // namespace sockspot
