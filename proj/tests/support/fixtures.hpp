#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sockspot/activity.hpp"
#include "sockspot/kernels.hpp"
#include "sockspot/matrix.hpp"
#include "sockspot/rng.hpp"
#include "sockspot/truth.hpp"

namespace sockspot::testing {

kernels::Csr csr_from_dense(const Matrix& m);
Matrix dense_from_csr(const kernels::Csr& m);

// symmetric 0/1 adjacency with empty diagonal
Matrix random_symmetric_adjacency(int n, double density, Rng& rng);

// Activity fixture shaped like a small single-display-name dataset:
// 262 aggregated activities across 188 accounts, some users owning
// two or three accounts, with user_id carrying the planted truth.
std::vector<ActivityRecord> dataset1_fixture();

// small generated benchmark: synthetic users, election-style split
struct MiniBenchmark {
    std::vector<ActivityRecord> records; // split activities with user_id truth
    OwnershipMap ownership;
};
MiniBenchmark mini_benchmark(uint64_t seed = 7);

class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

} // namespace sockspot::testing
