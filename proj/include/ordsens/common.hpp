#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdlib>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ordsens {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;
using Index = Eigen::Index;

// ---------------------------------------------------------------------------
// Error taxonomy. The CLI maps these onto its exit-code contract.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidDimensionError : Error {
    using Error::Error;
};

struct DimensionMismatchError : Error {
    using Error::Error;
};

/// Input fails DensityMatrix/StateVector invariants (non-Hermitian, bad trace,
/// negative eigenvalue beyond the clip threshold, bad weights, ...).
struct ValidationError : Error {
    using Error::Error;
};

/// The requested state does not fit the truncated space at the required tail
/// tolerance; carries the smallest dimension that would.
struct TruncationError : Error {
    Index suggested_dim;
    TruncationError(const std::string& msg, Index suggested)
        : Error(msg + " (suggested dim >= " + std::to_string(suggested) + ")"),
          suggested_dim(suggested) {}
};

struct DegenerateCatError : Error {
    using Error::Error;
};

struct UnsupportedOrderingError : Error {
    using Error::Error;
};

/// chi-space integrand stops decaying before the grid boundary (s too large).
struct DivergenceError : Error {
    using Error::Error;
};

struct MassDeficitError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Deterministic reductions and threading helpers.
// ---------------------------------------------------------------------------

/// Pairwise summation; deterministic for a fixed element order and immune to
/// the worst linear error growth of naive accumulation.
double pairwise_sum(std::span<const double> v);

/// Number of worker threads: hardware concurrency capped by ORDSENS_THREADS.
int thread_count();

/// Runs fn(begin, end) over a partition of [0, n) on worker threads. Chunks
/// are contiguous and disjoint, so writes to per-index slots do not race and
/// results are identical to a sequential sweep.
void parallel_for(Index n, const std::function<void(Index, Index)>& fn);

}  // namespace ordsens
