#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "iwf/core.hpp"

namespace iwf::testing {

/// Labels as plain bools, indexed [question][criterion].
using BoolRow = std::array<bool, kCriterionCount>;
using BoolMatrix = std::vector<BoolRow>;

/// Rows get ids "q0", "q1", ... in order.
LabelMatrix to_labels(const BoolMatrix& m, LabelSource source = LabelSource::kOther);

/// Reference metrics computed cell by cell, written without the library.
namespace oracle {

double match(const BoolMatrix& a, const BoolMatrix& b);
double hamming(const BoolMatrix& a, const BoolMatrix& b);
double exact(const BoolMatrix& a, const BoolMatrix& b);
std::optional<double> f1(const BoolMatrix& pred, const BoolMatrix& gold, std::size_t c);
std::optional<double> micro_f1(const BoolMatrix& pred, const BoolMatrix& gold);
/// po and pe from the 2x2 table; pe == 1 gives 1.
double kappa(const BoolMatrix& a, const BoolMatrix& b, std::size_t c);

double pearson_r(const std::vector<double>& x, const std::vector<double>& y);
double paired_t(const std::vector<double>& x, const std::vector<double>& y);
double chi_square(const std::vector<std::vector<double>>& table);

}  // namespace oracle

/// N in [1, 50], each cell set with a per-matrix density; b is a with a
/// random fraction of cells flipped.
struct MatrixPair {
  BoolMatrix a;
  BoolMatrix b;
};
MatrixPair random_pair(std::mt19937_64& rng);

/// Row with `count` flags spread over the criteria, varied by `seed`.
BoolRow row_with_count(int count, std::size_t seed);

/// 200 gold/pred rows with the flaw-count histograms
///   gold 0..6: 39 72 44 28 9 6 2
///   pred 0..6: 23 50 57 34 27 8 1
/// arranged so the verdict confusion (gold rows, pred columns) is
/// [[57, 54], [16, 73]]: 130 agreeing verdicts.
struct VerdictFixture {
  LabelMatrix gold{LabelSource::kHuman};
  LabelMatrix pred{LabelSource::kRules};
};
VerdictFixture verdict_fixture();

/// 100 questions where exactly 171 of the 1900 cells differ.
MatrixPair hamming_fixture();

}  // namespace iwf::testing
