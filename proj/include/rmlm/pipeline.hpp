#pragma once

// End-to-end workflow: ingest, rank transform, order once, then coefficient
// estimation and thresholded DAGs over (delta, r) grids with centroid selection.

#include "rmlm/coefficients.hpp"
#include "rmlm/io.hpp"
#include "rmlm/matrix.hpp"
#include "rmlm/metrics.hpp"
#include "rmlm/order.hpp"
#include "rmlm/tropical.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmlm {

struct PipelineConfig {
    std::filesystem::path input;
    bool date_column = false;
    bool negate = false;  ///< X = max(-X*, 0)
    std::size_t k_order = 250;
    double a = kDefaultScale;
    double epsilon = kDefaultEpsilon;
    std::vector<std::size_t> k_bases{50, 60, 70, 80, 90};
    std::vector<std::size_t> k_offsets{0, 2, 4, 6, 8};
    std::vector<double> delta_grid{0.0, 0.025, 0.05, 0.1};
    std::uint64_t seed = 0;
    std::filesystem::path output_dir;

    /// Exceedance counts base + offset, in offset order.
    std::vector<std::size_t> grid(std::size_t base) const;
    /// Every r over all bases, base-major.
    std::vector<std::size_t> all_r() const;
    /// Throws std::invalid_argument on empty grids, a <= 1, epsilon < 0, negative
    /// deltas, or (when n > 0) any count outside [1, n].
    void check(std::size_t n = 0) const;
};

Json config_to_json(const PipelineConfig& config);
/// Fields absent from `j` keep the values already in `base`.
PipelineConfig config_from_json(const Json& j, PipelineConfig base = {});

/// Error raised by a named pipeline stage.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& message);
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// max(-x, 0) entrywise.
Matrix negate_clamp(const Matrix& x);

/// Reads config.input and applies the negate option.
CsvTable ingest(const PipelineConfig& config);

struct GridEstimate {
    std::size_t r = 0;
    MaxLinearMatrix A;
    PostprocessReport post;
};

struct CentroidCell {
    std::size_t delta_index = 0;
    std::size_t base = 0;
    std::size_t r = 0;            ///< centroid member
    double sum = 0.0;             ///< its sum of nSHD to the rest of the grid
    std::vector<double> sums;     ///< per grid member, in offset order
};

struct RunReport {
    PipelineConfig config;
    NameTable names;
    std::size_t n = 0;
    OrderResult order;
    std::vector<std::size_t> r_values;      ///< same sequence as config.all_r()
    std::vector<GridEstimate> estimates;    ///< one per r_values entry
    std::vector<std::vector<Dag>> dags;     ///< [delta index][r index]
    std::vector<CentroidCell> centroids;    ///< delta-major, then base
    std::size_t best = 0;                   ///< index into centroids
    StabilityScore stability;               ///< over the winning grid at the winning delta
    std::vector<std::filesystem::path> artifacts;

    std::size_t d() const { return names.size(); }
    const Dag& dag(std::size_t delta_index, std::size_t r) const;
    /// Best centroid cell for one delta (smallest sum, ties by smallest r).
    const CentroidCell& delta_centroid(std::size_t delta_index) const;
};

/// Stages order to stability on a sample that already has Fréchet(2) margins.
RunReport analyse(const Matrix& frechet_sample, NameTable names, const PipelineConfig& config);

/// Writes every artifact under `dir` and records the paths in `report`.
void write_artifacts(RunReport& report, const std::filesystem::path& dir);

/// Full run from config.input to config.output_dir. On failure a FAILED marker
/// holding the stage-tagged message is written and a StageError is thrown.
RunReport run_pipeline(const PipelineConfig& config);

/// The whole (delta, r) grid is contained in the next smaller delta's DAG.
bool delta_nested(const RunReport& report);

}  // namespace rmlm
