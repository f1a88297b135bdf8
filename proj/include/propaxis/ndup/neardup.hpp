#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "propaxis/img/features.hpp"
#include "propaxis/img/image.hpp"
#include "propaxis/ndup/assertions.hpp"
#include "propaxis/num/rng.hpp"

namespace propaxis::ndup {

/// Difference hash: the image is area-averaged to 9x8 (9 columns, 8 rows)
/// and bit i*8+j is set iff pixel(i, j) > pixel(i, j+1).
std::uint64_t dhash64(const img::RasterImage& image);
int hamming64(std::uint64_t a, std::uint64_t b);

/// Candidate-pair prefilter standing in for an external-embedding similarity
/// filter when no embedding vectors are available.
struct CandidateFilter {
    enum class Mode { None, PerceptualHash, ExternalEmbeddings };

    Mode mode = Mode::PerceptualHash;
    int hamming_threshold = 24;     // PerceptualHash, in [0, 64]
    double cosine_threshold = 0.85; // ExternalEmbeddings, in [-1, 1]
    // image_id -> embedding vector (ExternalEmbeddings); every corpus image
    // must have one.
    std::map<std::string, std::vector<double>> embeddings;

    static CandidateFilter none();
    static CandidateFilter perceptual_hash(int hamming_threshold);
    static CandidateFilter external(std::map<std::string, std::vector<double>> embeddings,
                                    double cosine_threshold);

    void validate() const;
};

/// Reads embeddings CSV: image_id, v0, v1, ... (one row per image).
std::map<std::string, std::vector<double>> load_embeddings_csv(const std::string& path);

struct CorpusImage {
    std::string id;
    img::RasterImage image;
};

/// Unordered unique candidate pairs (by corpus index, i < j) passing the
/// filter; mode None yields all C(n,2) pairs. A missing embedding vector is
/// an error naming the image id.
std::vector<std::pair<std::size_t, std::size_t>> candidate_pairs(
    std::span<const CorpusImage> corpus, const CandidateFilter& filter);

/// Mutual nearest neighbours under Hamming distance, accepted when the
/// distance is <= 64 and the Lowe ratio best/second-best is <= 0.8 on both
/// sides (ties broken toward the lower index, so matching is symmetric).
std::vector<std::pair<std::size_t, std::size_t>> match_descriptors(
    std::span<const img::BinaryDescriptor> da, std::span<const img::BinaryDescriptor> db);

struct AffineFit {
    double a11 = 1, a12 = 0, a21 = 0, a22 = 1;
    double tx = 0, ty = 0;
    std::size_t inliers = 0;
    double inlier_ratio = 0.0;

    std::pair<double, double> apply(double x, double y) const {
        return {a11 * x + a12 * y + tx, a21 * x + a22 * y + ty};
    }
    /// Singular values of the 2x2 linear part, descending.
    std::pair<double, double> singular_values() const;
    double det() const { return a11 * a22 - a12 * a21; }
};

struct PointMatch {
    double x1, y1; // source
    double x2, y2; // destination
};

/// RANSAC over 3-point minimal samples (collinear samples skipped), best
/// model by inlier count (reprojection error <= tol_px), least-squares refit
/// on the inliers, inliers recounted after the refit. Empty if fewer than 3
/// matches or no non-degenerate sample was found.
std::optional<AffineFit> ransac_affine(std::span<const PointMatch> matches, int iters,
                                       double tol_px, num::RngState& rng);

/// Accepts a fit as a plausible near-duplicate mapping: enough inliers and
/// inlier ratio, both singular values in [0.2, 5.0], positive determinant
/// (near-duplicate edits do not mirror).
bool plausible(const AffineFit& fit, std::size_t min_inliers, double min_ratio);

struct NearDupParams {
    int fast_threshold = 20;
    std::size_t max_kp = 500;
    int norm_max_side = 512;
    int ransac_iters = 1000;
    double tol_px = 3.0;
    std::size_t min_inliers = 15;
    double min_ratio = 0.2;
    CandidateFilter filter;
    std::uint64_t seed = 42;
    bool parallel = true; // OpenMP over candidate pairs; results are identical
};

struct VerifiedPair {
    std::string id_a;
    std::string id_b;
    AffineFit fit;
};

/// Feature extraction per image (normalize to norm_max_side, detect, drop
/// keypoints closer than 20 px to a border, describe), candidate filtering,
/// then per-pair verification. The per-pair RANSAC seed derives from
/// (seed, min(id), max(id)), so results are independent of execution order.
std::vector<VerifiedPair> verify_near_duplicates(std::span<const CorpusImage> corpus,
                                                 const NearDupParams& params);

/// Full corpus -> assertions pipeline (verify + connected components).
std::vector<VisualAssertion> find_assertions(std::span<const CorpusImage> corpus,
                                             const NearDupParams& params);

} // namespace propaxis::ndup
