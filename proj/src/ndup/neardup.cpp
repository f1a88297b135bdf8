#include "propaxis/ndup/neardup.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "propaxis/common/error.hpp"

namespace propaxis::ndup {

std::uint64_t dhash64(const img::RasterImage& image) {
    const img::RasterImage small = img::resize_area(image, 9, 8);
    std::uint64_t h = 0;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            if (small.at(j, i) > small.at(j + 1, i)) h |= std::uint64_t{1} << (i * 8 + j);
    return h;
}

int hamming64(std::uint64_t a, std::uint64_t b) { return std::popcount(a ^ b); }

CandidateFilter CandidateFilter::none() {
    CandidateFilter f;
    f.mode = Mode::None;
    return f;
}

CandidateFilter CandidateFilter::perceptual_hash(int hamming_threshold) {
    CandidateFilter f;
    f.mode = Mode::PerceptualHash;
    f.hamming_threshold = hamming_threshold;
    f.validate();
    return f;
}

CandidateFilter CandidateFilter::external(std::map<std::string, std::vector<double>> embeddings,
                                          double cosine_threshold) {
    CandidateFilter f;
    f.mode = Mode::ExternalEmbeddings;
    f.embeddings = std::move(embeddings);
    f.cosine_threshold = cosine_threshold;
    f.validate();
    return f;
}

void CandidateFilter::validate() const {
    if (hamming_threshold < 0 || hamming_threshold > 64)
        raise(ErrorKind::Domain, "candidate filter: hamming_threshold outside [0, 64]");
    if (cosine_threshold < -1.0 || cosine_threshold > 1.0)
        raise(ErrorKind::Domain, "candidate filter: cosine_threshold outside [-1, 1]");
}

std::map<std::string, std::vector<double>> load_embeddings_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) raise(ErrorKind::Io, "cannot read " + path);
    std::map<std::string, std::vector<double>> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        if (!std::getline(row, cell, ','))
            raise(ErrorKind::Malformed, path + ": empty row at line " + std::to_string(lineno));
        std::vector<double> v;
        while (std::getline(row, cell, ',')) {
            try {
                v.push_back(std::stod(cell));
            } catch (const std::exception&) {
                raise(ErrorKind::Malformed,
                      path + ": non-numeric component at line " + std::to_string(lineno));
            }
        }
        if (v.empty())
            raise(ErrorKind::Malformed,
                  path + ": row without vector components at line " + std::to_string(lineno));
        out[line.substr(0, line.find(','))] = std::move(v);
    }
    return out;
}

namespace {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        raise(ErrorKind::Shape, "embedding vectors have different dimensions");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    const double denom = std::sqrt(na) * std::sqrt(nb);
    return denom > 0.0 ? dot / denom : 0.0;
}

} // namespace

std::vector<std::pair<std::size_t, std::size_t>> candidate_pairs(
    std::span<const CorpusImage> corpus, const CandidateFilter& filter) {
    filter.validate();
    const std::size_t n = corpus.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    if (filter.mode == CandidateFilter::Mode::ExternalEmbeddings) {
        std::vector<const std::vector<double>*> vecs(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto it = filter.embeddings.find(corpus[i].id);
            if (it == filter.embeddings.end())
                raise(ErrorKind::Data,
                      "candidate_pairs: no embedding vector for image '" + corpus[i].id + "'");
            vecs[i] = &it->second;
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (cosine(*vecs[i], *vecs[j]) >= filter.cosine_threshold) pairs.emplace_back(i, j);
        return pairs;
    }

    if (filter.mode == CandidateFilter::Mode::PerceptualHash) {
        std::vector<std::uint64_t> hashes(n);
        for (std::size_t i = 0; i < n; ++i) hashes[i] = dhash64(corpus[i].image);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (hamming64(hashes[i], hashes[j]) <= filter.hamming_threshold)
                    pairs.emplace_back(i, j);
        return pairs;
    }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    return pairs;
}

std::vector<std::pair<std::size_t, std::size_t>> match_descriptors(
    std::span<const img::BinaryDescriptor> da, std::span<const img::BinaryDescriptor> db) {
    constexpr int kMaxDistance = 64;
    constexpr double kLoweRatio = 0.8;
    if (da.empty() || db.empty()) return {};

    struct Best {
        int best = img::BinaryDescriptor::kBits + 1;
        int second = img::BinaryDescriptor::kBits + 1;
        std::size_t arg = 0;

        void offer(int d, std::size_t j) {
            if (d < best) {
                second = best;
                best = d;
                arg = j;
            } else if (d < second) {
                second = d;
            }
        }
        bool accept() const {
            return best <= kMaxDistance &&
                   static_cast<double>(best) <= kLoweRatio * static_cast<double>(second);
        }
    };

    std::vector<Best> fwd(da.size()), rev(db.size());
    for (std::size_t i = 0; i < da.size(); ++i)
        for (std::size_t j = 0; j < db.size(); ++j) {
            const int d = img::hamming(da[i], db[j]);
            fwd[i].offer(d, j);
            rev[j].offer(d, i);
        }

    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < da.size(); ++i) {
        const std::size_t j = fwd[i].arg;
        if (rev[j].arg == i && fwd[i].accept() && rev[j].accept()) out.emplace_back(i, j);
    }
    return out;
}

std::pair<double, double> AffineFit::singular_values() const {
    // Eigenvalues of A^T A in closed form.
    const double txx = a11 * a11 + a21 * a21;
    const double tyy = a12 * a12 + a22 * a22;
    const double txy = a11 * a12 + a21 * a22;
    const double tr = txx + tyy;
    const double disc = std::sqrt(std::max(0.0, (txx - tyy) * (txx - tyy) + 4.0 * txy * txy));
    const double hi = std::sqrt(std::max(0.0, (tr + disc) / 2.0));
    const double lo = std::sqrt(std::max(0.0, (tr - disc) / 2.0));
    return {hi, lo};
}

namespace {

bool collinear(double x1, double y1, double x2, double y2, double x3, double y3) {
    const double area2 = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1);
    return std::fabs(area2) < 1e-9;
}

// Exact affine from three correspondences; false if source is degenerate.
bool solve_affine3(const PointMatch& m0, const PointMatch& m1, const PointMatch& m2,
                   AffineFit& fit) {
    const double det = (m1.x1 - m0.x1) * (m2.y1 - m0.y1) - (m2.x1 - m0.x1) * (m1.y1 - m0.y1);
    if (std::fabs(det) < 1e-9) return false;
    // Solve [dx1 dx2; dy1 dy2] * A^T = [du1 du2; dv1 dv2] via Cramer.
    const double dx1 = m1.x1 - m0.x1, dy1 = m1.y1 - m0.y1;
    const double dx2 = m2.x1 - m0.x1, dy2 = m2.y1 - m0.y1;
    const double du1 = m1.x2 - m0.x2, dv1 = m1.y2 - m0.y2;
    const double du2 = m2.x2 - m0.x2, dv2 = m2.y2 - m0.y2;
    fit.a11 = (du1 * dy2 - du2 * dy1) / det;
    fit.a12 = (du2 * dx1 - du1 * dx2) / det;
    fit.a21 = (dv1 * dy2 - dv2 * dy1) / det;
    fit.a22 = (dv2 * dx1 - dv1 * dx2) / det;
    fit.tx = m0.x2 - fit.a11 * m0.x1 - fit.a12 * m0.y1;
    fit.ty = m0.y2 - fit.a21 * m0.x1 - fit.a22 * m0.y1;
    return true;
}

std::size_t count_inliers(std::span<const PointMatch> matches, const AffineFit& fit,
                          double tol_px, std::vector<std::size_t>* indices) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < matches.size(); ++i) {
        const auto [px, py] = fit.apply(matches[i].x1, matches[i].y1);
        const double dx = px - matches[i].x2, dy = py - matches[i].y2;
        if (std::sqrt(dx * dx + dy * dy) <= tol_px) {
            ++count;
            if (indices) indices->push_back(i);
        }
    }
    return count;
}

// Least squares over the inlier set (two independent 3x3 normal systems).
bool refit_affine(std::span<const PointMatch> matches, std::span<const std::size_t> inliers,
                  AffineFit& fit) {
    double sxx = 0, sxy = 0, syy = 0, sx = 0, sy = 0, n = 0;
    double bux = 0, buy = 0, bu = 0, bvx = 0, bvy = 0, bv = 0;
    for (std::size_t idx : inliers) {
        const PointMatch& m = matches[idx];
        sxx += m.x1 * m.x1;
        sxy += m.x1 * m.y1;
        syy += m.y1 * m.y1;
        sx += m.x1;
        sy += m.y1;
        n += 1.0;
        bux += m.x1 * m.x2;
        buy += m.y1 * m.x2;
        bu += m.x2;
        bvx += m.x1 * m.y2;
        bvy += m.y1 * m.y2;
        bv += m.y2;
    }
    // 3x3 symmetric system [sxx sxy sx; sxy syy sy; sx sy n].
    const double det = sxx * (syy * n - sy * sy) - sxy * (sxy * n - sy * sx) +
                       sx * (sxy * sy - syy * sx);
    if (std::fabs(det) < 1e-9) return false;
    auto solve = [&](double b0, double b1, double b2, double& c0, double& c1, double& c2) {
        const double d0 = b0 * (syy * n - sy * sy) - sxy * (b1 * n - sy * b2) +
                          sx * (b1 * sy - syy * b2);
        const double d1 = sxx * (b1 * n - sy * b2) - b0 * (sxy * n - sy * sx) +
                          sx * (sxy * b2 - b1 * sx);
        const double d2 = sxx * (syy * b2 - b1 * sy) - sxy * (sxy * b2 - b1 * sx) +
                          b0 * (sxy * sy - syy * sx);
        c0 = d0 / det;
        c1 = d1 / det;
        c2 = d2 / det;
    };
    solve(bux, buy, bu, fit.a11, fit.a12, fit.tx);
    solve(bvx, bvy, bv, fit.a21, fit.a22, fit.ty);
    return true;
}

} // namespace

std::optional<AffineFit> ransac_affine(std::span<const PointMatch> matches, int iters,
                                       double tol_px, num::RngState& rng) {
    if (!(tol_px > 0.0)) raise(ErrorKind::Domain, "ransac_affine: tol_px must be positive");
    const std::size_t n = matches.size();
    if (n < 3) return std::nullopt;

    AffineFit best;
    std::size_t best_inliers = 0;
    bool found = false;
    for (int it = 0; it < iters; ++it) {
        std::size_t i0 = rng.next_below(n), i1 = rng.next_below(n), i2 = rng.next_below(n);
        if (i0 == i1 || i0 == i2 || i1 == i2) continue;
        const PointMatch &m0 = matches[i0], &m1 = matches[i1], &m2 = matches[i2];
        if (collinear(m0.x1, m0.y1, m1.x1, m1.y1, m2.x1, m2.y1)) continue;
        if (collinear(m0.x2, m0.y2, m1.x2, m1.y2, m2.x2, m2.y2)) continue;
        AffineFit fit;
        if (!solve_affine3(m0, m1, m2, fit)) continue;
        const std::size_t inl = count_inliers(matches, fit, tol_px, nullptr);
        if (!found || inl > best_inliers) {
            best = fit;
            best_inliers = inl;
            found = true;
        }
    }
    if (!found || best_inliers < 3) return std::nullopt;

    std::vector<std::size_t> inlier_idx;
    count_inliers(matches, best, tol_px, &inlier_idx);
    AffineFit refit = best;
    if (refit_affine(matches, inlier_idx, refit)) best = refit;
    best.inliers = count_inliers(matches, best, tol_px, nullptr);
    if (best.inliers < 3) return std::nullopt;
    best.inlier_ratio = static_cast<double>(best.inliers) / static_cast<double>(n);
    return best;
}

bool plausible(const AffineFit& fit, std::size_t min_inliers, double min_ratio) {
    if (fit.inliers < min_inliers) return false;
    if (fit.inlier_ratio < min_ratio) return false;
    const auto [hi, lo] = fit.singular_values();
    if (lo < 0.2 || hi > 5.0) return false;
    return fit.det() > 0.0;
}

namespace {

struct ImageFeatures {
    std::vector<img::Keypoint> keypoints;
    std::vector<img::BinaryDescriptor> descriptors;
};

ImageFeatures extract_features(const img::RasterImage& raw, const NearDupParams& params) {
    const img::RasterImage norm = img::normalize_max_side(raw, params.norm_max_side);
    std::vector<img::Keypoint> kps =
        img::detect_keypoints(norm, params.fast_threshold, params.max_kp);
    // describe() needs 20 px of border around the keypoint.
    std::erase_if(kps, [&](const img::Keypoint& kp) {
        return kp.x < 20 || kp.y < 20 || kp.x >= norm.width - 20 || kp.y >= norm.height - 20;
    });
    ImageFeatures f;
    f.descriptors = img::describe_all(norm, kps);
    f.keypoints = std::move(kps);
    return f;
}

bool verify_pair(const ImageFeatures& fa, const ImageFeatures& fb, const NearDupParams& params,
                 std::uint64_t pair_seed, AffineFit& out) {
    const auto matches = match_descriptors(fa.descriptors, fb.descriptors);
    if (matches.size() < 3) return false;
    std::vector<PointMatch> points;
    points.reserve(matches.size());
    for (const auto& [i, j] : matches)
        points.push_back({fa.keypoints[i].x, fa.keypoints[i].y, fb.keypoints[j].x,
                          fb.keypoints[j].y});
    num::RngState rng(pair_seed);
    const auto fit = ransac_affine(points, params.ransac_iters, params.tol_px, rng);
    if (!fit || !plausible(*fit, params.min_inliers, params.min_ratio)) return false;
    out = *fit;
    return true;
}

} // namespace

std::vector<VerifiedPair> verify_near_duplicates(std::span<const CorpusImage> corpus,
                                                 const NearDupParams& params) {
    std::vector<ImageFeatures> features(corpus.size());
    const std::int64_t n = static_cast<std::int64_t>(corpus.size());
#pragma omp parallel for schedule(dynamic) if (params.parallel)
    for (std::int64_t i = 0; i < n; ++i)
        features[static_cast<std::size_t>(i)] = extract_features(corpus[i].image, params);

    const auto pairs = candidate_pairs(corpus, params.filter);

    // Each slot is filled independently; the merge below keeps candidate
    // order, so parallel and serial runs produce identical results.
    std::vector<std::uint8_t> verified(pairs.size(), 0);
    std::vector<AffineFit> fits(pairs.size());
    const std::int64_t m = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic) if (params.parallel)
    for (std::int64_t p = 0; p < m; ++p) {
        const auto [i, j] = pairs[static_cast<std::size_t>(p)];
        // Canonical id order makes verification symmetric in its arguments.
        const bool swap = corpus[j].id < corpus[i].id;
        const std::size_t a = swap ? j : i, b = swap ? i : j;
        const std::uint64_t pair_seed =
            num::derive_seed(params.seed, std::hash<std::string>{}(corpus[a].id),
                             std::hash<std::string>{}(corpus[b].id));
        AffineFit fit;
        if (verify_pair(features[a], features[b], params, pair_seed, fit)) {
            verified[static_cast<std::size_t>(p)] = 1;
            fits[static_cast<std::size_t>(p)] = fit;
        }
    }

    std::vector<VerifiedPair> out;
    for (std::size_t p = 0; p < pairs.size(); ++p)
        if (verified[p]) out.push_back({corpus[pairs[p].first].id, corpus[pairs[p].second].id,
                                        fits[p]});
    return out;
}

std::vector<VisualAssertion> find_assertions(std::span<const CorpusImage> corpus,
                                             const NearDupParams& params) {
    const auto verified = verify_near_duplicates(corpus, params);
    std::vector<std::pair<std::string, std::string>> edges;
    edges.reserve(verified.size());
    for (const auto& v : verified) edges.emplace_back(v.id_a, v.id_b);
    std::vector<std::string> ids;
    ids.reserve(corpus.size());
    for (const auto& c : corpus) ids.push_back(c.id);
    return cluster_assertions(edges, ids);
}

} // namespace propaxis::ndup
