#include "nosetip/synth.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "nosetip/align.hpp"
#include "nosetip/error.hpp"
#include "nosetip/ingest.hpp"
#include "nosetip/landmark.hpp"
#include "nosetip/threshold.hpp"

namespace nosetip::synth {
namespace {

constexpr int kSupersample = 4;

struct FaceSurface {
    const FaceParams& p;
    double semi_x, semi_y;

    explicit FaceSurface(const FaceParams& params)
        : p(params), semi_x(0.36 * params.width), semi_y(0.42 * params.height) {}

    double rho2(double x, double y) const {
        const double u = (x - p.nose_col) / semi_x;
        const double v = (y - p.nose_row) / semi_y;
        return u * u + v * v;
    }
    bool inside(double x, double y) const { return rho2(x, y) <= 1.0; }
    double depth(double x, double y) const {
        const double dx = x - p.nose_col, dy = y - p.nose_row;
        return p.base_depth + p.dome_amplitude * (1.0 - rho2(x, y)) +
               p.nose_height * std::exp(-(dx * dx + dy * dy) / (2.0 * p.nose_sigma * p.nose_sigma));
    }
};

Landmark truth_at(const DepthMap& map, std::size_t row, std::size_t col, const Point3& point) {
    double score = 0.0;
    for (std::size_t r = row - 1; r <= row + 1; ++r)
        for (std::size_t c = col - 1; c <= col + 1; ++c) {
            if (!map.valid(r, c)) throw Error("nose tip window is not fully visible after posing");
            score += map.depth(r, c);
        }
    return {row, col, point, score};
}

DepthMap render_frontal(const FaceParams& p, const FaceSurface& face) {
    std::vector<double> depth(p.width * p.height);
    for (std::size_t r = 0; r < p.height; ++r)
        for (std::size_t c = 0; c < p.width; ++c) {
            const double x = static_cast<double>(c), y = static_cast<double>(r);
            depth[r * p.width + c] = face.inside(x, y) ? face.depth(x, y) : p.background_depth;
        }
    return DepthMap::from_rows(p.width, p.height, std::move(depth));
}

DepthMap render_posed(const FaceParams& p, const FaceSurface& face, const RotationSpec& pose,
                      const Point3& pivot) {
    const auto rot = align::rotation_matrix(pose);
    const std::size_t w = p.width, h = p.height;
    std::vector<double> zbuf(w * h, -std::numeric_limits<double>::infinity());
    std::vector<std::uint8_t> hit(w * h, 0);

    for (std::size_t r = 0; r < h; ++r)
        for (std::size_t c = 0; c < w; ++c)
            for (int sy = 0; sy < kSupersample; ++sy)
                for (int sx = 0; sx < kSupersample; ++sx) {
                    const double x = static_cast<double>(c) - 0.5 + (sx + 0.5) / kSupersample;
                    const double y = static_cast<double>(r) - 0.5 + (sy + 0.5) / kSupersample;
                    if (!face.inside(x, y)) continue;
                    const Point3 q = rot * (Point3{x, y, face.depth(x, y)} - pivot) + pivot;
                    const double col = std::round(q.x), row = std::round(q.y);
                    if (col < 0 || row < 0 || col >= static_cast<double>(w) ||
                        row >= static_cast<double>(h))
                        continue;
                    const std::size_t idx =
                        static_cast<std::size_t>(row) * w + static_cast<std::size_t>(col);
                    hit[idx] = 1;
                    zbuf[idx] = std::max(zbuf[idx], q.z);
                }

    // Unhit cells reachable from the border see the background; the rest are holes.
    std::vector<std::uint8_t> background(w * h, 0);
    std::deque<std::size_t> queue;
    auto seed = [&](std::size_t idx) {
        if (hit[idx] == 0 && background[idx] == 0) {
            background[idx] = 1;
            queue.push_back(idx);
        }
    };
    for (std::size_t c = 0; c < w; ++c) {
        seed(c);
        seed((h - 1) * w + c);
    }
    for (std::size_t r = 0; r < h; ++r) {
        seed(r * w);
        seed(r * w + w - 1);
    }
    while (!queue.empty()) {
        const std::size_t idx = queue.front();
        queue.pop_front();
        const std::size_t r = idx / w, c = idx % w;
        if (r > 0) seed(idx - w);
        if (r + 1 < h) seed(idx + w);
        if (c > 0) seed(idx - 1);
        if (c + 1 < w) seed(idx + 1);
    }

    std::vector<double> depth(w * h, 0.0);
    std::vector<std::uint8_t> valid(w * h, 0);
    for (std::size_t i = 0; i < w * h; ++i) {
        if (hit[i] != 0) {
            depth[i] = zbuf[i];
            valid[i] = 1;
        } else if (background[i] != 0) {
            depth[i] = p.background_depth;
            valid[i] = 1;
        }
    }
    return DepthMap(w, h, std::move(depth), std::move(valid));
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

FaceParams jittered(const FaceParams& base, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    FaceParams p = base;
    const auto shift = [&](std::size_t centre, std::size_t extent) {
        const long lo = 1, hi = static_cast<long>(extent) - 2;
        const long v = static_cast<long>(centre) + std::uniform_int_distribution<long>(-3, 3)(rng);
        return static_cast<std::size_t>(std::clamp(v, lo, hi));
    };
    p.nose_row = shift(base.nose_row, base.height);
    p.nose_col = shift(base.nose_col, base.width);
    p.nose_height = base.nose_height * uniform(rng, 0.9, 1.1);
    p.nose_sigma = std::max(1.0, base.nose_sigma * uniform(rng, 0.9, 1.1));
    return p;
}

struct FaceOutcome {
    bool unsmoothed = false;
    bool smoothed = false;
};

FaceOutcome evaluate_face(const FaceParams& params, const std::optional<RotationSpec>& pose,
                          const NoiseParams& noise, const smooth::SmoothingConfig& config,
                          double tolerance_px) {
    FaceOutcome out;
    try {
        const auto face = generate_face(params, pose);
        const DepthMap noisy = inject_noise(face.map, noise);
        const auto hist = threshold::build_histogram(noisy);
        const auto mask = threshold::binarize(noisy, threshold::otsu_threshold(hist), hist);
        const auto near_truth = [&](const Landmark& lm) {
            const double dr = static_cast<double>(lm.row) - static_cast<double>(face.truth.row);
            const double dc = static_cast<double>(lm.col) - static_cast<double>(face.truth.col);
            return std::hypot(dr, dc) <= tolerance_px;
        };
        const DepthMap masked = apply_mask(noisy, mask);
        try {
            out.unsmoothed = near_truth(landmark::find_nose_tip(masked, mask));
        } catch (const Error&) {
        }
        try {
            out.smoothed =
                near_truth(landmark::find_nose_tip(smooth::smooth_depth_map(masked, config), mask));
        } catch (const Error&) {
        }
    } catch (const std::exception&) {
        // Any failure to render or threshold the face is a miss on both arms.
    }
    return out;
}

std::string angle_text(double deg) {
    const double rounded = std::round(deg * 1e6) / 1e6;
    std::string s = ingest::format_number(rounded == 0.0 ? 0.0 : rounded);
    return rounded > 0.0 ? "+" + s : s;
}

}  // namespace

void FaceParams::validate() const {
    if (width < 3 || height < 3) throw std::invalid_argument("face grid must be at least 3x3");
    if (!(nose_height > 0.0)) throw std::invalid_argument("nose_height must be positive");
    if (!(nose_sigma >= 1.0)) throw std::invalid_argument("nose_sigma must be >= 1");
    if (!(base_depth > background_depth))
        throw std::invalid_argument("base_depth must exceed background_depth");
    if (!std::isfinite(dome_amplitude) || dome_amplitude < 0.0)
        throw std::invalid_argument("dome_amplitude must be finite and non-negative");
    if (nose_row < 1 || nose_col < 1 || nose_row + 1 >= height || nose_col + 1 >= width)
        throw std::invalid_argument("nose centre must be an interior pixel");
}

void NoiseParams::validate() const {
    if (!(spike_fraction >= 0.0 && spike_fraction <= 0.2))
        throw std::invalid_argument("spike_fraction must lie in [0, 0.2]");
    if (!std::isfinite(spike_amplitude)) throw std::invalid_argument("spike_amplitude must be finite");
    if (!(gaussian_sigma >= 0.0) || !std::isfinite(gaussian_sigma))
        throw std::invalid_argument("gaussian_sigma must be finite and >= 0");
}

SyntheticFace generate_face(const FaceParams& params, const std::optional<RotationSpec>& pose) {
    params.validate();
    const FaceSurface face(params);
    const double nx = static_cast<double>(params.nose_col);
    const double ny = static_cast<double>(params.nose_row);
    const Point3 tip{nx, ny, face.depth(nx, ny)};

    if (!pose) {
        DepthMap map = render_frontal(params, face);
        Landmark truth = truth_at(map, params.nose_row, params.nose_col, tip);
        return {std::move(map), truth};
    }
    if (!std::isfinite(pose->theta) || std::abs(pose->theta) >= std::numbers::pi / 2)
        throw Error("pose of " + ingest::format_number(align::radians_to_degrees(pose->theta)) +
                    " degrees is too extreme to render");
    DepthMap map = render_posed(params, face, *pose, tip);
    Landmark truth = truth_at(map, params.nose_row, params.nose_col, tip);
    return {std::move(map), truth};
}

DepthMap inject_noise(const DepthMap& map, const NoiseParams& noise) {
    noise.validate();
    std::vector<double> depth(map.depths().begin(), map.depths().end());
    std::vector<std::size_t> valid_idx;
    for (std::size_t i = 0; i < map.size(); ++i)
        if (map.validity()[i] != 0) valid_idx.push_back(i);

    std::mt19937_64 rng(noise.seed);
    if (noise.gaussian_sigma > 0.0) {
        std::normal_distribution<double> gauss(0.0, noise.gaussian_sigma);
        for (auto i : valid_idx) depth[i] += gauss(rng);
    }
    const auto spikes = static_cast<std::size_t>(
        std::llround(noise.spike_fraction * static_cast<double>(valid_idx.size())));
    for (std::size_t k = 0; k < spikes; ++k) {
        const std::size_t j =
            std::uniform_int_distribution<std::size_t>(k, valid_idx.size() - 1)(rng);
        std::swap(valid_idx[k], valid_idx[j]);
        depth[valid_idx[k]] += noise.spike_amplitude;
    }
    return DepthMap(map.width(), map.height(), std::move(depth),
                    {map.validity().begin(), map.validity().end()});
}

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

PoseSet standard_pose_set() {
    PoseSet set{std::nullopt};
    const auto add = [&](Axis axis, std::initializer_list<double> degs) {
        for (double d : degs) set.push_back(RotationSpec{axis, align::degrees_to_radians(d)});
    };
    add(Axis::Y, {30, -30, 38, -38, 40, -40});
    add(Axis::Z, {18, -18, 30, -30, 38, -38, 40, -40});
    add(Axis::X, {5, -5, 18, -18, 40, -40});
    return set;
}

PoseSet parse_pose_set(std::string_view spec) {
    PoseSet out;
    std::size_t start = 0;
    while (start <= spec.size()) {
        const std::size_t end = std::min(spec.find(',', start), spec.size());
        std::string item(spec.substr(start, end - start));
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char ch) { return std::isspace(ch); }),
                   item.end());
        std::transform(item.begin(), item.end(), item.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        if (item == "standard") {
            const auto all = standard_pose_set();
            out.insert(out.end(), all.begin(), all.end());
        } else if (item == "frontal") {
            out.push_back(std::nullopt);
        } else {
            if (item.size() < 2 || (item[0] != 'x' && item[0] != 'y' && item[0] != 'z'))
                throw std::invalid_argument("bad pose bucket '" + item + "'");
            const Axis axis = item[0] == 'x' ? Axis::X : item[0] == 'y' ? Axis::Y : Axis::Z;
            std::size_t used = 0;
            double deg = 0.0;
            try {
                deg = std::stod(item.substr(1), &used);
            } catch (const std::exception&) {
                throw std::invalid_argument("bad pose angle in '" + item + "'");
            }
            if (used != item.size() - 1 || !std::isfinite(deg))
                throw std::invalid_argument("bad pose angle in '" + item + "'");
            out.push_back(RotationSpec{axis, align::degrees_to_radians(deg)});
        }
        start = end + 1;
    }
    return out;
}

std::string pose_label(const std::optional<RotationSpec>& pose) {
    if (!pose) return "frontal";
    return std::string(1, axis_name(pose->axis)) + angle_text(align::radians_to_degrees(pose->theta));
}

std::size_t BenchmarkReport::total() const {
    std::size_t n = 0;
    for (const auto& b : buckets) n += b.count;
    return n;
}

std::size_t BenchmarkReport::total_correct_unsmoothed() const {
    std::size_t n = 0;
    for (const auto& b : buckets) n += b.correct_unsmoothed;
    return n;
}

std::size_t BenchmarkReport::total_correct_smoothed() const {
    std::size_t n = 0;
    for (const auto& b : buckets) n += b.correct_smoothed;
    return n;
}

BenchmarkReport run_benchmark(std::size_t n_faces, const PoseSet& pose_set, const NoiseParams& noise,
                              const smooth::SmoothingConfig& config, double tolerance_px,
                              const BenchmarkOptions& options) {
    if (n_faces == 0) throw std::invalid_argument("benchmark needs at least one face");
    noise.validate();
    options.face.validate();
    const PoseSet poses = pose_set.empty() ? PoseSet{std::nullopt} : pose_set;
    for (const auto& pose : poses)
        if (pose && !(std::abs(pose->theta) < std::numbers::pi / 2))
            throw std::invalid_argument("pose bucket " + pose_label(pose) + " is not below 90 degrees");

    BenchmarkReport report;
    report.faces_per_bucket = n_faces;
    report.kernel_side = config.kernel.side();
    report.iterations = config.iterations;
    report.boundary = config.boundary;
    report.tolerance_px = tolerance_px;
    report.noise = noise;

    const std::size_t jobs = poses.size() * n_faces;
    std::vector<FaceOutcome> outcomes(jobs);
    auto work = [&](std::size_t job) {
        const std::size_t bucket = job / n_faces, face = job % n_faces;
        const std::uint64_t face_seed = mix_seed(noise.seed ^ mix_seed(face));
        const FaceParams params =
            options.jitter && face != 0 ? jittered(options.face, face_seed) : options.face;
        NoiseParams face_noise = noise;
        face_noise.seed = mix_seed(face_seed + mix_seed(bucket + 1));
        outcomes[job] = evaluate_face(params, poses[bucket], face_noise, config, tolerance_px);
    };

    unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
    threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::min<std::size_t>(jobs, 64)));
    if (threads == 1) {
        for (std::size_t j = 0; j < jobs; ++j) work(j);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t j = t; j < jobs; j += threads) work(j);
            });
    }

    for (std::size_t b = 0; b < poses.size(); ++b) {
        BucketResult res;
        res.pose = poses[b];
        res.count = n_faces;
        for (std::size_t f = 0; f < n_faces; ++f) {
            res.correct_unsmoothed += outcomes[b * n_faces + f].unsmoothed ? 1 : 0;
            res.correct_smoothed += outcomes[b * n_faces + f].smoothed ? 1 : 0;
        }
        report.buckets.push_back(res);
    }
    return report;
}

std::uint32_t success_centi_percent(std::size_t correct, std::size_t count) {
    if (count == 0) return 0;
    return static_cast<std::uint32_t>((20000ULL * correct + count) / (2ULL * count));
}

std::string format_percent(std::uint32_t centi) {
    std::string frac = std::to_string(centi % 100);
    if (frac.size() < 2) frac.insert(0, "0");
    return std::to_string(centi / 100) + "." + frac;
}

namespace {

struct ArmRow {
    std::string arm;
    std::size_t correct;
};

std::string bucket_angle(const std::optional<RotationSpec>& pose) {
    return pose ? angle_text(align::radians_to_degrees(pose->theta)) : "0";
}

std::string pct_pair(std::size_t correct, std::size_t count, char sep, const char* k1 = nullptr,
                     const char* k2 = nullptr) {
    const auto s = success_centi_percent(correct, count);
    std::string out;
    if (k1) out += k1;
    out += format_percent(s);
    out += sep;
    if (k2) out += k2;
    out += format_percent(10000 - s);
    return out;
}

}  // namespace

std::string report_csv(const BenchmarkReport& report) {
    std::ostringstream os;
    os << "bucket,axis,angle_deg,arm,count,correct,success_pct,failure_pct\n";
    for (const auto& b : report.buckets) {
        const std::string axis = b.pose ? std::string(1, axis_name(b.pose->axis)) : "none";
        for (const ArmRow& arm : {ArmRow{"unsmoothed", b.correct_unsmoothed},
                                  ArmRow{"smoothed", b.correct_smoothed}}) {
            os << pose_label(b.pose) << ',' << axis << ',' << bucket_angle(b.pose) << ',' << arm.arm
               << ',' << b.count << ',' << arm.correct << ',' << pct_pair(arm.correct, b.count, ',')
               << '\n';
        }
    }
    return os.str();
}

std::string report_summary(const BenchmarkReport& report) {
    std::ostringstream os;
    os << "faces_per_bucket=" << report.faces_per_bucket << '\n'
       << "buckets=" << report.buckets.size() << '\n'
       << "kernel_side=" << report.kernel_side << '\n'
       << "iterations=" << report.iterations << '\n'
       << "boundary=" << (report.boundary == smooth::Boundary::Clamp ? "clamp" : "skip") << '\n'
       << "tolerance_px=" << ingest::format_number(report.tolerance_px) << '\n'
       << "spike_fraction=" << ingest::format_number(report.noise.spike_fraction) << '\n'
       << "spike_amplitude=" << ingest::format_number(report.noise.spike_amplitude) << '\n'
       << "gaussian_sigma=" << ingest::format_number(report.noise.gaussian_sigma) << '\n'
       << "seed=" << report.noise.seed << '\n';
    for (const char* arm : {"unsmoothed", "smoothed"}) {
        const bool sm = std::string_view(arm) == "smoothed";
        for (const auto& b : report.buckets) {
            const std::size_t correct = sm ? b.correct_smoothed : b.correct_unsmoothed;
            os << arm << ' ' << pose_label(b.pose) << " count=" << b.count << " correct=" << correct
               << ' ' << pct_pair(correct, b.count, ' ', "success_pct=", "failure_pct=") << '\n';
        }
        const std::size_t correct =
            sm ? report.total_correct_smoothed() : report.total_correct_unsmoothed();
        os << arm << " overall count=" << report.total() << " correct=" << correct << ' '
           << pct_pair(correct, report.total(), ' ', "success_pct=", "failure_pct=") << '\n';
    }
    return os.str();
}

}  // namespace nosetip::synth
