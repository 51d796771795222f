#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "nosetip/align.hpp"
#include "nosetip/error.hpp"
#include "nosetip/landmark.hpp"
#include "nosetip/threshold.hpp"

namespace nosetip::cli {
namespace {

struct StageError : std::runtime_error {
    StageError(const std::string& stage, const std::string& what)
        : std::runtime_error(stage + ": " + what) {}
};

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

Axis parse_axis(const std::string& s) {
    if (s == "x" || s == "X") return Axis::X;
    if (s == "y" || s == "Y") return Axis::Y;
    if (s == "z" || s == "Z") return Axis::Z;
    throw std::invalid_argument("axis must be x, y or z");
}

ingest::DepthFileFormat format_or_throw(const std::string& s) {
    const auto f = ingest::parse_format(s);
    if (!f) throw std::invalid_argument("unknown format '" + s + "' (pgm16, grid, xyz)");
    return *f;
}

smooth::Boundary parse_boundary(const std::string& s) {
    if (s == "clamp") return smooth::Boundary::Clamp;
    if (s == "skip") return smooth::Boundary::Skip;
    throw std::invalid_argument("boundary must be clamp or skip");
}

DepthMap mask_as_map(const BinaryMask& mask) {
    std::vector<double> v(mask.bits().begin(), mask.bits().end());
    return DepthMap::from_rows(mask.width(), mask.height(), std::move(v));
}

std::string landmark_line(const Landmark& lm) {
    return "row=" + std::to_string(lm.row) + " col=" + std::to_string(lm.col) +
           " x=" + ingest::format_number(lm.point.x) + " y=" + ingest::format_number(lm.point.y) +
           " z=" + ingest::format_number(lm.point.z) + " score=" + ingest::format_number(lm.score);
}

}  // namespace

SweepSpec parse_sweep(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("sweep must be START:STOP:STEP, got '" + text + "'");
        }
        if (used != item.size())
            throw std::invalid_argument("sweep must be START:STOP:STEP, got '" + text + "'");
        parts.push_back(v);
    }
    if (parts.size() != 3) throw std::invalid_argument("sweep must be START:STOP:STEP, got '" + text + "'");
    SweepSpec s{parts[0], parts[1], parts[2]};
    if (!(s.step_deg > 0.0)) throw std::invalid_argument("sweep step must be positive");
    if (s.stop_deg < s.start_deg) throw std::invalid_argument("sweep stop is below start");
    return s;
}

void PipelineConfig::validate() const {
    if (input.empty()) throw std::invalid_argument("input path is empty");
    if (align_axis && !(sweep.step_deg > 0.0)) throw std::invalid_argument("sweep step must be positive");
    if (smoothing && smoothing_config.iterations == 0)
        throw std::invalid_argument("iterations must be >= 1");
    if (!(tolerance_px >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
}

int cmd_detect(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
    try {
        stage("config", [&] { config.validate(); });
        const bool dumping = !config.dump_dir.empty();
        if (dumping)
            stage("dump", [&] { std::filesystem::create_directories(config.dump_dir); });
        const auto dump_path = [&](const char* name) { return config.dump_dir / name; };

        const DepthMap map = stage("load", [&] { return ingest::load_depth_map(config.input, config.format); });

        const auto [hist, t, mask] = stage("threshold", [&] {
            auto h = threshold::build_histogram(map);
            const auto thr = threshold::otsu_threshold(h);
            auto m = threshold::binarize(map, thr, h);
            return std::make_tuple(h, thr, m);
        });
        const DepthMap masked = stage("mask", [&] { return apply_mask(map, mask); });
        if (dumping)
            stage("dump", [&] {
                std::string csv = "bin,count\n";
                for (std::size_t i = 0; i < hist.bins.size(); ++i)
                    csv += std::to_string(i) + "," + std::to_string(hist.bins[i]) + "\n";
                ingest::write_text_file(dump_path("histogram.csv"), csv);
                ingest::write_text_file(dump_path("threshold.txt"),
                                        "bin=" + std::to_string(t) + "\nmin_depth=" +
                                            ingest::format_number(hist.min_depth) + "\nmax_depth=" +
                                            ingest::format_number(hist.max_depth) + "\n");
                ingest::save_depth_map(mask_as_map(mask), dump_path("mask.grid"),
                                       ingest::DepthFileFormat::ASCII_GRID);
                ingest::save_depth_map(masked, dump_path("masked.grid"),
                                       ingest::DepthFileFormat::ASCII_GRID);
            });

        DepthMap working = masked;
        if (config.smoothing)
            working = stage("smooth", [&] { return smooth::smooth_depth_map(masked, config.smoothing_config); });
        if (config.smoothing && dumping)
            stage("dump", [&] {
                ingest::save_depth_map(working, dump_path("smoothed.grid"), ingest::DepthFileFormat::ASCII_GRID);
            });

        const Landmark lm = stage("landmark", [&] { return landmark::find_nose_tip(working, mask); });
        std::optional<Landmark> truth;
        if (!config.truth.empty()) truth = stage("truth", [&] { return ingest::load_landmark(config.truth); });

        std::optional<RotationSpec> pose;
        std::vector<Point3> aligned;
        if (config.align_axis) {
            stage("align", [&] {
                const auto cloud = depth_map_to_point_cloud(working);
                const auto sweep_deg =
                    align::make_sweep(config.sweep.start_deg, config.sweep.stop_deg, config.sweep.step_deg);
                std::vector<double> sweep;
                for (double d : sweep_deg) sweep.push_back(align::degrees_to_radians(d));
                pose = align::estimate_pose_by_symmetry(cloud, lm.point, *config.align_axis, sweep);
                aligned = align::align_cloud(cloud, lm.point, *pose);
            });
        }

        stage("write", [&] {
            if (!config.out_landmark.empty()) ingest::save_landmark(lm, config.out_landmark);
            if (!config.out_smoothed.empty()) ingest::save_depth_map(working, config.out_smoothed, config.out_format);
            if (!config.out_aligned.empty()) {
                if (!pose) throw std::invalid_argument("--out-aligned requires --align-axis");
                ingest::save_point_cloud(aligned, config.out_aligned);
            }
            if (dumping) {
                ingest::save_landmark(lm, dump_path("landmark.txt"));
                if (pose) ingest::save_point_cloud(aligned, dump_path("aligned.xyz"));
            }
        });

        out << "nose_tip " << landmark_line(lm) << " threshold_bin=" << t
            << " smoothed=" << (config.smoothing ? "yes" : "no");
        if (config.smoothing) out << " iterations=" << config.smoothing_config.iterations;
        if (pose)
            out << " align_axis=" << axis_name(pose->axis)
                << " align_deg=" << ingest::format_number(align::radians_to_degrees(pose->theta));
        if (truth) {
            const double dist = std::hypot(static_cast<double>(lm.row) - static_cast<double>(truth->row),
                                           static_cast<double>(lm.col) - static_cast<double>(truth->col));
            out << " truth_distance_px=" << ingest::format_number(dist)
                << " within_tolerance=" << (dist <= config.tolerance_px ? "yes" : "no");
        }
        out << '\n';
        return 0;
    } catch (const StageError& e) {
        err << "detect: " << e.what() << '\n';
        return 1;
    }
}

int cmd_synth(const SynthConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const auto [map, truth] = stage("generate", [&] {
            std::optional<RotationSpec> pose;
            if (config.pose_axis) pose = RotationSpec{*config.pose_axis, align::degrees_to_radians(config.pose_deg)};
            auto face = synth::generate_face(config.face, pose);
            auto noisy = synth::inject_noise(face.map, config.noise);
            return std::make_pair(std::move(noisy), face.truth);
        });
        const auto landmark_path =
            config.out_landmark.empty() ? std::filesystem::path(config.out.string() + ".landmark.txt")
                                        : config.out_landmark;
        stage("write", [&] {
            if (config.out.empty()) throw std::invalid_argument("--out is required");
            ingest::save_depth_map(map, config.out, config.format);
            ingest::save_landmark(truth, landmark_path);
        });
        out << "synth " << config.face.width << "x" << config.face.height << " truth " << landmark_line(truth)
            << " map=" << config.out.string() << " landmark=" << landmark_path.string() << '\n';
        return 0;
    } catch (const StageError& e) {
        err << "synth: " << e.what() << '\n';
        return 1;
    }
}

int cmd_bench(const BenchConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const auto poses = stage("config", [&] { return synth::parse_pose_set(config.poses); });
        const auto report = stage("benchmark", [&] {
            return synth::run_benchmark(config.faces, poses, config.noise, config.smoothing,
                                        config.tolerance_px, config.options);
        });
        const std::string summary = synth::report_summary(report);
        stage("write", [&] {
            if (!config.out_csv.empty()) ingest::write_text_file(config.out_csv, synth::report_csv(report));
            if (!config.out_summary.empty()) ingest::write_text_file(config.out_summary, summary);
        });
        out << summary;
        return 0;
    } catch (const StageError& e) {
        err << "bench: " << e.what() << '\n';
        return 1;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Nose-tip localization on range images"};
    app.require_subcommand(1);

    // detect
    PipelineConfig detect;
    std::string detect_format = "grid", out_format = "grid", boundary = "clamp", align_axis, sweep;
    std::size_t kernel_side = 3;
    bool no_smooth = false;
    auto* d = app.add_subcommand("detect", "Locate the nose tip in a range image");
    d->add_option("--input", detect.input, "Input depth map")->required();
    d->add_option("--format", detect_format, "Input format: pgm16, grid or xyz");
    d->add_flag("--no-smooth", no_smooth, "Skip weighted-median smoothing");
    d->add_option("--kernel-side", kernel_side, "Odd window side N of the N^3 kernel");
    d->add_option("--iterations", detect.smoothing_config.iterations, "Smoothing passes");
    d->add_option("--boundary", boundary, "Window handling at the border: clamp or skip");
    d->add_option("--align-axis", align_axis, "Estimate pose about x, y or z by symmetry");
    d->add_option("--sweep", sweep, "Alignment sweep START:STOP:STEP in degrees (default -45:45:1)");
    d->add_option("--out-landmark", detect.out_landmark, "Write the landmark record here");
    d->add_option("--out-smoothed", detect.out_smoothed, "Write the (smoothed) masked map here");
    d->add_option("--out-format", out_format, "Format of --out-smoothed");
    d->add_option("--out-aligned", detect.out_aligned, "Write the aligned point cloud here");
    d->add_option("--dump-dir", detect.dump_dir, "Write every pipeline intermediate here");
    d->add_option("--truth", detect.truth, "Ground-truth landmark record to score against");
    d->add_option("--tolerance-px", detect.tolerance_px, "Success radius for --truth (default 3)");

    // synth
    SynthConfig syn;
    std::string synth_format = "grid", pose_axis;
    std::optional<std::size_t> nose_row, nose_col;
    auto* s = app.add_subcommand("synth", "Generate a synthetic range face and its ground truth");
    s->add_option("--width", syn.face.width);
    s->add_option("--height", syn.face.height);
    s->add_option("--nose-row", nose_row, "Defaults to the grid centre");
    s->add_option("--nose-col", nose_col, "Defaults to the grid centre");
    s->add_option("--nose-height", syn.face.nose_height);
    s->add_option("--nose-sigma", syn.face.nose_sigma);
    s->add_option("--base-depth", syn.face.base_depth);
    s->add_option("--dome", syn.face.dome_amplitude);
    s->add_option("--background-depth", syn.face.background_depth);
    s->add_option("--pose-axis", pose_axis, "Rotate the head about x, y or z");
    s->add_option("--pose-deg", syn.pose_deg, "Pose angle in degrees");
    s->add_option("--spike-frac", syn.noise.spike_fraction);
    s->add_option("--spike-amp", syn.noise.spike_amplitude);
    s->add_option("--gauss-sigma", syn.noise.gaussian_sigma);
    s->add_option("--seed", syn.noise.seed);
    s->add_option("--out", syn.out, "Output depth map")->required();
    s->add_option("--out-landmark", syn.out_landmark, "Ground-truth record (default <out>.landmark.txt)");
    s->add_option("--format", synth_format, "Output format: pgm16, grid or xyz");

    // bench
    BenchConfig bench;
    std::size_t bench_side = 3;
    std::string bench_boundary = "clamp";
    bool no_jitter = false;
    bench.smoothing.iterations = 100;
    auto* b = app.add_subcommand("bench", "Smoothed vs unsmoothed localization on synthetic faces");
    b->add_option("--faces", bench.faces, "Faces per pose bucket");
    b->add_option("--poses", bench.poses, "Buckets: 'standard' or a list like frontal,y+30,z-18");
    b->add_option("--tolerance-px", bench.tolerance_px);
    b->add_option("--seed", bench.noise.seed);
    b->add_option("--spike-frac", bench.noise.spike_fraction);
    b->add_option("--spike-amp", bench.noise.spike_amplitude);
    b->add_option("--gauss-sigma", bench.noise.gaussian_sigma);
    b->add_option("--kernel-side", bench_side);
    b->add_option("--iterations", bench.smoothing.iterations);
    b->add_option("--boundary", bench_boundary);
    b->add_option("--threads", bench.options.threads, "0 = hardware concurrency");
    b->add_flag("--no-jitter", no_jitter, "Use identical face geometry for every face");
    b->add_option("--out-csv", bench.out_csv);
    b->add_option("--out-summary", bench.out_summary);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (d->parsed()) {
            detect.format = format_or_throw(detect_format);
            detect.out_format = format_or_throw(out_format);
            detect.smoothing = !no_smooth;
            detect.smoothing_config.kernel = smooth::WeightKernel::uniform(kernel_side);
            detect.smoothing_config.boundary = parse_boundary(boundary);
            if (!align_axis.empty()) detect.align_axis = parse_axis(align_axis);
            if (!sweep.empty()) detect.sweep = parse_sweep(sweep);
            return cmd_detect(detect, out, err);
        }
        if (s->parsed()) {
            syn.format = format_or_throw(synth_format);
            syn.face.nose_row = nose_row.value_or(syn.face.height / 2);
            syn.face.nose_col = nose_col.value_or(syn.face.width / 2);
            if (!pose_axis.empty()) syn.pose_axis = parse_axis(pose_axis);
            return cmd_synth(syn, out, err);
        }
        if (b->parsed()) {
            bench.smoothing.kernel = smooth::WeightKernel::uniform(bench_side);
            bench.smoothing.boundary = parse_boundary(bench_boundary);
            bench.options.jitter = !no_jitter;
            return cmd_bench(bench, out, err);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace nosetip::cli
