#include "cli.hpp"

#include "vbisnr/capture.hpp"
#include "vbisnr/channel_plan.hpp"
#include "vbisnr/error.hpp"
#include "vbisnr/measure.hpp"
#include "vbisnr/psnr.hpp"
#include "vbisnr/report.hpp"
#include "vbisnr/scan.hpp"
#include "vbisnr/spectrum.hpp"
#include "vbisnr/synth.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

namespace vbisnr::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    while (true) {
        const auto pos = text.find(sep);
        parts.push_back(text.substr(0, pos));
        if (pos == std::string_view::npos) {
            return parts;
        }
        text.remove_prefix(pos + 1);
    }
}

template <typename T>
T number(std::string_view what, std::string_view text) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        throw InvalidInput(fmt::format("{}: cannot parse '{}'", what, text));
    }
    return value;
}

Interferer parse_interferer(std::string_view text) {
    const auto parts = split(text, ',');
    if (parts.size() < 2 || parts.size() > 3) {
        throw InvalidInput(fmt::format("--interferer expects f,amplitude[,phase], got '{}'", text));
    }
    Interferer it;
    it.frequency_hz = parts[0] == "sound-carrier" ? kSoundCarrierOffsetHz
                                                  : number<double>("--interferer frequency", parts[0]);
    it.amplitude = number<double>("--interferer amplitude", parts[1]);
    it.phase_rad = parts.size() == 3 ? number<double>("--interferer phase", parts[2]) : 0.0;
    return it;
}

std::vector<std::size_t> parse_indices(std::string_view text) {
    std::vector<std::size_t> out;
    if (text.empty()) {
        return out;
    }
    for (const auto part : split(text, ',')) {
        out.push_back(number<std::size_t>("--vbi-lines", part));
    }
    return out;
}

SampleWindow parse_window(std::string_view text) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) {
        throw InvalidInput(fmt::format("--window expects start,end, got '{}'", text));
    }
    return {number<std::size_t>("--window start", parts[0]), number<std::size_t>("--window end", parts[1])};
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot open '{}'", path.string()));
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
    if (!file || !(file << text) || !file.flush()) {
        throw IoError(fmt::format("cannot write '{}'", out_path));
    }
}

// --- synth -----------------------------------------------------------------

struct SynthArgs {
    SynthConfig config;
    std::vector<std::string> interferers;
    std::string vbi_lines = "1,2";
    std::string out;
};

void add_synth(CLI::App& app, SynthArgs& a) {
    auto* cmd = app.add_subcommand("synth", "Generate a synthetic capture with known noise");
    cmd->add_option("--sigma", a.config.noise_sigma, "Gaussian noise sigma (code units)")->capture_default_str();
    cmd->add_option("--black-level", a.config.black_level, "Blanking level (code units)")->capture_default_str();
    cmd->add_option("--interferer", a.interferers,
                    "Additive carrier f_hz,amplitude[,phase_rad]; f may be 'sound-carrier' (5.5 MHz). Repeatable")
        ->allow_extra_args(false);
    cmd->add_option("--frames", a.config.frames, "Frames to generate")->capture_default_str();
    cmd->add_option("--seed", a.config.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--bits", a.config.bit_depth, "Bits per sample (8..10)")->capture_default_str();
    cmd->add_option("--samples-per-line", a.config.samples_per_line)->capture_default_str();
    cmd->add_option("--sample-rate", a.config.sample_rate_hz, "ADC rate in Hz")->capture_default_str();
    cmd->add_option("--lines-per-frame", a.config.lines_per_frame)->capture_default_str();
    cmd->add_option("--vbi-lines", a.vbi_lines, "Comma-separated blanked line indices")->capture_default_str();
    cmd->add_option("--label", a.config.channel_label, "Channel label stored in the header");
    cmd->add_flag("--sync", a.config.sync, "Add sync tip and colour burst to blanked lines");
    cmd->add_option("--out", a.out, "Output capture path")->required();
}

int cmd_synth(SynthArgs& a, std::ostream& err) {
    for (const auto& s : a.interferers) {
        a.config.interferers.push_back(parse_interferer(s));
    }
    a.config.vbi_line_indices = parse_indices(a.vbi_lines);
    const auto result = synthesize(a.config);
    write_capture(result.capture, a.out);
    fmt::print(err, "wrote {} ({} frames x {} lines x {} samples), clipped {} of {} samples\n", a.out,
               a.config.frames, a.config.lines_per_frame, a.config.samples_per_line,
               result.clip_count, result.total_samples);
    if (result.clip_warning) {
        fmt::print(err, "warning: more than 1% of samples clipped\n");
    }
    return kExitOk;
}

// --- measure ---------------------------------------------------------------

struct MeasureArgs {
    std::string in;
    std::size_t frames = kMaxAccumulatedFrames;
    std::string filter = "off";
    double cutoff_hz = FilterSpec{}.cutoff_hz;
    double transition_hz = FilterSpec{}.transition_hz;
    std::string window;
    std::optional<double> full_scale;
    bool json = false;
    std::string out;
};

void add_measure(CLI::App& app, MeasureArgs& a) {
    auto* cmd = app.add_subcommand("measure", "Measure black level, noise RMS and SNR of a capture");
    cmd->add_option("--in", a.in, "Capture file")->required();
    cmd->add_option("--frames", a.frames, "Frames to accumulate (max 30)")->capture_default_str();
    cmd->add_option("--filter", a.filter, "Low-pass pre-filter")->check(CLI::IsMember({"on", "off"}))->capture_default_str();
    cmd->add_option("--cutoff-hz", a.cutoff_hz, "Filter passband edge")->capture_default_str();
    cmd->add_option("--transition-hz", a.transition_hz, "Filter transition width")->capture_default_str();
    cmd->add_option("--window", a.window, "Measurement window start,end (samples)");
    cmd->add_option("--full-scale", a.full_scale, "A_FS override (code units)");
    cmd->add_flag("--json", a.json, "Emit JSON");
    cmd->add_option("--out", a.out, "Write output here instead of stdout");
}

int cmd_measure(const MeasureArgs& a, std::ostream& out) {
    if (a.frames == 0 || a.frames > kMaxAccumulatedFrames) {
        throw InvalidInput(fmt::format("--frames {} outside 1..{}: at most {} frames can be accumulated",
                                       a.frames, kMaxAccumulatedFrames, kMaxAccumulatedFrames));
    }
    const auto capture = read_capture(a.in);
    MeasureConfig config;
    config.full_scale = a.full_scale;
    if (a.filter == "on") {
        FilterSpec spec;
        spec.cutoff_hz = a.cutoff_hz;
        spec.transition_hz = a.transition_hz;
        config.filter = spec;
    }
    if (capture.header.frames == 0) {
        throw MeasurementError("capture contains no frames");
    }
    const std::size_t frames = std::min(a.frames, capture.header.frames);
    std::optional<SampleWindow> window;
    if (!a.window.empty()) {
        window = parse_window(a.window);
    }
    const auto lines = extract_vbi_lines(capture, {0, frames}, window);
    const auto m = accumulate(lines, config);

    std::string text;
    if (a.json) {
        json doc{{"channel_label", capture.header.channel_label},
                 {"v_ref", m.v_ref},
                 {"v_n", m.v_n},
                 {"snr_db", m.snr_db},
                 {"error_margin", m.error_margin},
                 {"error_margin_db", m.error_margin_db()},
                 {"n_samples", m.n_samples},
                 {"frames_used", m.frames_used},
                 {"filtered", m.filtered},
                 {"saturated", m.saturated},
                 {"noise_gain", m.noise_gain}};
        text = doc.dump(2) + "\n";
    } else {
        text = fmt::format(
            "channel: {}\nframes_used: {}\nn_samples: {}\nv_ref: {:.4f}\nv_n: {:.4f}\n"
            "snr_db: {:.1f}{}\nerror_margin: {:.4f} ({:.2f} dB)\nfiltered: {}\n",
            capture.header.channel_label, m.frames_used, m.n_samples, m.v_ref, m.v_n, m.snr_db,
            m.saturated ? " (saturated: zero noise)" : "", m.error_margin, m.error_margin_db(),
            m.filtered ? "yes" : "no");
    }
    emit(text, a.out, out);
    return kExitOk;
}

// --- scan ------------------------------------------------------------------

struct ScanArgs {
    std::string plan;
    std::string captures_dir;
    double filter_cutoff = FilterSpec{}.cutoff_hz;
    std::size_t frames = kMaxAccumulatedFrames;
    std::string format = "table";
    std::string timestamp;
    std::string out;
};

void add_scan(CLI::App& app, ScanArgs& a) {
    auto* cmd = app.add_subcommand("scan", "Measure SNR1/SNR2 for every channel of a plan");
    cmd->add_option("--plan", a.plan, "Channel plan CSV")->required();
    cmd->add_option("--captures-dir", a.captures_dir, "Directory of <designation>.vbi captures")->required();
    cmd->add_option("--filter-cutoff", a.filter_cutoff, "SNR2 low-pass passband edge (Hz)")->capture_default_str();
    cmd->add_option("--frames", a.frames, "Frames to accumulate per channel (max 30)")->capture_default_str();
    cmd->add_option("--format", a.format, "Report format")->check(CLI::IsMember({"csv", "json", "table"}))->capture_default_str();
    cmd->add_option("--timestamp", a.timestamp, "Timestamp recorded in the report");
    cmd->add_option("--out", a.out, "Write report here instead of stdout");
}

int cmd_scan(const ScanArgs& a, std::ostream& out, std::ostream& err) {
    if (a.frames == 0 || a.frames > kMaxAccumulatedFrames) {
        throw InvalidInput(fmt::format("--frames {} outside 1..{}", a.frames, kMaxAccumulatedFrames));
    }
    const auto plan = parse_plan(read_text(a.plan));
    if (plan.entries.empty()) {
        throw InvalidInput(fmt::format("plan '{}' lists no channels", a.plan));
    }
    const fs::path dir(a.captures_dir);
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw IoError(fmt::format("captures directory '{}' not found", a.captures_dir));
    }

    CaptureSource source;
    std::map<std::string, std::string> read_failures;
    for (const auto& entry : plan.entries) {
        const auto path = dir / (entry.designation + ".vbi");
        if (!fs::exists(path, ec)) {
            continue;
        }
        try {
            source.emplace(entry.designation, read_capture(path));
        } catch (const std::exception& e) {
            fmt::print(err, "{}: unreadable capture, reporting as no-capture: {}\n", entry.designation, e.what());
            read_failures.emplace(entry.designation, e.what());
        }
    }

    ScanOptions options;
    options.config.max_frames = a.frames;
    FilterSpec spec;
    spec.cutoff_hz = a.filter_cutoff;
    options.config.filter = spec;
    auto report = scan(plan, source, options);
    report.timestamp = a.timestamp;
    for (auto& e : report.entries) {
        if (const auto it = read_failures.find(e.channel.designation); it != read_failures.end()) {
            e.note = it->second;
        } else if (e.status == ChannelStatus::UnsynchronizedSkipped) {
            fmt::print(err, "{}: skipped: {}\n", e.channel.designation, e.note);
        }
    }
    emit(render_report(report, parse_report_format(a.format)), a.out, out);
    return kExitOk;
}

// --- psnr ------------------------------------------------------------------

struct PsnrArgs {
    std::string original;
    std::string decoded;
    int bits = 8;
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t channels = 1;
    std::string labels;
    bool per_channel = false;
    double cap_db = kDefaultSnrCapDb;
    bool json = false;
};

void add_psnr(CLI::App& app, PsnrArgs& a) {
    auto* cmd = app.add_subcommand("psnr", "Peak SNR between an original and a decoded image");
    cmd->add_option("--original", a.original, "Raw planar or binary PGM (P5) image")->required();
    cmd->add_option("--decoded", a.decoded, "Raw planar or binary PGM (P5) image")->required();
    cmd->add_option("--bits", a.bits, "Bits per pixel")->capture_default_str();
    cmd->add_option("--width", a.width, "Raw image width");
    cmd->add_option("--height", a.height, "Raw image height");
    cmd->add_option("--channels", a.channels, "Planes in a raw image")->capture_default_str();
    cmd->add_option("--labels", a.labels, "Channel labels, e.g. Y,Cb,Cr");
    cmd->add_flag("--per-channel", a.per_channel, "Print per-channel values");
    cmd->add_option("--cap-db", a.cap_db, "PSNR reported for identical images")->capture_default_str();
    cmd->add_flag("--json", a.json, "Emit JSON");
}

// Binary PGM header: "P5" <ws> width <ws> height <ws> maxval <single ws>.
std::optional<std::size_t> pgm_header(const std::string& bytes, PixelPlanes& img, int& maxval) {
    if (bytes.size() < 2 || bytes.compare(0, 2, "P5") != 0) {
        return std::nullopt;
    }
    std::size_t pos = 2;
    auto next_token = [&]() {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
        const auto start = pos;
        while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
        return std::string_view(bytes).substr(start, pos - start);
    };
    img.width = number<std::size_t>("PGM width", next_token());
    img.height = number<std::size_t>("PGM height", next_token());
    maxval = number<int>("PGM maxval", next_token());
    if (maxval < 1 || maxval > 65535) {
        throw InvalidInput(fmt::format("PGM maxval {} outside 1..65535", maxval));
    }
    return pos + 1;
}

PixelPlanes load_image(const std::string& path, const PsnrArgs& a) {
    const auto bytes = read_text(path);
    PixelPlanes img;
    int maxval = 0;
    std::size_t offset = 0;
    std::size_t bytes_per_sample = a.bits <= 8 ? 1 : 2;
    bool big_endian = false;
    if (const auto pgm = pgm_header(bytes, img, maxval)) {
        offset = *pgm;
        img.channels = 1;
        bytes_per_sample = maxval < 256 ? 1 : 2;
        big_endian = true;
    } else {
        if (a.width == 0 || a.height == 0) {
            throw InvalidInput(fmt::format("{}: raw image needs --width and --height", path));
        }
        img.width = a.width;
        img.height = a.height;
        img.channels = a.channels;
    }
    const std::size_t expected = img.width * img.height * img.channels * bytes_per_sample;
    if (bytes.size() < offset || bytes.size() - offset != expected) {
        throw InvalidInput(fmt::format("{}: {} payload bytes do not match shape {} ({} bytes expected)",
                                       path, bytes.size() - std::min(offset, bytes.size()), img.shape(),
                                       expected));
    }
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + offset;
    img.samples.resize(img.width * img.height * img.channels);
    for (std::size_t i = 0; i < img.samples.size(); ++i) {
        if (bytes_per_sample == 1) {
            img.samples[i] = p[i];
        } else {
            const unsigned lo = big_endian ? p[2 * i + 1] : p[2 * i];
            const unsigned hi = big_endian ? p[2 * i] : p[2 * i + 1];
            img.samples[i] = static_cast<std::uint16_t>(lo | (hi << 8));
        }
    }
    if (!a.labels.empty()) {
        for (const auto l : split(a.labels, ',')) {
            img.labels.emplace_back(l);
        }
    }
    return img;
}

int cmd_psnr(const PsnrArgs& a, std::ostream& out) {
    const auto original = load_image(a.original, a);
    const auto decoded = load_image(a.decoded, a);
    const auto r = psnr(original, decoded, a.bits, a.cap_db);

    if (a.json) {
        json doc{{"mse", r.mse}, {"psnr_db", r.psnr_db}, {"bits_per_pixel", r.bits_per_pixel},
                 {"saturated", r.saturated}};
        if (r.per_channel) {
            json rows = json::array();
            for (const auto& c : *r.per_channel) {
                rows.push_back({{"label", c.label}, {"mse", c.mse}, {"psnr_db", c.psnr_db},
                                {"saturated", c.saturated}});
            }
            doc["per_channel"] = rows;
        }
        out << doc.dump(2) << "\n";
        return kExitOk;
    }
    auto line = [](std::string_view label, double mse, double db, bool saturated) {
        return fmt::format("{}mse: {:.6f}\n{}psnr_db: {:.1f}{}\n", label, mse, label, db,
                           saturated ? " (saturated: identical images)" : "");
    };
    out << line("", r.mse, r.psnr_db, r.saturated);
    if (a.per_channel && r.per_channel) {
        for (const auto& c : *r.per_channel) {
            out << line(c.label + " ", c.mse, c.psnr_db, c.saturated);
        }
    }
    return kExitOk;
}

// --- spectrum --------------------------------------------------------------

struct SpectrumArgs {
    std::string in;
    std::size_t frame = 0;
    std::optional<std::size_t> line;
    std::optional<std::size_t> fft_size;
    std::string out;
};

void add_spectrum(CLI::App& app, SpectrumArgs& a) {
    auto* cmd = app.add_subcommand("spectrum", "Export the magnitude spectrum of one line as CSV");
    cmd->add_option("--in", a.in, "Capture file")->required();
    cmd->add_option("--frame", a.frame, "Frame index")->capture_default_str();
    cmd->add_option("--line", a.line, "Line index within the frame (default: first VBI line)");
    cmd->add_option("--fft-size", a.fft_size, "Power-of-two FFT size");
    cmd->add_option("--out", a.out, "Write CSV here instead of stdout");
}

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out) {
    const auto capture = read_capture(a.in);
    const auto& h = capture.header;
    std::size_t line_index = 0;
    if (a.line) {
        line_index = *a.line;
    } else if (!h.vbi_line_indices.empty()) {
        line_index = h.vbi_line_indices.front();
    }
    const auto raw = capture.line(a.frame, line_index);
    LineRecord rec;
    rec.samples.assign(raw.begin(), raw.end());
    rec.bit_depth = h.bit_depth;
    rec.sample_rate_hz = h.sample_rate_hz;
    rec.frame_index = a.frame;
    rec.line_index = line_index;
    rec.window = {0, rec.samples.size()};
    const auto s = line_spectrum(rec, a.fft_size);

    std::string text = "frequency_hz,magnitude_db\n";
    for (std::size_t k = 0; k < s.magnitudes_db.size(); ++k) {
        text += fmt::format("{},{}\n", s.frequency_of(k), s.magnitudes_db[k]);
    }
    emit(text, a.out, out);
    return kExitOk;
}

// --- plan-validate ---------------------------------------------------------

struct PlanArgs {
    std::string plan;
};

int cmd_plan_validate(const PlanArgs& a, std::ostream& out, std::ostream& err) {
    const auto plan = parse_plan(read_text(a.plan));
    out << format_plan(plan);
    fmt::print(err, "{}: {} channels OK\n", a.plan, plan.size());
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"VBI signal-to-noise measurement for analog TV captures", "vbisnr"};
    app.require_subcommand(1);

    SynthArgs synth;
    MeasureArgs measure;
    ScanArgs scan_args;
    PsnrArgs psnr_args;
    SpectrumArgs spectrum;
    PlanArgs plan;
    add_synth(app, synth);
    add_measure(app, measure);
    add_scan(app, scan_args);
    add_psnr(app, psnr_args);
    add_spectrum(app, spectrum);
    app.add_subcommand("plan-validate", "Parse and normalize a channel plan CSV")
        ->add_option("--plan", plan.plan, "Channel plan CSV")
        ->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalidInput;
    }

    try {
        if (app.got_subcommand("synth")) return cmd_synth(synth, err);
        if (app.got_subcommand("measure")) return cmd_measure(measure, out);
        if (app.got_subcommand("scan")) return cmd_scan(scan_args, out, err);
        if (app.got_subcommand("psnr")) return cmd_psnr(psnr_args, out);
        if (app.got_subcommand("spectrum")) return cmd_spectrum(spectrum, out);
        if (app.got_subcommand("plan-validate")) return cmd_plan_validate(plan, out, err);
    } catch (const InvalidInput& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitInvalidInput;
    } catch (const IoError& e) {
        fmt::print(err, "I/O error: {}\n", e.what());
        return kExitIoFailure;
    } catch (const fs::filesystem_error& e) {
        fmt::print(err, "I/O error: {}\n", e.what());
        return kExitIoFailure;
    } catch (const MeasurementError& e) {
        fmt::print(err, "cannot measure: {}\n", e.what());
        return kExitNotMeasurable;
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitInvalidInput;
    }
    return kExitInvalidInput;
}

} // namespace vbisnr::cli
