#include "vbisnr/report.hpp"

#include "vbisnr/error.hpp"

#include <fmt/format.h>
#include <json.hpp>

namespace vbisnr {

using nlohmann::json;

ReportFormat parse_report_format(std::string_view text) {
    if (text == "csv") return ReportFormat::Csv;
    if (text == "json") return ReportFormat::Json;
    if (text == "table") return ReportFormat::Table;
    throw InvalidInput(fmt::format("unknown report format '{}' (csv, json, table)", text));
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string opt_number(const std::optional<Measurement>& m, double (*pick)(const Measurement&)) {
    return m ? fmt::format("{}", pick(*m)) : std::string{};
}

std::string render_csv(const ScanReport& report) {
    std::string out = "designation,name,freq_mhz,snr1_db,snr2_db,error1_db,error2_db,n_samples,status\n";
    for (const auto& e : report.entries) {
        out += fmt::format(
            "{},{},{},{},{},{},{},{},{}\n", csv_field(e.channel.designation), csv_field(e.channel.name),
            e.channel.video_carrier_mhz,
            opt_number(e.snr1, [](const Measurement& m) { return m.snr_db; }),
            opt_number(e.snr2, [](const Measurement& m) { return m.snr_db; }),
            opt_number(e.snr1, [](const Measurement& m) { return m.error_margin_db(); }),
            opt_number(e.snr2, [](const Measurement& m) { return m.error_margin_db(); }),
            e.snr1 ? fmt::format("{}", e.snr1->n_samples) : std::string{}, to_string(e.status));
    }
    return out;
}

std::string render_table(const ScanReport& report) {
    std::string out = "Channel SNR1[dB] SNR2[dB] Freq[MHz] Status Name\n";
    auto db = [](const std::optional<Measurement>& m) {
        return m ? fmt::format("{:.1f}", m->snr_db) : std::string("-");
    };
    for (const auto& e : report.entries) {
        out += fmt::format("{} {} {} {:.2f} {} {}\n", e.channel.designation, db(e.snr1), db(e.snr2),
                           e.channel.video_carrier_mhz, to_string(e.status), e.channel.name);
    }
    return out;
}

json measurement_json(const Measurement& m) {
    return json{{"v_ref", m.v_ref},
                {"v_n", m.v_n},
                {"snr_db", m.snr_db},
                {"error_margin", m.error_margin},
                {"n_samples", m.n_samples},
                {"filtered", m.filtered},
                {"frames_used", m.frames_used},
                {"saturated", m.saturated},
                {"noise_gain", m.noise_gain}};
}

Measurement measurement_from(const json& j) {
    Measurement m;
    m.v_ref = j.at("v_ref").get<double>();
    m.v_n = j.at("v_n").get<double>();
    m.snr_db = j.at("snr_db").get<double>();
    m.error_margin = j.at("error_margin").get<double>();
    m.n_samples = j.at("n_samples").get<std::size_t>();
    m.filtered = j.at("filtered").get<bool>();
    m.frames_used = j.at("frames_used").get<std::size_t>();
    m.saturated = j.at("saturated").get<bool>();
    m.noise_gain = j.at("noise_gain").get<double>();
    return m;
}

json optional_measurement(const std::optional<Measurement>& m) {
    return m ? measurement_json(*m) : json(nullptr);
}

std::optional<Measurement> optional_measurement_from(const json& j) {
    if (j.is_null()) {
        return std::nullopt;
    }
    return measurement_from(j);
}

std::string render_json(const ScanReport& report) {
    json entries = json::array();
    for (const auto& e : report.entries) {
        json row{{"designation", e.channel.designation},
                 {"name", e.channel.name},
                 {"video_carrier_mhz", e.channel.video_carrier_mhz},
                 {"status", to_string(e.status)},
                 {"snr1", optional_measurement(e.snr1)},
                 {"snr2", optional_measurement(e.snr2)}};
        if (!e.note.empty()) {
            row["note"] = e.note;
        }
        entries.push_back(std::move(row));
    }
    const auto& s = report.settings;
    json settings{{"full_scale", s.full_scale ? json(*s.full_scale) : json(nullptr)},
                  {"max_frames", s.max_frames},
                  {"snr_cap_db", s.snr_cap_db},
                  {"filter",
                   {{"kind", "windowed-sinc-lowpass"},
                    {"cutoff_hz", s.filter.cutoff_hz},
                    {"transition_hz", s.filter.transition_hz},
                    {"stopband_atten_db", s.filter.stopband_atten_db}}}};
    json doc{{"timestamp", report.timestamp}, {"settings", settings}, {"entries", entries}};
    return doc.dump(2) + "\n";
}

} // namespace

std::string render_report(const ScanReport& report, ReportFormat format) {
    switch (format) {
    case ReportFormat::Csv: return render_csv(report);
    case ReportFormat::Json: return render_json(report);
    case ReportFormat::Table: return render_table(report);
    }
    return {};
}

ScanReport report_from_json(std::string_view text) {
    try {
        const auto doc = json::parse(text);
        ScanReport report;
        report.timestamp = doc.at("timestamp").get<std::string>();
        const auto& s = doc.at("settings");
        if (!s.at("full_scale").is_null()) {
            report.settings.full_scale = s.at("full_scale").get<double>();
        }
        report.settings.max_frames = s.at("max_frames").get<std::size_t>();
        report.settings.snr_cap_db = s.at("snr_cap_db").get<double>();
        const auto& f = s.at("filter");
        if (f.at("kind").get<std::string>() != "windowed-sinc-lowpass") {
            throw InvalidInput("unknown filter kind in report");
        }
        report.settings.filter.cutoff_hz = f.at("cutoff_hz").get<double>();
        report.settings.filter.transition_hz = f.at("transition_hz").get<double>();
        report.settings.filter.stopband_atten_db = f.at("stopband_atten_db").get<double>();
        for (const auto& row : doc.at("entries")) {
            ScanEntry e;
            e.channel.designation = row.at("designation").get<std::string>();
            e.channel.name = row.at("name").get<std::string>();
            e.channel.video_carrier_mhz = row.at("video_carrier_mhz").get<double>();
            e.status = parse_status(row.at("status").get<std::string>());
            e.snr1 = optional_measurement_from(row.at("snr1"));
            e.snr2 = optional_measurement_from(row.at("snr2"));
            e.note = row.value("note", std::string{});
            report.entries.push_back(std::move(e));
        }
        return report;
    } catch (const json::exception& e) {
        throw InvalidInput(fmt::format("malformed report JSON: {}", e.what()));
    }
}

} // namespace vbisnr
