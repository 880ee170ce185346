#pragma once

#include "vbisnr/scan.hpp"

#include <string>
#include <string_view>

namespace vbisnr {

enum class ReportFormat { Csv, Json, Table };

[[nodiscard]] ReportFormat parse_report_format(std::string_view text);

/// csv: designation,name,freq_mhz,snr1_db,snr2_db,error1_db,error2_db,n_samples,status
///      with shortest round-trip number formatting.
/// json: full report, readable by report_from_json.
/// table: one row per channel, dB values to one decimal.
[[nodiscard]] std::string render_report(const ScanReport& report, ReportFormat format);

[[nodiscard]] ScanReport report_from_json(std::string_view text);

} // namespace vbisnr
