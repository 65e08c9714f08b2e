#include "uagan/io/metrics_csv.hpp"

#include <charconv>

#include "uagan/errors.hpp"
#include "uagan/io/checkpoint.hpp"
#include "uagan/io/run_config.hpp"

namespace uagan {

std::string render_metrics_csv(std::span<const MetricsRecord> records, const std::optional<PhaseReport>& footer) {
    std::string out(kMetricsHeader);
    out += '\n';
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (i > 0 && r.iteration <= records[i - 1].iteration) {
            throw UsageError("metrics iterations must be strictly increasing");
        }
        out += std::to_string(r.iteration);
        for (double v : {r.g_loss, r.mean_fake_prob, r.grad_norm_g, r.diversity}) {
            out += ',';
            out += format_real(v);
        }
        out += ',';
        out += to_string(r.phase);
        out += '\n';
    }
    if (footer) {
        out += "# phase report\n";
        const std::string block = render_phase_report(*footer);
        std::size_t pos = 0;
        while (pos < block.size()) {
            const auto nl = block.find('\n', pos);
            out += "# ";
            out += block.substr(pos, nl - pos);
            out += '\n';
            pos = nl + 1;
        }
    }
    return out;
}

void write_metrics_csv(std::span<const MetricsRecord> records, const std::filesystem::path& path,
                       const std::optional<PhaseReport>& footer) {
    write_text(path, render_metrics_csv(records, footer));
}

std::vector<MetricsRecord> parse_metrics_csv(std::string_view text) {
    std::vector<MetricsRecord> records;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool seen_header = false;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (!seen_header) {
            if (line != kMetricsHeader) throw FormatError(FormatErrorCode::malformed, where + "unexpected header");
            seen_header = true;
            continue;
        }
        if (line.empty() || line.front() == '#') continue;

        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 6) {
            throw FormatError(FormatErrorCode::malformed, where + "expected 6 fields, found " +
                                                              std::to_string(fields.size()));
        }
        MetricsRecord r;
        const auto it = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), r.iteration);
        if (it.ec != std::errc() || it.ptr != fields[0].data() + fields[0].size()) {
            throw FormatError(FormatErrorCode::malformed, where + "bad iteration");
        }
        try {
            r.g_loss = parse_real(fields[1]);
            r.mean_fake_prob = parse_real(fields[2]);
            r.grad_norm_g = parse_real(fields[3]);
            r.diversity = parse_real(fields[4]);
            r.phase = parse_phase(fields[5]);
        } catch (const FormatError& e) {
            throw FormatError(FormatErrorCode::malformed, where + e.what());
        }
        if (!records.empty() && r.iteration <= records.back().iteration) {
            throw FormatError(FormatErrorCode::malformed, where + "iterations out of order");
        }
        records.push_back(r);
    }
    if (!seen_header) throw FormatError(FormatErrorCode::malformed, "line 1: missing header");
    return records;
}

std::vector<MetricsRecord> read_metrics_csv(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    return parse_metrics_csv(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace uagan
