#include "sigbound/reportio.hpp"

#include "sigbound/error.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

namespace sigbound::io {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), 0, 0, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Splits on '\n', keeping 1-based line numbers.
template <class F>
void for_each_line(std::string_view text, F&& f) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto end = nl == std::string_view::npos ? text.size() : nl;
        ++line_no;
        std::string_view line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (nl == std::string_view::npos) {
            if (!line.empty()) f(line, line_no);
            break;
        }
        f(line, line_no);
        pos = nl + 1;
    }
}

}  // namespace

Matrix parse_csv_matrix(std::string_view text, const std::string& source) {
    std::vector<double> data;
    std::size_t cols = 0;
    std::size_t rows = 0;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        if (trim(line).empty()) return;
        std::size_t count = 0;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            const auto end = comma == std::string_view::npos ? line.size() : comma;
            const std::string_view cell = trim(line.substr(start, end - start));
            const std::size_t column = start + 1;
            double value = 0.0;
            const char* first = cell.data();
            const char* last = cell.data() + cell.size();
            if (!cell.empty() && *first == '+') ++first;
            const auto res = std::from_chars(first, last, value);
            if (cell.empty() || res.ec != std::errc() || res.ptr != last) {
                throw ParseError(source, line_no, column,
                                 "non-numeric cell '" + std::string(cell) + "'");
            }
            if (!std::isfinite(value)) {
                throw ParseError(source, line_no, column, "non-finite value");
            }
            data.push_back(value);
            ++count;
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (rows == 0) {
            cols = count;
        } else if (count != cols) {
            throw ParseError(source, line_no, 0,
                             "ragged row: " + std::to_string(count) + " cells, expected " +
                                 std::to_string(cols));
        }
        ++rows;
    });
    if (rows == 0) throw ParseError(source, 0, 0, "empty matrix file");
    return Matrix(rows, cols, std::move(data));
}

std::string matrix_to_csv(const Matrix& m) {
    std::string out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) out += ',';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    return out;
}

std::filesystem::path sidecar_path(const std::filesystem::path& matrix_path) {
    return matrix_path.string() + ".json";
}

json provenance_to_json(const Provenance& p, std::size_t n, std::size_t d) {
    json j;
    j["n"] = n;
    j["d"] = d;
    j["provenance"] = std::string(to_string(p.kind));
    j["s"] = p.slack_columns;
    j["k"] = p.k ? json(*p.k) : json(nullptr);
    j["seed"] = p.seed ? json(*p.seed) : json(nullptr);
    return j;
}

Provenance provenance_from_json(const json& j) {
    Provenance p;
    const auto kind = parse_provenance_kind(j.value("provenance", std::string("random")));
    if (!kind) throw DomainError("unknown provenance '" + j.at("provenance").get<std::string>() + "'");
    p.kind = *kind;
    p.slack_columns = j.value("s", std::size_t{0});
    if (j.contains("k") && !j["k"].is_null()) p.k = j["k"].get<std::size_t>();
    if (j.contains("seed") && !j["seed"].is_null()) p.seed = j["seed"].get<std::uint64_t>();
    return p;
}

WeightMatrix parse_matrix(const std::filesystem::path& path) {
    Matrix m = parse_csv_matrix(read_file(path), path.string());
    Provenance p;
    const auto side = sidecar_path(path);
    if (std::filesystem::exists(side)) {
        json j;
        try {
            j = json::parse(read_file(side));
            p = provenance_from_json(j);
        } catch (const json::exception& e) {
            throw ParseError(side.string(), 0, 0, e.what());
        } catch (const DomainError& e) {
            throw ParseError(side.string(), 0, 0, e.what());
        }
        if (j.value("n", m.rows()) != m.rows() || j.value("d", m.cols()) != m.cols()) {
            throw ParseError(side.string(), 0, 0, "sidecar shape does not match the CSV");
        }
    }
    try {
        return WeightMatrix(std::move(m), p);
    } catch (const DomainError& e) {
        throw ParseError(path.string(), 0, 0, e.what());
    }
}

void write_matrix(const std::filesystem::path& path, const WeightMatrix& w) {
    write_file(path, matrix_to_csv(w.values()));
    write_file(sidecar_path(path), provenance_to_json(w.provenance(), w.n(), w.d()).dump(2) + "\n");
}

namespace {

std::optional<std::size_t> parse_header(std::string_view line) {
    if (line.substr(0, 2) != "n=") return std::nullopt;
    std::size_t n = 0;
    const auto body = trim(line.substr(2));
    const auto res = std::from_chars(body.data(), body.data() + body.size(), n);
    if (res.ec != std::errc() || res.ptr != body.data() + body.size()) return std::nullopt;
    return n;
}

LabelAssignment parse_sparse(std::string_view list, std::size_t list_offset, std::size_t n,
                             const std::string& source, std::size_t line_no) {
    std::vector<std::size_t> active;
    std::size_t start = 0;
    if (trim(list).empty()) return LabelAssignment::all_inactive(n);
    while (true) {
        const auto comma = list.find(',', start);
        const auto end = comma == std::string_view::npos ? list.size() : comma;
        const auto cell = trim(list.substr(start, end - start));
        const std::size_t column = list_offset + start + 1;
        std::size_t index = 0;
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), index);
        if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
            throw ParseError(source, line_no, column,
                             "illegal label index '" + std::string(cell) + "'");
        }
        if (index < 1 || index > n) {
            throw ParseError(source, line_no, column,
                             "index " + std::to_string(index) + " out of range 1.." +
                                 std::to_string(n));
        }
        active.push_back(index);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return LabelAssignment::from_active(n, active);
}

bool looks_dense(std::string_view line) {
    return !line.empty() && (line[0] == '+' || line[0] == '-' || line[0] == '\xE2');
}

}  // namespace

std::vector<LabelAssignment> parse_labels_text(std::string_view text, const std::string& source) {
    std::vector<LabelAssignment> out;
    std::optional<std::size_t> header;
    std::optional<std::size_t> width;
    bool first_content = true;

    for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
        const std::string_view line = trim(raw);
        if (!line.empty() && line[0] == '#') return;
        if (first_content && line.empty()) return;

        if (first_content) {
            first_content = false;
            if (line.find(';') == std::string_view::npos) {
                if (auto n = parse_header(line)) {
                    if (*n == 0) throw ParseError(source, line_no, 1, "header needs n >= 1");
                    header = *n;
                    width = *n;
                    return;
                }
            }
        }

        if (line.empty()) {
            if (!header) return;  // blank separators in dense files
            out.push_back(LabelAssignment::all_inactive(*header));
            return;
        }

        if (looks_dense(line)) {
            try {
                out.push_back(LabelAssignment::from_dense(line));
            } catch (const DomainError& e) {
                throw ParseError(source, line_no, 0, e.what());
            }
        } else if (const auto semi = line.find(';'); semi != std::string_view::npos) {
            const auto n = parse_header(trim(line.substr(0, semi)));
            if (!n || *n == 0) throw ParseError(source, line_no, 1, "malformed inline 'n=<int>'");
            if (header && *n != *header) {
                throw ParseError(source, line_no, 1, "inline n disagrees with header");
            }
            const auto offset = static_cast<std::size_t>(line.data() - raw.data()) + semi + 1;
            out.push_back(parse_sparse(line.substr(semi + 1), offset, *n, source, line_no));
        } else if (std::isdigit(static_cast<unsigned char>(line[0]))) {
            if (!header) {
                throw ParseError(source, line_no, 1, "sparse labels need an 'n=<int>' header");
            }
            const auto offset = static_cast<std::size_t>(line.data() - raw.data());
            out.push_back(parse_sparse(line, offset, *header, source, line_no));
        } else {
            throw ParseError(source, line_no, 1,
                             "illegal character '" + std::string(1, line[0]) + "'");
        }

        if (!width) width = out.back().size();
        if (out.back().size() != *width) {
            throw ParseError(source, line_no, 0,
                             "assignment has " + std::to_string(out.back().size()) +
                                 " labels, expected " + std::to_string(*width));
        }
    });
    return out;
}

std::vector<LabelAssignment> parse_labels(const std::filesystem::path& path) {
    return parse_labels_text(read_file(path), path.string());
}

std::string labels_to_dense(std::span<const LabelAssignment> ys) {
    std::string out;
    for (const auto& y : ys) out += y.to_dense() + "\n";
    return out;
}

std::string labels_to_sparse(std::span<const LabelAssignment> ys) {
    if (ys.empty()) return {};
    std::string out = "n=" + std::to_string(ys.front().size()) + "\n";
    for (const auto& y : ys) {
        const auto idx = y.active_indices();
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (i > 0) out += ',';
            out += std::to_string(idx[i]);
        }
        out += '\n';
    }
    return out;
}

Matrix parse_scores(const std::filesystem::path& path) {
    return parse_csv_matrix(read_file(path), path.string());
}

std::vector<PredictionRecord> make_records(const Matrix& scores,
                                           std::span<const LabelAssignment> gold) {
    if (scores.rows() != gold.size()) {
        throw DimensionError("score file has " + std::to_string(scores.rows()) +
                             " records, gold file has " + std::to_string(gold.size()));
    }
    std::vector<PredictionRecord> out;
    out.reserve(gold.size());
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const auto row = scores.row(i);
        out.push_back({std::vector<double>(row.begin(), row.end()), gold[i]});
        out.back().validate();
    }
    return out;
}

std::string serialize(const ReportEnvelope& report) {
    json j = report.payload.is_object() ? report.payload : json::object();
    j["schema_version"] = report.schema_version;
    j["tool_version"] = report.tool_version;
    j["command"] = report.command;
    j["config"] = report.config;
    j["timestamp"] = report.timestamp ? json(*report.timestamp) : json(nullptr);
    return j.dump(2) + "\n";
}

ReportEnvelope parse_report(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("<report>", 0, static_cast<std::size_t>(e.byte), e.what());
    }
    if (!j.is_object()) throw ParseError("<report>", 0, 0, "report is not a JSON object");
    ReportEnvelope r;
    try {
        r.schema_version = j.at("schema_version").get<int>();
        r.tool_version = j.at("tool_version").get<std::string>();
        r.command = j.at("command").get<std::string>();
        r.config = j.at("config");
        const auto& ts = j.at("timestamp");
        if (!ts.is_null()) r.timestamp = ts.get<std::string>();
    } catch (const json::exception& e) {
        throw ParseError("<report>", 0, 0, std::string("bad envelope: ") + e.what());
    }
    for (const char* key : {"schema_version", "tool_version", "command", "config", "timestamp"}) {
        j.erase(key);
    }
    r.payload = std::move(j);
    return r;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json lp_config_to_json(const LpConfig& cfg) {
    return {{"box_bound", cfg.box_bound},
            {"eps_floor", cfg.eps_floor},
            {"solver_feas_tol", cfg.solver_feas_tol}};
}

json matrix_summary_json(const WeightMatrix& w) {
    json j = provenance_to_json(w.provenance(), w.n(), w.d());
    return j;
}

json verify_result_json(std::size_t index, const VerifyResult& r, bool include_timing) {
    json j;
    j["index"] = index;
    j["status"] = std::string(to_string(r.status));
    j["radius"] = r.radius;
    j["radius_upper_bound"] = r.radius_upper_bound;
    j["ball_exceeds_box"] = r.ball_exceeds_box;
    j["witness"] = r.witness;
    j["seconds"] = include_timing ? r.seconds : 0.0;
    if (!r.reason.empty()) j["reason"] = r.reason;
    return j;
}

json batch_summary_json(const BatchSummary& s) {
    return {{"argmaxable", s.argmaxable},
            {"one_argmaxable", s.one_argmaxable},
            {"not_eps", s.not_eps},
            {"indeterminate", s.indeterminate},
            {"errors", s.errors}};
}

json region_set_json(const RegionSet& regions) {
    json members = json::array();
    for (const auto& y : regions.members) members.push_back(y.to_dense());
    return {{"n", regions.n},
            {"d", regions.d},
            {"method", std::string(to_string(regions.method))},
            {"count", regions.members.size()},
            {"cover_count", cover_count(regions.n, regions.d).str()},
            {"general_position", regions.general_position},
            {"budget_hit", regions.budget_hit},
            {"samples_used", regions.samples_used},
            {"boundary_draws", regions.boundary_draws},
            {"members", members}};
}

json gr_status_json(const GrStatus& status, bool general_position, double tau_det) {
    return {{"verdict", std::string(to_string(status.verdict))},
            {"uniform", status.uniform()},
            {"general_position", general_position},
            {"tau_det", tau_det},
            {"min_abs_minor", status.min_abs_minor},
            {"min_relative_minor", status.min_relative_minor},
            {"checked_minors", status.checked_minors},
            {"positive_minors", status.positive_minors},
            {"negative_minors", status.negative_minors}};
}

}  // namespace sigbound::io
