#include "report.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

namespace cli {

std::string format_number(double v) {
    // Rounding residue below this is printed as zero so outputs do not depend on summation order.
    if (std::abs(v) < 1e-12) return "0";
    char buf[48];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
    std::string s(buf, r.ptr);
    return s == "-0" ? "0" : s;
}

namespace {

std::string cell_text(const Cell& c) {
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(const std::string& s) const {
            if (s.find_first_of(",\"\n") == std::string::npos) return s;
            std::string q = "\"";
            for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            return q + "\"";
        }
    };
    return std::visit(Visitor{}, c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
    struct Visitor {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(long long v) const { return v; }
        nlohmann::ordered_json operator()(double v) const {
            // Round through the printed form so JSON and CSV carry the same digits.
            const std::string s = format_number(v);
            double x = 0.0;
            std::from_chars(s.data(), s.data() + s.size(), x);
            return x;
        }
        nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    };
    return std::visit(Visitor{}, c);
}

std::string snake(const std::string& s) {
    std::string o;
    for (char ch : s) o += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return o;
}

} // namespace

void write_csv(std::ostream& os, const Report& r) {
    os << "# experiment=" << r.experiment << '\n';
    os << "# version=" << chaintx_version() << '\n';
    for (const auto& [k, v] : r.inputs) os << "# " << k << '=' << cell_text(v) << '\n';
    for (const auto& [k, v] : r.results) os << "# " << k << '=' << cell_text(v) << '\n';
    for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
    os << '\n';
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
        os << '\n';
    }
}

void write_json(std::ostream& os, const Report& r) {
    nlohmann::ordered_json j;
    j["experiment"] = r.experiment;
    j["version"] = chaintx_version();
    auto& inputs = j["inputs"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.inputs) inputs[snake(k)] = cell_json(v);
    auto& results = j["results"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.results) results[snake(k)] = cell_json(v);
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json o = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < r.columns.size(); ++i) o[snake(r.columns[i])] = cell_json(row[i]);
        rows.push_back(std::move(o));
    }
    os << j.dump(2) << '\n';
}

void emit(const Report& r, Format f, const std::optional<std::string>& out) {
    const auto write = [&](std::ostream& os) { f == Format::Csv ? write_csv(os, r) : write_json(os, r); };
    if (!out || out->empty()) {
        write(std::cout);
        std::cout.flush();
        if (!std::cout) throw CliError(kIo, "writing to stdout failed");
        return;
    }
    std::ofstream os(*out, std::ios::binary | std::ios::trunc);
    if (!os) throw CliError(kIo, "cannot open '" + *out + "' for writing");
    write(os);
    os.flush();
    if (!os) throw CliError(kIo, "writing '" + *out + "' failed");
}

} // namespace cli
