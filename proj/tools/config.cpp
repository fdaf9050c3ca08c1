#include "config.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <functional>
#include <map>
#include <memory>

namespace cli {

void check(chaintx_status s) {
    switch (s) {
    case CHAINTX_OK: return;
    case CHAINTX_INVALID_ARGUMENT: throw CliError(kUsage, chaintx_last_error());
    case CHAINTX_NUMERICAL: throw CliError(kNumerical, chaintx_last_error());
    case CHAINTX_IO: throw CliError(kIo, chaintx_last_error());
    case CHAINTX_INTERNAL: break;
    }
    throw CliError(kInternal, chaintx_last_error());
}

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw CliError(kUsage, "format: expected csv or json, got '" + s + "'");
}

namespace {

[[noreturn]] void bad_field(const std::string& key, const std::string& expect, const std::string& got) {
    throw CliError(kUsage, "config field '" + key + "': expected " + expect + ", got '" + got + "'");
}

double parse_real(const std::string& key, const std::string& v) {
    double x = 0.0;
    const char* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, x);
    if (r.ec != std::errc{} || r.ptr != end || !std::isfinite(x)) bad_field(key, "a finite number", v);
    return x;
}

std::size_t parse_count(const std::string& key, const std::string& v) {
    std::size_t x = 0;
    const char* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, x);
    if (r.ec != std::errc{} || r.ptr != end) bad_field(key, "a non-negative integer", v);
    return x;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        const auto comma = v.find(',', pos);
        const std::string item = trim(v.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (item.empty()) bad_field(key, "a comma-separated list of numbers", v);
        out.push_back(parse_real(key, item));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

bool is_family(const std::string& s) {
    chaintx_family f;
    return chaintx_parse_family(s.c_str(), &f) == CHAINTX_OK;
}

} // namespace

RunConfig load_config(const std::string& path) {
    chaintx_kv* raw = nullptr;
    check(chaintx_kv_parse_file(path.c_str(), &raw));
    const std::unique_ptr<chaintx_kv, decltype(&chaintx_kv_destroy)> kv(raw, chaintx_kv_destroy);

    RunConfig c;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    const auto real = [](std::optional<double>& f) -> Setter {
        return [&f](const std::string& k, const std::string& v) { f = parse_real(k, v); };
    };
    const auto count = [](std::optional<std::size_t>& f) -> Setter {
        return [&f](const std::string& k, const std::string& v) { f = parse_count(k, v); };
    };
    const auto text = [](std::optional<std::string>& f) -> Setter {
        return [&f](const std::string&, const std::string& v) { f = v; };
    };
    const std::map<std::string, Setter> fields = {
        {"N", count(c.n)},
        {"profile", text(c.profile)},
        {"J", real(c.j)},
        {"J0", real(c.j0)},
        {"scale", real(c.scale)},
        {"couplings", [&c](const std::string& k, const std::string& v) { c.couplings = parse_list(k, v); }},
        {"g", real(c.g)},
        {"k", count(c.k)},
        {"order", text(c.order)},
        {"tau", real(c.tau)},
        {"t0", real(c.t0)},
        {"t1", real(c.t1)},
        {"step", real(c.step)},
        {"delta", real(c.delta)},
        {"eps", real(c.eps)},
        {"family", text(c.family)},
        {"state", text(c.state)},
        {"n_min", count(c.n_min)},
        {"n_max", count(c.n_max)},
        {"format", text(c.format)},
        {"out", text(c.out)},
    };

    for (std::size_t i = 0; i < chaintx_kv_size(kv.get()); ++i) {
        const char *key = nullptr, *value = nullptr;
        std::size_t line = 0;
        check(chaintx_kv_entry(kv.get(), i, &key, &value, &line));
        const auto it = fields.find(key);
        if (it == fields.end())
            throw CliError(kUsage, path + ":" + std::to_string(line) + ": unknown config field '" + key + "'");
        it->second(key, value);
    }

    if (c.g && *c.g == 0.0) bad_field("g", "a non-zero number", "0");
    if (c.format) parse_format(*c.format);
    if (c.order) {
        chaintx_order o;
        if (chaintx_parse_order(c.order->c_str(), &o) != CHAINTX_OK) bad_field("order", "direct or mirror", *c.order);
    }
    if (c.family && !is_family(*c.family)) bad_field("family", "single, two-spin or three-spin", *c.family);
    return c;
}

std::size_t require_n(const RunConfig& c) {
    if (!c.n) throw CliError(kUsage, "config field 'N' is required");
    if (*c.n < 2) bad_field("N", "at least 2", std::to_string(*c.n));
    return *c.n;
}

chaintx_profile resolve_profile(const RunConfig& c, std::size_t n, std::vector<double>& storage) {
    const std::string name = c.profile.value_or("uniform");
    chaintx_profile p{};
    const auto need = [](const std::optional<double>& v, const char* key, const std::string& prof) {
        if (!v) throw CliError(kUsage, std::string("config field '") + key + "' is required for profile " + prof);
        return *v;
    };
    if (name == "uniform") {
        p.kind = CHAINTX_PROFILE_UNIFORM;
        p.j = c.j.value_or(-1.0);
    } else if (name == "weak-ends") {
        p.kind = CHAINTX_PROFILE_WEAK_ENDS;
        p.j = c.j.value_or(-1.0);
        p.j0 = need(c.j0, "J0", name);
    } else if (name == "perfect-transfer") {
        p.kind = CHAINTX_PROFILE_PERFECT_TRANSFER;
        p.scale = c.scale.value_or(1.0);
    } else if (name == "custom") {
        p.kind = CHAINTX_PROFILE_CUSTOM;
        if (!c.couplings) throw CliError(kUsage, "config field 'couplings' is required for profile custom");
        storage = *c.couplings;
        if (storage.size() + 1 != n)
            bad_field("couplings", std::to_string(n - 1) + " values for N=" + std::to_string(n),
                      std::to_string(storage.size()) + " values");
        p.couplings = storage.data();
        p.n_couplings = storage.size();
    } else {
        bad_field("profile", "uniform, weak-ends, perfect-transfer or custom", name);
    }
    return p;
}

std::string profile_label(const chaintx_profile& p) {
    switch (p.kind) {
    case CHAINTX_PROFILE_UNIFORM: return "uniform";
    case CHAINTX_PROFILE_WEAK_ENDS: return "weak-ends";
    case CHAINTX_PROFILE_PERFECT_TRANSFER: return "perfect-transfer";
    case CHAINTX_PROFILE_CUSTOM: return "custom";
    }
    return "unknown";
}

chaintx_encoding resolve_encoding(const RunConfig& c, std::size_t n, std::size_t default_k) {
    chaintx_encoding e{c.k.value_or(default_k), CHAINTX_ORDER_DIRECT};
    if (c.order) check(chaintx_parse_order(c.order->c_str(), &e.order));
    if (e.k < 1 || 2 * e.k > n)
        bad_field("k", "1 <= k <= N/2 (N=" + std::to_string(n) + ")", std::to_string(e.k));
    return e;
}

Window resolve_window(const RunConfig& c, Window defaults) {
    const Window w{c.t0.value_or(defaults.t0), c.t1.value_or(defaults.t1), c.step.value_or(defaults.step)};
    if (!(w.t0 < w.t1)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "[%g, %g]", w.t0, w.t1);
        bad_field("t0/t1", "a non-empty window t0 < t1", buf);
    }
    if (!(w.step > 0.0)) bad_field("step", "a positive number", std::to_string(w.step));
    return w;
}

InitialState resolve_state(const RunConfig& c, std::size_t n, const std::string& fallback) {
    const std::string spec = c.state.value_or(fallback);
    InitialState s;
    s.label = spec;
    s.re.assign(n, 0.0);
    chaintx_family f;
    if (chaintx_parse_family(spec.c_str(), &f) == CHAINTX_OK) {
        s.width = chaintx_family_width(f);
        if (n < s.width) bad_field("state", "a family that fits N=" + std::to_string(n), spec);
        check(chaintx_family_state(f, n, s.re.data(), nullptr));
        return s;
    }
    const auto amps = parse_list("state", spec);
    if (amps.size() > n) bad_field("state", "at most N=" + std::to_string(n) + " amplitudes", spec);
    double norm2 = 0.0;
    for (std::size_t j = 0; j < amps.size(); ++j) {
        s.re[j] = amps[j];
        norm2 += amps[j] * amps[j];
        if (amps[j] != 0.0) s.width = j + 1;
    }
    if (norm2 == 0.0) bad_field("state", "a non-zero amplitude list", spec);
    return s;
}

} // namespace cli
