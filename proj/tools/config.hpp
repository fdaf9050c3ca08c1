#pragma once

#include "chaintx/chaintx.h"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

enum ExitCode { kOk = 0, kInternal = 1, kUsage = 2, kNumerical = 3, kIo = 4 };

class CliError : public std::runtime_error {
public:
    CliError(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ExitCode code() const { return code_; }

private:
    ExitCode code_;
};

/// Throws CliError with the exit code matching a failing library status.
void check(chaintx_status s);

enum class Format { Csv, Json };
Format parse_format(const std::string& s);

/// Flat `key = value` run description. Unset fields fall back to per-command defaults.
struct RunConfig {
    std::optional<std::size_t> n;
    std::optional<std::string> profile; // uniform | weak-ends | perfect-transfer | custom
    std::optional<double> j, j0, scale;
    std::optional<std::vector<double>> couplings;
    std::optional<double> g;
    std::optional<std::size_t> k;
    std::optional<std::string> order;
    std::optional<double> tau;
    std::optional<double> t0, t1, step;
    std::optional<double> delta, eps;
    std::optional<std::string> family;
    std::optional<std::string> state; // family name or comma-separated real amplitudes
    std::optional<std::size_t> n_min, n_max;
    std::optional<std::string> format;
    std::optional<std::string> out;
};

RunConfig load_config(const std::string& path);

/// Profile description validated against N; `storage` keeps custom couplings alive.
chaintx_profile resolve_profile(const RunConfig& c, std::size_t n, std::vector<double>& storage);
std::string profile_label(const chaintx_profile& p);

std::size_t require_n(const RunConfig& c);
chaintx_encoding resolve_encoding(const RunConfig& c, std::size_t n, std::size_t default_k);

struct Window {
    double t0, t1, step;
};
Window resolve_window(const RunConfig& c, Window defaults);

/// Initial state: `state` may name a family or list real amplitudes; defaults to `fallback`.
struct InitialState {
    std::string label;
    std::vector<double> re;
    std::size_t width = 1; // smallest k holding the state
};
InitialState resolve_state(const RunConfig& c, std::size_t n, const std::string& fallback);

} // namespace cli
