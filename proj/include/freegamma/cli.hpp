#pragma once

// Command layer behind tools/freegamma. Each command writes to a stream and
// returns a process exit code; argument parsing lives in the tool itself.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "freegamma/density.hpp"
#include "freegamma/errors.hpp"
#include "freegamma/landscape.hpp"
#include "freegamma/moments.hpp"
#include "freegamma/verify.hpp"

namespace freegamma::cli {

enum class Command { params, density, moments, mode, verify, limit };
enum class OutputFormat { csv, json };

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kInvalidInput = 2, kNonConvergence = 3 };

struct RunConfig {
  Command command = Command::params;
  std::vector<double> alpha;
  std::optional<double> xi_min;
  std::optional<double> xi_max;
  std::optional<int> points;
  int max_order = 6;
  OutputFormat format = OutputFormat::csv;
  int precision = 12;
  GridKind grid = GridKind::uniform;
  std::optional<double> quad_tol;  // sets both abs_tol and rel_tol

  // Range defaults differ per command: the limit profile needs x > 0.
  double lo() const { return xi_min.value_or(command == Command::limit ? 0.5 : 0.0); }
  double hi() const { return xi_max.value_or(command == Command::limit ? 5.0 : 10.0); }
  int n() const { return points.value_or(command == Command::limit ? 10 : 101); }

  QuadratureSettings quad() const {
    QuadratureSettings q;
    if (quad_tol) q.abs_tol = q.rel_tol = *quad_tol;
    return q;
  }

  void validate() const {
    if (alpha.empty()) throw InvalidInput("at least one alpha is required");
    for (double a : alpha)
      if (!(a > 0.0) || !std::isfinite(a)) throw InvalidInput("alpha must be positive and finite");
    if (!(lo() < hi()) || !std::isfinite(lo()) || !std::isfinite(hi()))
      throw InvalidInput("need finite min < max");
    if (n() < 2) throw InvalidInput("points must be at least 2");
    if (max_order < 1) throw InvalidInput("max-order must be at least 1");
    if (precision < 1 || precision > 17) throw InvalidInput("precision must lie in 1..17");
    if (quad_tol && !(*quad_tol > 0.0)) throw InvalidInput("quad-tol must be positive");
    quad().validate();
  }
};

/// Shortest form of v at `precision` significant digits, locale independent.
inline std::string format_number(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
  return std::string(buf, res.ptr);
}

namespace detail {

using nlohmann::json;

// Numbers go through the same rounding as CSV; non-finite values become null.
inline json number(double v, int precision) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(format_number(v, precision).c_str(), nullptr);
}

// Derived constant, or NaN when it is not representable at this alpha.
template <class Fn>
double or_nan(Fn&& fn) {
  try {
    return fn();
  } catch (const DegenerateSlope&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

class Emitter {
 public:
  Emitter(std::ostream& out, const RunConfig& cfg) : out_(out), cfg_(cfg) {}

  void header(const std::vector<std::string>& cols) {
    cols_ = cols;
    if (cfg_.format == OutputFormat::csv) {
      for (std::size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
      out_ << '\n';
    }
  }

  void row(const std::vector<double>& vals) {
    if (cfg_.format == OutputFormat::csv) {
      for (std::size_t i = 0; i < vals.size(); ++i) out_ << (i ? "," : "") << format_number(vals[i], cfg_.precision);
      out_ << '\n';
    } else {
      json obj = json::object();
      for (std::size_t i = 0; i < vals.size(); ++i) obj[cols_[i]] = number(vals[i], cfg_.precision);
      rows_.push_back(std::move(obj));
    }
  }

  // JSON: a single record prints as a flat object when `flat_single` is set.
  void finish(bool flat_single = false) {
    if (cfg_.format != OutputFormat::json) return;
    if (flat_single && rows_.size() == 1) out_ << rows_[0].dump() << '\n';
    else out_ << rows_.dump() << '\n';
  }

 private:
  std::ostream& out_;
  const RunConfig& cfg_;
  std::vector<std::string> cols_;
  json rows_ = json::array();
};

}  // namespace detail

inline int cmd_params(const RunConfig& cfg, std::ostream& out) {
  detail::Emitter em(out, cfg);
  em.header({"alpha", "c_alpha", "s_alpha", "gamma_alpha", "dc_dalpha", "ds_dalpha", "omega_alpha", "f_at_mode",
             "edge_coefficient", "tail_constant"});
  for (double a : cfg.alpha) {
    const auto ctx = make_context(a, cfg.quad());
    ModeReport mode{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(), 0.0};
    if (ctx.edge_resolved) mode = find_mode(ctx);
    em.row({a, ctx.c_alpha, ctx.s_alpha, ctx.gamma_alpha, detail::or_nan([&] { return dc_dalpha(ctx); }),
            detail::or_nan([&] { return ds_dalpha(ctx); }), mode.omega, mode.f_at_mode,
            detail::or_nan([&] { return edge_coefficient(ctx); }), a * std::exp(a)});
  }
  em.finish(true);
  return kOk;
}

inline int cmd_density(const RunConfig& cfg, std::ostream& out) {
  detail::Emitter em(out, cfg);
  const bool many = cfg.alpha.size() > 1;
  if (many) em.header({"alpha", "xi", "f"});
  else em.header({"xi", "f"});
  for (double a : cfg.alpha) {
    const auto ctx = make_context(a, cfg.quad());
    const auto t = density_table(ctx, cfg.lo(), cfg.hi(), cfg.n(), cfg.grid);
    for (std::size_t i = 0; i < t.xi.size(); ++i) {
      if (many) em.row({a, t.xi[i], t.f[i]});
      else em.row({t.xi[i], t.f[i]});
    }
  }
  em.finish();
  return kOk;
}

/// Cumulants, recursion moments and, up to order 10, moments of the density.
inline int cmd_moments(const RunConfig& cfg, std::ostream& out) {
  detail::Emitter em(out, cfg);
  em.header({"alpha", "p", "cumulant", "moment", "moment_density"});
  for (double a : cfg.alpha) {
    const auto ctx = make_context(a, cfg.quad());
    const auto seq = cumulant_moment_sequence(a, cfg.max_order);
    std::vector<double> dm(cfg.max_order, std::numeric_limits<double>::quiet_NaN());
    if (ctx.edge_resolved) {
      const auto d = moments_from_density(ctx, std::min(cfg.max_order, 10));
      std::copy(d.m.begin(), d.m.end(), dm.begin());
    }
    for (int p = 1; p <= cfg.max_order; ++p) em.row({a, double(p), seq.cumulant(p), seq.moment(p), dm[p - 1]});
  }
  em.finish();
  return kOk;
}

inline int cmd_mode(const RunConfig& cfg, std::ostream& out) {
  detail::Emitter em(out, cfg);
  em.header({"alpha", "omega_alpha", "f_at_mode"});
  for (double a : cfg.alpha) {
    const auto mode = find_mode(make_context(a, cfg.quad()));
    em.row({a, mode.omega, mode.f_at_mode});
  }
  em.finish();
  return kOk;
}

/// (x, f(x)/alpha, e^{-x}/x) on the configured grid.
inline int cmd_limit(const RunConfig& cfg, std::ostream& out) {
  detail::Emitter em(out, cfg);
  em.header({"alpha", "x", "scaled_density", "limit"});
  std::vector<double> xs(cfg.n());
  const double h = (cfg.hi() - cfg.lo()) / (cfg.n() - 1);
  for (int i = 0; i < cfg.n(); ++i) xs[i] = cfg.lo() + h * i;
  xs.back() = cfg.hi();
  for (double a : cfg.alpha)
    for (const auto& s : small_alpha_profile(a, xs)) em.row({a, s.x, s.scaled_density, s.limit});
  em.finish();
  return kOk;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  bool ok = true;
  nlohmann::json all = nlohmann::json::array();
  for (double a : cfg.alpha) {
    const auto checks = run_verification(a, cfg.quad());
    ok = ok && all_passed(checks);
    for (const auto& c : checks) {
      const char* tag = c.status == CheckStatus::pass ? "PASS" : (c.status == CheckStatus::fail ? "FAIL" : "SKIP");
      if (cfg.format == OutputFormat::json) {
        all.push_back({{"alpha", detail::number(a, cfg.precision)},
                       {"check", c.name},
                       {"status", tag},
                       {"measured", detail::number(c.measured, cfg.precision)},
                       {"threshold", detail::number(c.threshold, cfg.precision)},
                       {"note", c.note}});
        continue;
      }
      out << tag << " alpha=" << format_number(a, cfg.precision) << ' ' << c.name;
      if (c.status != CheckStatus::skip)
        out << ": " << format_number(c.measured, 4) << " < " << format_number(c.threshold, 4);
      if (!c.note.empty()) out << " (" << c.note << ')';
      out << '\n';
    }
  }
  if (cfg.format == OutputFormat::json) out << all.dump() << '\n';
  return ok ? kOk : kVerifyFailed;
}

/// Validates, dispatches and maps library errors onto exit codes.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    switch (cfg.command) {
      case Command::params: return cmd_params(cfg, out);
      case Command::density: return cmd_density(cfg, out);
      case Command::moments: return cmd_moments(cfg, out);
      case Command::mode: return cmd_mode(cfg, out);
      case Command::verify: return cmd_verify(cfg, out);
      case Command::limit: return cmd_limit(cfg, out);
    }
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const DomainViolation& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNonConvergence;
  }
  return kInvalidInput;
}

}  // namespace freegamma::cli
