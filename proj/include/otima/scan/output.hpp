#pragma once

// Sweep axes, tabular output (CSV / JSON) and an order-preserving parallel map.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "otima/error.hpp"
#include "otima/scan/config.hpp"

namespace otima::scan {

using Json = nlohmann::ordered_json;

enum class Spacing { linear, log10 };

/// "lo:hi:steps". On a log10 axis lo and hi are exponents (e.g. -14:-6:81 for
/// 1e-14 .. 1e-6); the spec therefore never needs lo > 0.
struct SweepSpec {
  std::string axis;
  double lo = 0.0;
  double hi = 0.0;
  int steps = 1;
  Spacing spacing = Spacing::linear;

  double coordinate(int i) const {
    return steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
  }
  double value(int i) const {
    const double x = coordinate(i);
    return spacing == Spacing::log10 ? std::pow(10.0, x) : x;
  }
  std::vector<double> values() const {
    std::vector<double> v(steps);
    for (int i = 0; i < steps; ++i) v[i] = value(i);
    return v;
  }
};

inline SweepSpec parse_sweep(const std::string& text, const std::string& axis, Spacing spacing) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos || text.find(':', b + 1) != std::string::npos)
    throw ConfigError(axis + " range must be lo:hi:steps, got '" + text + "'");
  SweepSpec s;
  s.axis = axis;
  s.spacing = spacing;
  s.lo = parse_double(text.substr(0, a), axis + " range lo");
  s.hi = parse_double(text.substr(a + 1, b - a - 1), axis + " range hi");
  s.steps = parse_int(text.substr(b + 1), axis + " range steps");
  if (!std::isfinite(s.lo) || !std::isfinite(s.hi))
    throw ConfigError(axis + " range bounds must be finite");
  if (s.steps < 1) throw ConfigError(axis + " range needs steps >= 1");
  if (s.steps > 1 && !(s.lo < s.hi)) throw ConfigError(axis + " range needs lo < hi");
  return s;
}

inline std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_double(detail::trim(item), what));
  if (out.empty()) throw ConfigError(what + ": empty list");
  return out;
}

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

/// Schema comment, header row, one line per row; LF endings, %.17g numbers.
inline std::string to_csv(const Table& t) {
  std::string out = "# schema: " + t.schema + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += '\n';
  }
  return out;
}

inline Json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? Json(*d) : Json(nullptr);
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

inline Json to_json(const Table& t) {
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json r = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(r));
  }
  return Json{{"schema", t.schema}, {"rows", std::move(rows)}};
}

/// Scalar report as "key,value" rows, nested objects flattened with dots.
inline std::string report_csv(const Json& report) {
  std::string out = "# schema: " + report.value("schema", std::string("report")) + "\nkey,value\n";
  const auto walk = [&](const auto& self, const Json& j, const std::string& prefix) -> void {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
      if (key == "schema") continue;
      if (it->is_object()) {
        self(self, *it, key);
      } else if (it->is_number_float()) {
        out += key + "," + format_number(it->template get<double>()) + "\n";
      } else if (it->is_null()) {
        out += key + ",nan\n";
      } else if (it->is_string()) {
        out += key + "," + it->template get<std::string>() + "\n";
      } else {
        out += key + "," + it->dump() + "\n";
      }
    }
  };
  walk(walk, report, "");
  return out;
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

/// f(0) .. f(n-1) on up to `jobs` threads; results (and the first exception,
/// by index) come back in index order regardless of scheduling.
template <class F>
auto parallel_map(std::size_t n, int jobs, F&& f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
  const std::size_t workers = std::min<std::size_t>(n, jobs < 1 ? 1 : static_cast<std::size_t>(jobs));
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace otima::scan
