#include <charconv>
#include <cmath>
#include <map>
#include <string>

#include "pleatlab/cli.hpp"
#include "pleatlab/errors.hpp"

namespace pleatlab::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_number(std::string_view s, std::string_view what) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw DomainError("cannot read a number for " + std::string(what) + " from '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  return out;
}

int to_int(double v, std::string_view what) {
  if (v != std::round(v)) throw InadmissibleParameter(std::string(what) + " must be an integer");
  return static_cast<int>(v);
}

}  // namespace

std::pair<std::string, double> parse_param(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw DomainError("parameter must be name=value, got '" + std::string(text) + "'");
  const std::string name(trim(text.substr(0, eq)));
  if (name.empty()) throw DomainError("parameter name is empty");
  return {name, to_number(text.substr(eq + 1), name)};
}

OracleId parse_oracle_id(std::string_view text) {
  const auto colon = text.find(':');
  const std::string family(trim(text.substr(0, colon)));
  std::map<std::string, double> kv;
  if (colon != std::string_view::npos)
    for (std::string_view item : split(text.substr(colon + 1), ',')) {
      const auto [k, v] = parse_param(item);
      kv[k] = v;
    }
  auto need = [&](const char* key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw DomainError("oracle " + family + " needs " + key + "=...");
    return it->second;
  };
  auto check_keys = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : kv) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || k == a;
      if (!ok) throw DomainError("oracle " + family + " has no parameter " + k);
    }
  };
  OracleId id;
  if (family == "cubic") {
    check_keys({"b"});
    id = OracleId::cubic(need("b"));
  } else if (family == "wellfolded") {
    check_keys({"alpha"});
    id = OracleId::wellfolded(need("alpha"));
  } else if (family == "node_nonres") {
    check_keys({"beta", "b"});
    id = OracleId::node_nonres(kv.count("b") ? node_beta(kv["b"]) : need("beta"));
  } else if (family == "node_res") {
    check_keys({"n", "eps"});
    id = OracleId::node_res(to_int(need("n"), "n"), kv.count("eps") ? to_int(kv["eps"], "eps") : 0);
  } else {
    throw DomainError("unknown oracle family '" + family + "'");
  }
  make_oracle(id);  // admissibility
  return id;
}

std::vector<double> parse_sweep(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || trim(text.substr(0, eq)) != "b")
    throw DomainError("sweep must look like b=v1,v2,...");
  std::vector<double> out;
  for (std::string_view item : split(text.substr(eq + 1), ',')) out.push_back(to_number(item, "b"));
  if (out.empty()) throw DomainError("empty sweep");
  return out;
}

std::pair<double, double> parse_window(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() == 1) {
    const double h = to_number(parts[0], "window");
    if (!(h > 0.0)) throw DomainError("window must be positive");
    return {h, h};
  }
  if (parts.size() != 2) throw DomainError("window must be 'h' or 'xh,ph'");
  const double xh = to_number(parts[0], "window"), ph = to_number(parts[1], "window");
  if (!(xh > 0.0) || !(ph > 0.0)) throw DomainError("window must be positive");
  return {xh, ph};
}

Epsilon parse_epsilon(std::string_view text) {
  if (text == "0") return Epsilon::Zero;
  if (text == "1") return Epsilon::One;
  if (text == "unknown") return Epsilon::Unknown;
  throw DomainError("epsilon must be 0, 1 or unknown");
}

}  // namespace pleatlab::cli
