#include "misosud/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "misosud/errors.hpp"

namespace misosud {

namespace {

using nlohmann::json;

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + ": not finite");
  return x;
}

cplx entry(const json& v, const std::string& where) {
  if (v.is_array()) {
    if (v.size() != 2) throw ConfigError(where + ": complex entries are [re, im]");
    return {number(v[0], where), number(v[1], where)};
  }
  return number(v, where);
}

CVector vector_of(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ConfigError(where + ": expected a nonempty array");
  CVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = entry(v[i], where);
  return out;
}

Field field_of(const json& doc, bool force_real, const std::string& where) {
  if (force_real) return Field::real;
  if (!doc.contains("field")) return Field::complex;
  const auto& f = doc["field"];
  if (f == "real") return Field::real;
  if (f == "complex") return Field::complex;
  throw ConfigError(where + ": field must be \"real\" or \"complex\"");
}

void require_real(const CVector& v, const std::string& where) {
  if (!v.is_real()) throw ConfigError(where + ": complex entry in a real-field config");
}

MisoNetwork network_of(const json& doc, bool force_real) {
  const Field field = field_of(doc, force_real, "config");
  const auto& H = doc["channels"];
  if (!H.is_array() || H.size() < 2) throw ConfigError("channels: need one matrix per user, at least 2 users");
  const std::size_t m = H.size();

  if (!doc.contains("powers")) throw ConfigError("config: missing \"powers\"");
  const auto& pw = doc["powers"];
  if (!pw.is_array() || pw.size() != m) throw ConfigError("powers: need one entry per user");
  std::vector<double> powers;
  for (const auto& p : pw) powers.push_back(number(p, "powers"));

  std::vector<std::vector<CVector>> ch(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::string where = "channels[" + std::to_string(j) + "]";
    const auto& rows = H[j];
    if (!rows.is_array() || rows.empty()) throw ConfigError(where + ": expected t x m rows");
    ch[j].assign(m, CVector(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!rows[r].is_array() || rows[r].size() != m)
        throw ConfigError(where + ": every row needs one entry per receiver");
      for (std::size_t i = 0; i < m; ++i) ch[j][i][r] = entry(rows[r][i], where);
    }
    if (field == Field::real)
      for (const auto& h : ch[j]) require_real(h, where);
  }
  return MisoNetwork(std::move(ch), std::move(powers), field);
}

ConstrainedMaxProblem problem_of(const json& doc, bool force_real) {
  ConstrainedMaxProblem p;
  p.field = field_of(doc, force_real, "problem");
  p.target = vector_of(doc.value("target", json()), "problem.target");
  p.P = number(doc.value("P", json()), "problem.P");
  if (doc.contains("caps")) {
    if (!doc["caps"].is_array()) throw ConfigError("problem.caps: expected an array");
    for (const auto& c : doc["caps"]) {
      Cap cap;
      cap.h = vector_of(c.value("h", json()), "problem.caps.h");
      cap.bound = number(c.value("bound", json()), "problem.caps.bound");
      const std::string kind = c.value("kind", "upper");
      if (kind == "equality") cap.kind = CapKind::equality;
      else if (kind == "upper") cap.kind = CapKind::upper;
      else throw ConfigError("problem.caps.kind: \"equality\" or \"upper\"");
      p.caps.push_back(std::move(cap));
    }
  }
  if (p.field == Field::real) {
    require_real(p.target, "problem.target");
    for (const auto& c : p.caps) require_real(c.h, "problem.caps.h");
  }
  return p;
}

// %.17g, but keep the sign of zero (a bare "-0" would parse as integer 0).
std::string num(double x) {
  if (x == 0.0 && std::signbit(x)) return "-0.0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string entry_text(cplx z, Field f) {
  if (f == Field::real) return num(z.real());
  return "[" + num(z.real()) + ", " + num(z.imag()) + "]";
}

std::string vector_text(const CVector& v, Field f) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.dim(); ++i) s += (i ? ", " : "") + entry_text(v[i], f);
  return s + "]";
}

}  // namespace

RunConfig parse_config(const json& doc, bool force_real) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  RunConfig cfg;
  if (doc.contains("channels")) cfg.network = network_of(doc, force_real);
  if (doc.contains("problem")) {
    if (!doc["problem"].is_object()) throw ConfigError("problem: expected an object");
    cfg.problem = problem_of(doc["problem"], force_real);
  }
  if (!cfg.network && !cfg.problem) throw ConfigError("config: needs \"channels\" or \"problem\"");
  if (doc.contains("Q")) {
    const auto& q = doc["Q"];
    if (!q.is_array() || q.size() != 2) throw ConfigError("Q: expected [Q1, Q2]");
    cfg.Q = {number(q[0], "Q"), number(q[1], "Q")};
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, bool force_real) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc, force_real);
}

std::string dump_config(const RunConfig& cfg) {
  std::ostringstream o;
  o << "{\n";
  bool first = true;
  auto sep = [&] {
    if (!first) o << ",\n";
    first = false;
  };
  if (cfg.network) {
    const MisoNetwork& net = *cfg.network;
    const Field f = net.field();
    const std::size_t m = net.users();
    sep();
    o << "  \"field\": \"" << to_string(f) << "\",\n  \"powers\": [";
    for (std::size_t j = 0; j < m; ++j) o << (j ? ", " : "") << num(net.power(j));
    o << "],\n  \"channels\": [";
    for (std::size_t j = 0; j < m; ++j) {
      o << (j ? "," : "") << "\n    [";
      for (std::size_t r = 0; r < net.antennas(j); ++r) {
        o << (r ? ", " : "") << "[";
        for (std::size_t i = 0; i < m; ++i) o << (i ? ", " : "") << entry_text(net.h(j, i)[r], f);
        o << "]";
      }
      o << "]";
    }
    o << "\n  ]";
  }
  if (cfg.Q) {
    sep();
    o << "  \"Q\": [" << num(cfg.Q->first) << ", " << num(cfg.Q->second) << "]";
  }
  if (cfg.problem) {
    const auto& p = *cfg.problem;
    sep();
    o << "  \"problem\": {\n    \"field\": \"" << to_string(p.field) << "\",\n    \"P\": " << num(p.P)
      << ",\n    \"target\": " << vector_text(p.target, p.field) << ",\n    \"caps\": [";
    for (std::size_t k = 0; k < p.caps.size(); ++k) {
      const auto& c = p.caps[k];
      o << (k ? "," : "") << "\n      {\"h\": " << vector_text(c.h, p.field) << ", \"bound\": " << num(c.bound)
        << ", \"kind\": \"" << (c.kind == CapKind::equality ? "equality" : "upper") << "\"}";
    }
    o << "]\n  }";
  }
  o << "\n}\n";
  return o.str();
}

}  // namespace misosud
