#include "liouville/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "liouville/error.hpp"

namespace liouville::io {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::Parse, field + ": " + what);
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) bad(field, "expected a number");
  return j.get<double>();
}

Complex point(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) bad(field, "expected [re, im]");
  return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
}

json point_json(Complex z) { return json::array({z.real(), z.imag()}); }

std::string format(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view s, const std::string& where) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) bad(where, "not a number: '" + std::string(s) + "'");
  return x;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void ensure_parent(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create directory " + path.parent_path().string() + ": " + ec.message());
}

}  // namespace

SourceConfiguration config_from_json(const json& j) {
  if (!j.is_object()) bad("config", "expected an object");
  SourceConfiguration c;
  if (j.contains("genus")) {
    if (!j["genus"].is_number_integer()) bad("genus", "expected an integer");
    c.genus = j["genus"].get<int>();
  }
  if (j.contains("elliptic")) {
    if (!j["elliptic"].is_array()) bad("elliptic", "expected an array");
    for (std::size_t k = 0; k < j["elliptic"].size(); ++k) {
      const auto& e = j["elliptic"][k];
      const std::string f = "elliptic[" + std::to_string(k) + "]";
      if (!e.is_object() || !e.contains("position") || !e.contains("eta")) bad(f, "expected {position, eta}");
      c.elliptic.push_back({point(e["position"], f + ".position"), number(e["eta"], f + ".eta")});
    }
  }
  if (j.contains("parabolic")) {
    if (!j["parabolic"].is_array()) bad("parabolic", "expected an array");
    for (std::size_t k = 0; k < j["parabolic"].size(); ++k) {
      const auto& e = j["parabolic"][k];
      const std::string f = "parabolic[" + std::to_string(k) + "]";
      if (!e.is_object() || !e.contains("position")) bad(f, "expected {position}");
      c.parabolic.push_back({point(e["position"], f + ".position")});
    }
  }
  if (j.contains("periods")) {
    const auto& p = j["periods"];
    if (!p.is_array() || p.size() != 2) bad("periods", "expected two [re, im] pairs");
    c.periods = {point(p[0], "periods[0]"), point(p[1], "periods[1]")};
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "genus" && key != "elliptic" && key != "parabolic" && key != "periods" && key != "settings") {
      bad(key, "unknown key");
    }
  }
  return c;
}

json to_json(const SourceConfiguration& c) {
  json j;
  j["genus"] = c.genus;
  j["elliptic"] = json::array();
  for (const auto& e : c.elliptic) j["elliptic"].push_back({{"position", point_json(e.position)}, {"eta", e.eta}});
  j["parabolic"] = json::array();
  for (const auto& p : c.parabolic) j["parabolic"].push_back({{"position", point_json(p.position)}});
  if (c.genus == 1) j["periods"] = json::array({point_json(c.periods[0]), point_json(c.periods[1])});
  return j;
}

SolverSettings settings_from_json(const json& j, SolverSettings s) {
  if (!j.is_object()) bad("settings", "expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string f = "settings." + key;
    if (key == "grid" || key == "max_iterations") {
      if (!value.is_number_integer()) bad(f, "expected an integer");
      (key == "grid" ? s.grid : s.max_iterations) = value.get<int>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) bad(f, "expected a non-negative integer");
      s.seed = value.get<std::uint64_t>();
    } else if (key == "truncation_radius") {
      s.truncation_radius = number(value, f);
    } else if (key == "damping") {
      s.damping = number(value, f);
    } else if (key == "tolerance") {
      s.tolerance = number(value, f);
    } else if (key == "convolution") {
      const auto v = value.is_string() ? value.get<std::string>() : std::string{};
      if (v == "auto") {
        s.convolution = ConvolutionMode::Auto;
      } else if (v == "direct") {
        s.convolution = ConvolutionMode::Direct;
      } else if (v == "fft") {
        s.convolution = ConvolutionMode::Fft;
      } else {
        bad(f, "expected auto, direct or fft");
      }
    } else {
      bad(f, "unknown key");
    }
  }
  return s;
}

json to_json(const SolverSettings& s) {
  const char* conv = s.convolution == ConvolutionMode::Direct ? "direct"
                     : s.convolution == ConvolutionMode::Fft  ? "fft"
                                                              : "auto";
  return {{"grid", s.grid},
          {"truncation_radius", s.truncation_radius},
          {"damping", s.damping},
          {"tolerance", s.tolerance},
          {"max_iterations", s.max_iterations},
          {"seed", s.seed},
          {"convolution", conv}};
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

void write_json_atomic(const std::filesystem::path& path, const json& j) {
  ensure_parent(path);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << j.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot move " + tmp.string() + " into place: " + ec.message());
}

void write_csv(const std::filesystem::path& path, const ScalarField& field) {
  ensure_parent(path);
  const Grid& g = field.grid();
  std::string text = "nx,ny,origin_re,origin_im,spacing\n";
  text += std::to_string(g.nx) + ',' + std::to_string(g.ny) + ',' + format(g.origin.real()) + ',' +
          format(g.origin.imag()) + ',' + format(g.spacing) + '\n';
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (i > 0) text += ',';
      text += format(field.at(i, j));
    }
    text += '\n';
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

ScalarField read_csv(const std::filesystem::path& path, bool periodic) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  const std::string where = path.string();
  std::string line;
  if (!std::getline(in, line) || line != "nx,ny,origin_re,origin_im,spacing") bad(where, "missing CSV header");
  if (!std::getline(in, line)) bad(where, "missing grid line");
  const auto head = split(line);
  if (head.size() != 5) bad(where, "grid line needs 5 fields");
  Grid g;
  g.nx = static_cast<int>(parse_double(head[0], where + ":2"));
  g.ny = static_cast<int>(parse_double(head[1], where + ":2"));
  g.origin = {parse_double(head[2], where + ":2"), parse_double(head[3], where + ":2")};
  g.spacing = parse_double(head[4], where + ":2");
  g.periodic = periodic;
  if (g.nx < 4 || g.ny < 4 || !(g.spacing > 0.0)) bad(where, "invalid grid line");
  ScalarField f(g);
  for (int j = 0; j < g.ny; ++j) {
    const std::string at = where + ":" + std::to_string(j + 3);
    if (!std::getline(in, line)) bad(at, "missing row");
    const auto cells = split(line);
    if (cells.size() != static_cast<std::size_t>(g.nx)) bad(at, "expected " + std::to_string(g.nx) + " values");
    for (int i = 0; i < g.nx; ++i) f.at(i, j) = parse_double(cells[i], at);
  }
  return f;
}

void write_ppm(const std::filesystem::path& path, const ScalarField& field) {
  ensure_parent(path);
  const Grid& g = field.grid();
  const auto [lo_it, hi_it] = std::minmax_element(field.values().begin(), field.values().end());
  const double lo = *lo_it, span = *hi_it - *lo_it;
  std::string data = "P6\n" + std::to_string(g.nx) + ' ' + std::to_string(g.ny) + "\n255\n";
  data.reserve(data.size() + 3 * g.size());
  auto byte = [](double x) { return static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * x))); };
  for (int j = g.ny - 1; j >= 0; --j) {
    for (int i = 0; i < g.nx; ++i) {
      const double t = span > 0.0 ? (field.at(i, j) - lo) / span : 0.5;
      // blue (0) → white (½) → red (1)
      const double r = t < 0.5 ? 2.0 * t : 1.0;
      const double b = t < 0.5 ? 1.0 : 2.0 - 2.0 * t;
      const double gr = t < 0.5 ? 2.0 * t : 2.0 - 2.0 * t;
      data += byte(r);
      data += byte(gr);
      data += byte(b);
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << data;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

json to_json(const Diagnostics& d) {
  return {{"iterations", d.iterations},       {"residual", d.residual},
          {"update", d.update},               {"clamps", d.clamps},
          {"bound_violations", d.bound_violations}, {"wall_seconds", d.wall_seconds},
          {"residual_history", d.residuals},  {"step_history", d.damping},
          {"energy_history", d.energies}};
}

json to_json(const VerificationReport& r) {
  json j;
  j["pass"] = r.pass();
  j["area"] = r.area.area;
  j["area_target"] = r.area.target;
  j["area_relative_error"] = r.area.relative_error();
  j["residual_l2"] = r.residual;
  j["sources"] = json::array();
  for (const auto& s : r.asymptotics.sources) {
    json e = {{"kind", s.elliptic ? "elliptic" : "parabolic"},
              {"drift", s.drift},
              {"inner_radius", s.inner_radius},
              {"outer_radius", s.outer_radius}};
    if (s.elliptic) {
      e["fitted_slope"] = s.fitted_slope;
      e["expected_slope"] = s.expected_slope;
    }
    j["sources"].push_back(e);
  }
  if (r.asymptotics.far_field_drift) j["far_field_drift"] = *r.asymptotics.far_field_drift;
  j["functional"] = {{"lower", r.functional.lower},
                     {"at_zero", r.functional.at_zero},
                     {"upper", r.functional.upper},
                     {"at_solution", r.functional.at_solution}};
  if (r.uniqueness) {
    j["uniqueness_spread"] = r.uniqueness->spread;
    j["energy_identity_gap"] = r.uniqueness->gap;
    j["energy_scale"] = r.uniqueness->energy_scale;
    j["monotonicity_violations"] = r.uniqueness->monotonicity_violations;
  }
  j["checks"] = json::array();
  for (const auto& c : r.checks) {
    json e = {{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}};
    if (!c.note.empty()) e["note"] = c.note;
    j["checks"].push_back(e);
  }
  return j;
}

const char* to_string(Method m) { return m == Method::Picard ? "picard" : "variational"; }

}  // namespace liouville::io
