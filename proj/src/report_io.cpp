#include "nu/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nu/error.hpp"

namespace nu {
namespace {

using nlohmann::json;

constexpr int kSchema = 1;

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string optional_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

// Rejects keys outside `allowed` and requires every key in it.
void expect_keys(const json& obj, const std::set<std::string>& allowed,
                 const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + ": expected an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ValidationError(where + ": unknown field \"" + item.key() + "\"");
    }
  }
  for (const auto& key : allowed) {
    if (!obj.contains(key)) {
      throw ValidationError(where + ": missing field \"" + key + "\"");
    }
  }
}

template <typename T>
T get_as(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(where + ": field \"" + key + "\" has the wrong type");
  }
}

std::optional<double> get_optional(const json& obj, const std::string& key,
                                   const std::string& where) {
  if (obj.at(key).is_null()) return std::nullopt;
  return get_as<double>(obj, key, where);
}

NuMethod method_from_string(const std::string& s) {
  for (NuMethod m : {NuMethod::kClosedForm2x2, NuMethod::kRing,
                     NuMethod::kOracle, NuMethod::kLowerBoundOnly}) {
    if (to_string(m) == s) return m;
  }
  throw ValidationError("report: unknown nu_exact method \"" + s + "\"");
}

void write_script(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out = open_out(path);
  out << body;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string report_to_json(const RobustnessReport& r) {
  json doc;
  doc["schema"] = kSchema;
  doc["n"] = r.n;
  doc["mu"] = r.mu;
  doc["nubar"] = r.nubar;
  doc["nubar_scaling"] = r.nubar_scaling;
  doc["nubar_witness_cycle"] = r.nubar_witness_cycle;
  doc["nubar_certified"] = r.nubar_certified;
  doc["nu_lower"] = {{"bound", r.nu_lower.bound},
                     {"indices", r.nu_lower.indices},
                     {"exhaustive", r.nu_lower.exhaustive}};
  if (r.nu_exact) {
    doc["nu_exact"] = {{"value", r.nu_exact->value},
                       {"method", std::string(to_string(r.nu_exact->method))},
                       {"witness", r.nu_exact->witness}};
  } else {
    doc["nu_exact"] = nullptr;
  }
  doc["ratios"] = {{"nubar_over_nu_lower", optional_number(r.nubar_over_nu_lower)},
                   {"mu_over_nubar", optional_number(r.mu_over_nubar)}};
  doc["diagnostics"] = {{"diagonally_maximal", r.diagonally_maximal},
                        {"acyclic", r.acyclic}};
  return doc.dump(2) + "\n";
}

RobustnessReport report_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("report: malformed JSON: ") + e.what());
  }
  expect_keys(doc,
              {"schema", "n", "mu", "nubar", "nubar_scaling",
               "nubar_witness_cycle", "nubar_certified", "nu_lower",
               "nu_exact", "ratios", "diagnostics"},
              "report");
  if (get_as<int>(doc, "schema", "report") != kSchema) {
    throw ValidationError("report: unsupported schema version");
  }
  RobustnessReport r;
  r.n = get_as<int>(doc, "n", "report");
  r.mu = get_as<double>(doc, "mu", "report");
  r.nubar = get_as<double>(doc, "nubar", "report");
  r.nubar_scaling = get_as<std::vector<double>>(doc, "nubar_scaling", "report");
  r.nubar_witness_cycle =
      get_as<std::vector<int>>(doc, "nubar_witness_cycle", "report");
  r.nubar_certified = get_as<bool>(doc, "nubar_certified", "report");

  const json& lower = doc["nu_lower"];
  expect_keys(lower, {"bound", "indices", "exhaustive"}, "report.nu_lower");
  r.nu_lower.bound = get_as<double>(lower, "bound", "report.nu_lower");
  r.nu_lower.indices = get_as<std::vector<int>>(lower, "indices", "report.nu_lower");
  r.nu_lower.exhaustive = get_as<bool>(lower, "exhaustive", "report.nu_lower");

  const json& exact = doc["nu_exact"];
  if (!exact.is_null()) {
    expect_keys(exact, {"value", "method", "witness"}, "report.nu_exact");
    RobustnessReport::Exact e;
    e.value = get_as<double>(exact, "value", "report.nu_exact");
    e.method = method_from_string(get_as<std::string>(exact, "method", "report.nu_exact"));
    e.witness = get_as<std::vector<double>>(exact, "witness", "report.nu_exact");
    r.nu_exact = std::move(e);
  }

  const json& ratios = doc["ratios"];
  expect_keys(ratios, {"nubar_over_nu_lower", "mu_over_nubar"}, "report.ratios");
  r.nubar_over_nu_lower = get_optional(ratios, "nubar_over_nu_lower", "report.ratios");
  r.mu_over_nubar = get_optional(ratios, "mu_over_nubar", "report.ratios");

  const json& diag = doc["diagnostics"];
  expect_keys(diag, {"diagonally_maximal", "acyclic"}, "report.diagnostics");
  r.diagonally_maximal = get_as<bool>(diag, "diagonally_maximal", "report.diagnostics");
  r.acyclic = get_as<bool>(diag, "acyclic", "report.diagnostics");
  return r;
}

void write_report(const RobustnessReport& report,
                  const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << report_to_json(report);
}

RobustnessReport read_report(const std::filesystem::path& path) {
  return report_from_json(slurp(path));
}

MagnitudeMatrix parse_matrix_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view content = trim(line);
    if (content.empty()) continue;
    const int row = static_cast<int>(rows.size()) + 1;
    std::vector<double> values;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = content.find(',', start);
      const std::string_view field = trim(content.substr(
          start, comma == std::string_view::npos ? std::string_view::npos
                                                 : comma - start));
      const int col = static_cast<int>(values.size()) + 1;
      const std::string where = "matrix row " + std::to_string(row) +
                                ", column " + std::to_string(col) + " (line " +
                                std::to_string(line_no) + ")";
      double v = 0.0;
      const char* first = field.data();
      const char* last = field.data() + field.size();
      if (!field.empty() && *first == '+') ++first;
      const auto res = std::from_chars(first, last, v);
      if (field.empty() || res.ec != std::errc() || res.ptr != last) {
        throw ValidationError(where + ": not a number: \"" +
                              std::string(field) + "\"");
      }
      if (!std::isfinite(v)) throw ValidationError(where + ": not finite");
      if (v < 0.0) throw ValidationError(where + ": negative entry");
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ValidationError("matrix: no rows");
  const int n = static_cast<int>(rows.size());
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) {
      throw ValidationError("matrix row " + std::to_string(i + 1) + " has " +
                            std::to_string(rows[i].size()) +
                            " columns, expected " + std::to_string(n));
    }
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  return MagnitudeMatrix(n, std::move(flat));
}

MagnitudeMatrix read_matrix(const std::filesystem::path& path) {
  return parse_matrix_csv(slurp(path));
}

void write_matrix(std::ostream& out, const MagnitudeMatrix& m) {
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j < m.n(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix(const MagnitudeMatrix& m, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  write_matrix(out, m);
}

FirSystem parse_system_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("system: malformed JSON: ") + e.what());
  }
  expect_keys(doc, {"n", "entries"}, "system");
  const int n = get_as<int>(doc, "n", "system");
  if (n < 1) throw ValidationError("system: n must be >= 1");
  if (!doc["entries"].is_array()) {
    throw ValidationError("system: \"entries\" must be an array");
  }
  FirSystem sys(n);
  int k = 0;
  for (const json& entry : doc["entries"]) {
    const std::string where = "system.entries[" + std::to_string(k++) + "]";
    expect_keys(entry, {"i", "j", "impulse"}, where);
    const int i = get_as<int>(entry, "i", where);
    const int j = get_as<int>(entry, "j", where);
    if (i < 1 || i > n || j < 1 || j > n) {
      throw ValidationError(where + ": index (" + std::to_string(i) + ", " +
                            std::to_string(j) + ") outside 1.." +
                            std::to_string(n));
    }
    sys.set_impulse(i - 1, j - 1,
                    get_as<std::vector<double>>(entry, "impulse", where));
  }
  return sys;
}

FirSystem read_system(const std::filesystem::path& path) {
  return parse_system_json(slurp(path));
}

void write_grid(std::ostream& out, const std::vector<Grid2x2Record>& records) {
  out << "x,w,y,mu,nu,nubar,ratio_mu_nu,ratio_nubar_nu\n";
  for (const auto& r : records) {
    out << format_double(r.x) << ',' << format_double(r.w) << ','
        << format_double(r.y) << ',' << format_double(r.mu) << ','
        << format_double(r.nu) << ',' << format_double(r.nubar) << ','
        << optional_field(r.ratio_mu_nu) << ','
        << optional_field(r.ratio_nubar_nu) << '\n';
  }
}

void write_grid(const std::vector<Grid2x2Record>& records,
                const std::filesystem::path& path) {
  {
    std::ofstream out = open_out(path);
    write_grid(out, records);
  }
  const std::string csv = path.filename().string();
  write_script(path.string() + ".gp",
               "set datafile separator ','\n"
               "set key autotitle columnhead\n"
               "set xlabel 'w'\n"
               "set multiplot layout 1,2\n"
               "set title 'mu / nu'\n"
               "plot '" + csv + "' using 2:7 with points pt 7 ps 0.5\n"
               "set title 'nubar / nu'\n"
               "plot '" + csv + "' using 2:8 with points pt 7 ps 0.5\n"
               "unset multiplot\n");
}

void write_study(std::ostream& out, const std::vector<StudyRow>& rows) {
  out << "n,theta,tol,max_iters,median_iters,failures\n";
  for (const auto& r : rows) {
    out << r.n << ',' << format_double(r.theta) << ',' << format_double(r.tol)
        << ',' << r.max_iters << ',' << format_double(r.median_iters) << ','
        << r.failures << '\n';
  }
}

void write_study(const std::vector<StudyRow>& rows,
                 const std::filesystem::path& path, const std::string& mode) {
  {
    std::ofstream out = open_out(path);
    write_study(out, rows);
  }
  const std::string csv = path.filename().string();
  const bool by_tol = mode == "tol";
  write_script(path.string() + ".gp",
               std::string("set datafile separator ','\n"
                           "set logscale x\n"
                           "set ylabel 'max iterations'\n") +
                   (by_tol ? "set xlabel 'relative tolerance'\n"
                           : "set xlabel 'n'\n") +
                   "plot for [th in \"0.2 0.3 0.4 0.5 0.6 0.7 0.8 0.9\"] '" +
                   csv + "' every ::1 using " + (by_tol ? "3" : "1") +
                   ":($2 == th ? $4 : 1/0) with linespoints title "
                   "'theta='.th\n");
}

void write_counterexamples(std::ostream& out,
                           const std::vector<StudyCounterexample>& rows) {
  out << "n,theta,trial,seed,tol,iterations,final_objective,nubar,reason\n";
  for (const auto& r : rows) {
    out << r.n << ',' << format_double(r.theta) << ',' << r.trial << ','
        << r.seed << ',' << format_double(r.tol) << ',' << r.iterations << ','
        << format_double(r.final_objective) << ',' << format_double(r.nubar)
        << ',' << r.reason << '\n';
  }
}

void write_trace(std::ostream& out, const BalanceTrace& trace, int n) {
  const bool with_d = n <= 16;
  out << "t,objective,rel_change";
  if (with_d) {
    for (int k = 1; k <= n; ++k) out << ",d" << k;
  }
  out << '\n';
  out << "0," << format_double(trace.initial_objective) << ",";
  if (with_d) {
    for (int k = 0; k < n; ++k) out << ",1";
  }
  out << '\n';
  for (const auto& rec : trace.iterations) {
    out << rec.t << ',' << format_double(rec.objective) << ','
        << format_double(rec.rel_change);
    if (with_d) {
      for (double v : rec.d) out << ',' << format_double(v);
    }
    out << '\n';
  }
}

}  // namespace nu
