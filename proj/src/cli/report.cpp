#include "report.hpp"

#include <charconv>
#include <sstream>

namespace efdiv::cli {

std::string number_text(double x) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace {

std::string scalar_text(const Report& v) {
  if (v.is_number_float()) {
    return number_text(v.get<double>());
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void flatten(const Report& v, const std::string& key, std::vector<std::pair<std::string, std::string>>& out) {
  if (v.is_object()) {
    for (const auto& [k, child] : v.items()) flatten(child, key.empty() ? k : key + "." + k, out);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], key + "[" + std::to_string(i) + "]", out);
  } else {
    out.emplace_back(key, scalar_text(v));
  }
}

}  // namespace

std::string render(const Report& report, Format format) {
  if (format == Format::Json) return report.dump() + "\n";
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  std::ostringstream out;
  if (format == Format::Csv) {
    out << "key,value\n";
    for (const auto& [k, v] : rows) out << csv_escape(k) << ',' << csv_escape(v) << '\n';
  } else {
    for (const auto& [k, v] : rows) out << k << " = " << v << '\n';
  }
  return out.str();
}

std::string render_repro(const std::vector<ReproRow>& rows, bool all_pass, Format format) {
  const auto number = [](double x) { return number_text(x); };
  std::ostringstream out;
  switch (format) {
    case Format::Json: {
      Report r;
      r["command"] = "paper-repro";
      r["pass"] = all_pass;
      r["rows"] = Report::array();
      for (const auto& row : rows) {
        Report j;
        j["name"] = row.name;
        j["published"] = row.published;
        j["recomputed"] = row.recomputed;
        j["tolerance"] = row.tolerance;
        j["pass"] = row.pass;
        r["rows"].push_back(std::move(j));
      }
      out << r.dump() << '\n';
      break;
    }
    case Format::Csv:
      out << "name,published,recomputed,tolerance,pass\n";
      for (const auto& row : rows) {
        out << csv_escape(row.name) << ',' << csv_escape(row.published) << ',' << number(row.recomputed) << ','
            << csv_escape(row.tolerance) << ',' << (row.pass ? "pass" : "FAIL") << '\n';
      }
      break;
    case Format::Plain: {
      std::size_t name_width = 4;
      std::size_t published_width = 9;
      for (const auto& row : rows) {
        name_width = std::max(name_width, row.name.size());
        published_width = std::max(published_width, row.published.size());
      }
      const auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size(), ' '); };
      out << pad("name", name_width) << "  " << pad("published", published_width) << "  " << pad("recomputed", 24)
          << "  tolerance\n";
      for (const auto& row : rows) {
        out << pad(row.name, name_width) << "  " << pad(row.published, published_width) << "  "
            << pad(number(row.recomputed), 24) << "  " << row.tolerance << "  " << (row.pass ? "pass" : "FAIL")
            << '\n';
      }
      out << (all_pass ? "all constants reproduced\n" : "some constants NOT reproduced\n");
      break;
    }
  }
  return out.str();
}

}  // namespace efdiv::cli
