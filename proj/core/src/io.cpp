#include "dpcheck/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dpcheck/errors.hpp"

namespace dpcheck {

namespace {

using ordered_json = nlohmann::ordered_json;

bool is_separator(char c) {
  return c == ',' || c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

ordered_json summary_json(const SampleSummary& s) {
  return ordered_json{{"mean", s.mean}, {"median", s.median}, {"q05", s.q05}, {"q95", s.q95}};
}

ordered_json model_json(const FittedModel& m) {
  return ordered_json{{"family", family_name(m.family)}, {"params", m.params}};
}

ordered_json manifest_json(const RunManifest& m) {
  ordered_json j;
  j["input"] = m.input;
  j["generator"] = m.generator;
  j["family"] = family_name(m.family);
  j["a_grid"] = m.a_grid;
  j["N"] = m.N;
  j["M"] = m.M;
  j["i0"] = m.i0;
  j["r1"] = m.r1;
  j["r2"] = m.r2;
  j["seed"] = m.seed;
  j["threads"] = m.threads;
  j["format"] = format_name(m.format);
  return j;
}

// JSON has no infinity literal; the open final edge is the string "inf".
ordered_json edges_json(const std::vector<double>& edges) {
  ordered_json arr = ordered_json::array();
  for (double e : edges) {
    if (std::isinf(e))
      arr.push_back("inf");
    else
      arr.push_back(e);
  }
  return arr;
}

}  // namespace

std::vector<double> ingest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open data file: " + path);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t i = 0;
    while (i < line.size()) {
      if (is_separator(line[i])) {
        ++i;
        continue;
      }
      const std::size_t start = i;
      while (i < line.size() && !is_separator(line[i])) ++i;
      const std::string token = line.substr(start, i - start);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(v))
        throw parse_error("invalid number '" + token + "'", line_no, start + 1);
      values.push_back(v);
    }
  }
  if (values.empty()) throw input_error("data file contains no values: " + path);
  return values;
}

OutputFormat format_from_name(std::string_view name) {
  if (name == "json") return OutputFormat::json;
  if (name == "tsv") return OutputFormat::tsv;
  throw input_error("unknown output format: " + std::string(name));
}

std::string format_name(OutputFormat f) {
  return f == OutputFormat::json ? "json" : "tsv";
}

CheckConfig RunManifest::config_for(double a) const {
  CheckConfig cfg;
  cfg.a = a;
  cfg.N = N;
  cfg.M = M;
  cfg.i0 = i0;
  cfg.r1 = r1;
  cfg.r2 = r2;
  cfg.seed = seed;
  cfg.threads = threads;
  return cfg;
}

std::string format_full(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::string format_display(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", x);
  return buf;
}

std::string reports_to_json(const RunManifest& manifest,
                            const std::vector<RBReport>& reports) {
  ordered_json doc;
  doc["manifest"] = manifest_json(manifest);
  doc["reports"] = ordered_json::array();
  for (const RBReport& r : reports) {
    ordered_json j;
    j["a"] = r.config.a;
    if (!r.error.empty()) {
      j["error"] = r.error;
      doc["reports"].push_back(std::move(j));
      continue;
    }
    j["d_star"] = r.d_star;
    j["rb0"] = r.rb0;
    j["strength"] = r.strength;
    j["at_resolution_limit"] = r.at_resolution_limit;
    j["bin_edges"] = edges_json(r.bin_edges);
    j["bin_rb"] = r.bin_rb;
    j["prior_summary"] = summary_json(r.prior_summary);
    j["posterior_summary"] = summary_json(r.posterior_summary);
    j["model"] = model_json(r.model);
    j["prior_rejected"] = r.prior_rejected;
    j["posterior_rejected"] = r.posterior_rejected;
    j["warnings"] = r.warnings;
    j["display"] = ordered_json{{"a", format_display(r.config.a)},
                                {"d_star", format_display(r.d_star)},
                                {"rb0", format_display(r.rb0)},
                                {"strength", format_display(r.strength)}};
    doc["reports"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::string reports_to_tsv(const RunManifest& manifest,
                           const std::vector<RBReport>& reports) {
  std::ostringstream out;
  out << "# family=" << family_name(manifest.family) << " N=" << manifest.N
      << " M=" << manifest.M << " i0=" << manifest.i0 << " r1=" << manifest.r1
      << " r2=" << manifest.r2 << " seed=" << manifest.seed << "\n";
  out << "a\td_star\trb0\tstrength\td_star_4dp\trb0_4dp\tstrength_4dp\t"
         "at_resolution_limit\twarnings\terror\n";
  for (const RBReport& r : reports) {
    out << format_full(r.config.a) << '\t';
    if (!r.error.empty()) {
      out << "-\t-\t-\t-\t-\t-\t-\t-\t" << r.error << "\n";
      continue;
    }
    out << format_full(r.d_star) << '\t' << format_full(r.rb0) << '\t'
        << format_full(r.strength) << '\t' << format_display(r.d_star) << '\t'
        << format_display(r.rb0) << '\t' << format_display(r.strength) << '\t'
        << (r.at_resolution_limit ? "yes" : "no") << '\t';
    for (std::size_t i = 0; i < r.warnings.size(); ++i)
      out << (i ? "; " : "") << r.warnings[i];
    out << "\t\n";
  }
  return out.str();
}

}  // namespace dpcheck
