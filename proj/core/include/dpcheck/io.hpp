#ifndef DPCHECK_IO_HPP
#define DPCHECK_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dpcheck/distributions.hpp"
#include "dpcheck/relative_belief.hpp"

namespace dpcheck {

// Read whitespace- or comma-separated finite reals, any number per line.
std::vector<double> ingest(const std::string& path);

enum class OutputFormat { json, tsv };

OutputFormat format_from_name(std::string_view name);
std::string format_name(OutputFormat f);

// Everything needed to reproduce a check run byte for byte.
struct RunManifest {
  std::string input;      // data file path, or "" when generated
  std::string generator;  // inline model spec for simulated data, or ""
  Family family = Family::normal;
  std::vector<double> a_grid;
  std::size_t N = 200;
  std::size_t M = 20;
  std::size_t i0 = 1;
  std::size_t r1 = 2000;
  std::size_t r2 = 2000;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  OutputFormat format = OutputFormat::json;

  CheckConfig config_for(double a) const;
};

// Full-precision shortest round-trip decimal, and the 4-decimal display form.
std::string format_full(double x);
std::string format_display(double x);

// Serialized check report: one JSON document / one TSV table per run. The
// manifest is embedded so the output is self-describing.
std::string reports_to_json(const RunManifest& manifest, const std::vector<RBReport>& reports);
std::string reports_to_tsv(const RunManifest& manifest, const std::vector<RBReport>& reports);

}  // namespace dpcheck

#endif
