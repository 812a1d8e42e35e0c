#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "orqc/runner.hpp"

namespace orqc {

using nlohmann::json;

namespace {

json records_json(const std::vector<TimeSeriesRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) {
    arr.push_back({{"t", r.t},
                   {"mean", r.mean},
                   {"variance", r.variance},
                   {"n_realizations", r.n_realizations}});
  }
  return arr;
}

json manifest_json(const RunManifest& m) {
  json sat = json::object();
  for (const auto& [label, v] : m.saturation) sat[label] = v;
  return {{"config", json::parse(m.config_json)},
          {"master_seed", m.master_seed},
          {"realization_seeds", m.realization_seeds},
          {"version", m.version},
          {"wall_clock_seconds", m.wall_clock_seconds},
          {"parallel_width", m.parallel_width},
          {"saturation", {{"tail_fraction", m.tail_fraction}, {"values", sat}}}};
}

json krylov_json(const KrylovSummary& k) {
  return {{"dimensions", k.dimensions},
          {"final_complexity", k.final_complexity},
          {"max_gram_deviation", k.max_gram_deviation}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string file_label(std::string label) {
  for (char& c : label) {
    if (c == ':') c = '_';
  }
  return label;
}

template <typename T>
bool parse_field(std::string_view field, T& out) {
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

} // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

std::string records_to_csv(const std::vector<TimeSeriesRecord>& records) {
  std::string out = "t,mean,variance,n_realizations\n";
  for (const auto& r : records) {
    out += std::to_string(r.t);
    out += ',';
    out += format_double(r.mean);
    out += ',';
    out += format_double(r.variance);
    out += ',';
    out += std::to_string(r.n_realizations);
    out += '\n';
  }
  return out;
}

std::vector<TimeSeriesRecord> records_from_csv(std::string_view text) {
  std::vector<TimeSeriesRecord> out;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (header) {
      if (line != "t,mean,variance,n_realizations") {
        throw std::runtime_error("unexpected CSV header '" + std::string(line) + "'");
      }
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::array<std::string_view, 4> fields;
    std::size_t start = 0;
    for (std::size_t f = 0; f < 4; ++f) {
      const std::size_t comma = f < 3 ? line.find(',', start) : line.size();
      if (comma == std::string_view::npos) throw std::runtime_error("short CSV row");
      fields[f] = line.substr(start, comma - start);
      start = comma + 1;
    }
    TimeSeriesRecord r;
    if (!parse_field(fields[0], r.t) || !parse_field(fields[1], r.mean) ||
        !parse_field(fields[2], r.variance) || !parse_field(fields[3], r.n_realizations)) {
      throw std::runtime_error("malformed CSV row '" + std::string(line) + "'");
    }
    out.push_back(r);
  }
  if (header) throw std::runtime_error("empty CSV document");
  return out;
}

std::string manifest_to_json(const RunManifest& manifest) {
  return manifest_json(manifest).dump(2) + "\n";
}

std::string result_to_json(const ExperimentResult& result) {
  json j;
  json series = json::array();
  for (const auto& s : result.series) {
    series.push_back({{"label", s.label}, {"records", records_json(s.records)}});
  }
  j["series"] = series;
  if (!result.kdesign.empty()) {
    json rows = json::array();
    for (const auto& r : result.kdesign) {
      rows.push_back({{"t", r.t},
                      {"k", r.k},
                      {"delta", r.delta},
                      {"standard_error", r.standard_error},
                      {"realizations", r.realizations}});
    }
    j["kdesign"] = rows;
  }
  if (result.krylov) j["krylov"] = krylov_json(*result.krylov);
  j["manifest"] = manifest_json(result.manifest);
  return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> emit(const ExperimentResult& result,
                                        const std::filesystem::path& dir, OutputFormat format) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& text) {
    const auto path = dir / name;
    write_file(path, text);
    written.push_back(path);
  };

  if (format == OutputFormat::Json) {
    put("result.json", result_to_json(result));
    return written;
  }

  for (const auto& s : result.series) {
    const std::string name =
        result.series.size() == 1 ? "series.csv" : "series_" + file_label(s.label) + ".csv";
    put(name, records_to_csv(s.records));
  }
  if (!result.kdesign.empty()) {
    std::string csv = "t,k,delta,realizations\n";
    for (const auto& r : result.kdesign) {
      csv += std::to_string(r.t) + ',' + std::to_string(r.k) + ',' + format_double(r.delta) +
             ',' + std::to_string(r.realizations) + '\n';
    }
    put("kdesign.csv", csv);
  }
  if (result.krylov) {
    const auto& c = result.find("complexity").records;
    const auto& k = result.find("dimension").records;
    std::string csv = "t,C_K,K\n";
    for (std::size_t i = 0; i < c.size(); ++i) {
      csv += std::to_string(c[i].t) + ',' + format_double(c[i].mean) + ',' +
             format_double(k[i].mean) + '\n';
    }
    put("krylov.csv", csv);
    put("krylov_summary.json", krylov_json(*result.krylov).dump(2) + "\n");
  }
  put("manifest.json", manifest_to_json(result.manifest));
  return written;
}

} // namespace orqc
