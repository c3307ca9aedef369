#include "collusion/csv_io.h"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "collusion/error.h"

namespace collusion {
namespace {

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

bool ReadRecord(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // A quoted field may span lines; keep reading until quotes balance.
    std::size_t quotes = 0;
    for (char c : line) quotes += (c == '"');
    while (quotes % 2 == 1) {
      std::string more;
      if (!std::getline(in, more)) throw Error("unterminated quoted field");
      if (!more.empty() && more.back() == '\r') more.pop_back();
      line += '\n';
      line += more;
      for (char c : more) quotes += (c == '"');
    }
    if (!line.empty()) return true;
  }
  return false;
}

std::vector<std::string> ReadHeader(std::istream& in) {
  std::string line;
  if (!ReadRecord(in, line)) throw Error("CSV has no header");
  auto header = SplitCsvLine(line);
  if (header.size() < 2 || header.back() != "label") {
    throw Error("CSV header must end with a 'label' column");
  }
  return header;
}

}  // namespace

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string QuoteCsvField(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void WriteDatasetCsv(std::ostream& out, const Dataset& dataset) {
  const Universe& u = dataset.universe();
  for (std::size_t f = 0; f < u.num_features(); ++f) {
    out << QuoteCsvField(u.feature(f).name) << ',';
  }
  out << "label\n";
  std::string row;
  for (const auto& s : dataset.samples()) {
    row.clear();
    for (std::size_t f = 0; f < u.num_features(); ++f) {
      row += QuoteCsvField(u.feature(f).categories[u.CategoryOf(s.x, f)]);
      row += ',';
    }
    row += QuoteCsvField(u.labels()[s.y]);
    row += '\n';
    out << row;
  }
}

void WriteDatasetCsv(const std::string& path, const Dataset& dataset) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  WriteDatasetCsv(out, dataset);
  if (!out) throw Error("write failed: " + path);
}

Dataset ReadDatasetCsv(std::istream& in, UniversePtr universe) {
  const Universe& u = *universe;
  const auto header = ReadHeader(in);
  if (header.size() != u.num_features() + 1) {
    throw Error("CSV header does not match the universe");
  }
  for (std::size_t f = 0; f < u.num_features(); ++f) {
    if (header[f] != u.feature(f).name) {
      throw Error("CSV column '" + header[f] + "' does not match feature '" +
                  u.feature(f).name + "'");
    }
  }
  std::vector<std::map<std::string, CategoryIndex, std::less<>>> lookup(
      u.num_features());
  for (std::size_t f = 0; f < u.num_features(); ++f) {
    const auto& cats = u.feature(f).categories;
    for (std::size_t c = 0; c < cats.size(); ++c) {
      lookup[f].emplace(cats[c], static_cast<CategoryIndex>(c));
    }
  }

  std::vector<Sample> samples;
  std::string line;
  std::size_t line_no = 1;
  while (ReadRecord(in, line)) {
    ++line_no;
    const auto fields = SplitCsvLine(line);
    if (fields.size() != header.size()) {
      throw Error("CSV row " + std::to_string(line_no) +
                  " has the wrong number of fields");
    }
    FeatureCode x = 0;
    for (std::size_t f = 0; f < u.num_features(); ++f) {
      auto it = lookup[f].find(fields[f]);
      if (it == lookup[f].end()) {
        throw Error("unknown category '" + fields[f] + "' for feature '" +
                    u.feature(f).name + "'");
      }
      x += static_cast<FeatureCode>(it->second) * u.stride(f);
    }
    samples.push_back({x, u.LabelOrThrow(fields.back())});
  }
  return {std::move(universe), std::move(samples)};
}

Dataset ReadDatasetCsv(const std::string& path, UniversePtr universe) {
  auto in = OpenInput(path);
  return ReadDatasetCsv(in, std::move(universe));
}

Dataset ReadDatasetCsvInferred(std::istream& in) {
  const auto header = ReadHeader(in);
  const std::size_t d = header.size() - 1;
  std::vector<std::vector<std::string>> categories(d);
  std::vector<std::map<std::string, CategoryIndex>> lookup(d);
  std::vector<std::string> labels;
  std::map<std::string, LabelIndex> label_lookup;
  std::vector<std::vector<CategoryIndex>> rows;
  std::vector<LabelIndex> row_labels;

  std::string line;
  while (ReadRecord(in, line)) {
    const auto fields = SplitCsvLine(line);
    if (fields.size() != header.size()) {
      throw Error("CSV row has the wrong number of fields");
    }
    std::vector<CategoryIndex> x(d);
    for (std::size_t f = 0; f < d; ++f) {
      auto [it, added] = lookup[f].emplace(
          fields[f], static_cast<CategoryIndex>(categories[f].size()));
      if (added) categories[f].push_back(fields[f]);
      x[f] = it->second;
    }
    auto [it, added] = label_lookup.emplace(
        fields.back(), static_cast<LabelIndex>(labels.size()));
    if (added) labels.push_back(fields.back());
    rows.push_back(std::move(x));
    row_labels.push_back(it->second);
  }

  std::vector<Feature> features;
  for (std::size_t f = 0; f < d; ++f) {
    features.push_back({header[f], std::move(categories[f])});
  }
  auto universe = MakeUniverse(std::move(features), std::move(labels));
  std::vector<Sample> samples;
  samples.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    samples.push_back({universe->Encode(rows[i]), row_labels[i]});
  }
  return {std::move(universe), std::move(samples)};
}

Dataset ReadDatasetCsvInferred(const std::string& path) {
  auto in = OpenInput(path);
  return ReadDatasetCsvInferred(in);
}

std::vector<std::string> ReadCsvHeader(const std::string& path) {
  auto in = OpenInput(path);
  std::string line;
  if (!ReadRecord(in, line)) throw Error("CSV has no header");
  return SplitCsvLine(line);
}

}  // namespace collusion
