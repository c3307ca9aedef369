#ifndef COLLUSION_CSV_IO_H_
#define COLLUSION_CSV_IO_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "collusion/dataset.h"

namespace collusion {

// Dataset CSV: a header of feature names followed by "label", then one row
// per sample with category and label names as strings. Fields containing a
// comma, quote or newline are quoted with doubled inner quotes.

void WriteDatasetCsv(std::ostream& out, const Dataset& dataset);
void WriteDatasetCsv(const std::string& path, const Dataset& dataset);

// Reads against a known universe; the header must list its features in order.
Dataset ReadDatasetCsv(std::istream& in, UniversePtr universe);
Dataset ReadDatasetCsv(const std::string& path, UniversePtr universe);

// Reads without a schema. Categories and labels are ordered by first
// appearance.
Dataset ReadDatasetCsvInferred(std::istream& in);
Dataset ReadDatasetCsvInferred(const std::string& path);

// Header line of a CSV file, split into fields.
std::vector<std::string> ReadCsvHeader(const std::string& path);

// Splits one CSV record. Exposed for the results reader.
std::vector<std::string> SplitCsvLine(const std::string& line);
std::string QuoteCsvField(const std::string& field);

}  // namespace collusion

#endif  // COLLUSION_CSV_IO_H_
