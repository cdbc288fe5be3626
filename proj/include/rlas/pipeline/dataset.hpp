#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rlas::pipeline {

/// Lowercased whitespace tokens.
std::vector<std::string> tokenize(std::string_view text);

struct QARecord {
    std::string question_id;
    std::vector<std::string> question;
    std::vector<std::string> answer;
    int label = 0;
    std::size_t line = 0; // 1-based source line
};

struct QuestionGroup {
    std::string question_id;
    std::vector<std::size_t> rows; // indices into Dataset::records, file order
};

struct DatasetStats {
    std::size_t pairs = 0;
    std::size_t positives = 0;
    std::size_t questions = 0;
    double positive_fraction() const { return pairs ? static_cast<double>(positives) / static_cast<double>(pairs) : 0.0; }
};

struct Dataset {
    std::string name;
    std::string split = "train";
    std::vector<QARecord> records;
    std::vector<QuestionGroup> groups; // in order of first appearance
    DatasetStats stats;
};

/// Parses `qid<TAB>question<TAB>answer<TAB>label` lines. Blank lines are
/// skipped; duplicate rows are kept as separate records.
Dataset parse_dataset(std::istream& in, const std::string& name = "dataset");
/// Reads a dataset file; the split tag is taken from the file name when it
/// mentions train, dev or test, otherwise it stays "train".
Dataset load_dataset(const std::string& path);

/// Recomputes groups and statistics from `records`.
void index_dataset(Dataset& ds);

void write_dataset(std::ostream& out, const Dataset& ds);

} // namespace rlas::pipeline
