#include "rlas/pipeline/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "rlas/errors.hpp"

namespace rlas::pipeline {

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isspace(c)) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(static_cast<char>(std::tolower(c)));
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find('\t', start);
        fields.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return fields;
}

} // namespace

void index_dataset(Dataset& ds) {
    ds.groups.clear();
    std::unordered_map<std::string, std::size_t> group_of;
    ds.stats = {};
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        const auto& r = ds.records[i];
        auto [it, inserted] = group_of.try_emplace(r.question_id, ds.groups.size());
        if (inserted) ds.groups.push_back({r.question_id, {}});
        ds.groups[it->second].rows.push_back(i);
        ds.stats.positives += r.label == 1;
    }
    ds.stats.pairs = ds.records.size();
    ds.stats.questions = ds.groups.size();
}

Dataset parse_dataset(std::istream& in, const std::string& name) {
    Dataset ds;
    ds.name = name;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto where = name + ":" + std::to_string(lineno);
        const auto fields = split_tabs(line);
        if (fields.size() != 4)
            throw FormatError(where + ": expected 4 tab-separated fields, found " + std::to_string(fields.size()));
        QARecord r;
        r.line = lineno;
        r.question_id = std::string(fields[0]);
        if (r.question_id.empty()) throw FormatError(where + ": empty question id");
        r.question = tokenize(fields[1]);
        r.answer = tokenize(fields[2]);
        if (r.question.empty() || r.answer.empty()) throw InputError(where + ": empty question or answer text");
        if (fields[3] == "0") {
            r.label = 0;
        } else if (fields[3] == "1") {
            r.label = 1;
        } else {
            throw InputError(where + ": label must be 0 or 1, got '" + std::string(fields[3]) + "'");
        }
        ds.records.push_back(std::move(r));
    }
    if (ds.records.empty()) throw InputError(name + ": dataset is empty");
    index_dataset(ds);
    return ds;
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open dataset " + path);
    const std::filesystem::path file(path);
    Dataset ds = parse_dataset(in, file.filename().string());
    // split tag from the file stem, e.g. wiki-dev.tsv -> dev
    const std::string stem = file.stem().string();
    for (const char* split : {"train", "dev", "test"})
        if (stem.find(split) != std::string::npos) ds.split = split;
    return ds;
}

namespace {

std::string join(const std::vector<std::string>& tokens) {
    std::string s;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) s += ' ';
        s += tokens[i];
    }
    return s;
}

} // namespace

void write_dataset(std::ostream& out, const Dataset& ds) {
    for (const auto& r : ds.records)
        out << r.question_id << '\t' << join(r.question) << '\t' << join(r.answer) << '\t' << r.label << '\n';
}

} // namespace rlas::pipeline
