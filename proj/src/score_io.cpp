#include "rwr/score_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace rwr {

void write_score_dump(std::ostream& out, std::span<const double> scores,
                      std::span<const std::string> header_comments) {
    for (const std::string& line : header_comments)
        out << "# " << line << '\n';
    char buf[64];
    for (std::size_t i = 0; i < scores.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu %.17g\n", i, scores[i]);
        out << buf;
    }
}

ScoreVector read_score_dump(std::istream& in) {
    std::map<std::size_t, double> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream fields(line);
        std::size_t id;
        double score;
        std::string extra;
        if (!(fields >> id >> score) || (fields >> extra))
            throw std::runtime_error("malformed score line " + std::to_string(line_no) + ": " + line);
        if (!entries.emplace(id, score).second)
            throw std::runtime_error("duplicate node id " + std::to_string(id) + " in score dump");
    }
    ScoreVector scores(entries.size());
    for (const auto& [id, score] : entries) {
        if (id >= scores.size())
            throw std::runtime_error("score dump node ids are not dense (found " + std::to_string(id) + ")");
        scores[id] = score;
    }
    return scores;
}

void write_score_file(const std::string& path, std::span<const double> scores,
                      std::span<const std::string> header_comments) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    write_score_dump(out, scores, header_comments);
}

ScoreVector read_score_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open: " + path);
    return read_score_dump(in);
}

} // namespace rwr
