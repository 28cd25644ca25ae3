#include "ilcad/corpus.hpp"

#include "ilcad/errors.hpp"
#include "ilcad/syntax.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace ilcad {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

Term parse_field(const std::string& src, std::size_t line, std::size_t column) {
    try {
        return parse(src);
    } catch (const ParseError& e) {
        throw ParseError(line, column + e.column() - 1, e.expected(), "'" + src + "'");
    }
}

}  // namespace

std::vector<CorpusCase> parse_corpus(std::string_view text) {
    std::vector<CorpusCase> out;
    std::set<std::string> names;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        if (trim(raw).empty()) continue;

        auto bar1 = raw.find('|');
        auto bar2 = bar1 == std::string_view::npos ? bar1 : raw.find('|', bar1 + 1);
        if (bar2 == std::string_view::npos || raw.find('|', bar2 + 1) != std::string_view::npos) {
            throw ParseError(line_no, 1, {"NAME | FEXPR | X"}, "'" + trim(raw) + "'");
        }
        std::string name = trim(raw.substr(0, bar1));
        std::string f = trim(raw.substr(bar1 + 1, bar2 - bar1 - 1));
        std::string x = trim(raw.substr(bar2 + 1));
        if (name.empty() || f.empty() || x.empty()) throw ParseError(line_no, 1, {"NAME | FEXPR | X"}, "an empty field");
        if (!names.insert(name).second) throw ParseError(line_no, 1, {"a unique case name"}, "'" + name + "'");
        Term ft = parse_field(f, line_no, raw.find(f) + 1);
        Term xt = parse_field(x, line_no, raw.rfind(x) + 1);
        out.push_back({name, f, x, ft, xt, line_no});
        if (end == text.size()) break;
    }
    return out;
}

std::vector<CorpusCase> load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_corpus(ss.str());
}

std::vector<CorpusCase> default_corpus() { return parse_corpus(default_corpus_text()); }

}  // namespace ilcad
