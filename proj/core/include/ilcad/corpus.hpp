#pragma once

#include "ilcad/term.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ilcad {

struct CorpusCase {
    std::string name;
    std::string function_source;
    std::string point_source;
    Term function;
    Term point;
    std::size_t line;
};

// One case per line: `NAME | FEXPR | X`. Text after `#` is a comment.
// Throws ParseError with the manifest line for malformed lines.
std::vector<CorpusCase> parse_corpus(std::string_view text);
std::vector<CorpusCase> load_corpus(const std::filesystem::path& path);

std::string_view default_corpus_text() noexcept;
std::vector<CorpusCase> default_corpus();

}  // namespace ilcad
