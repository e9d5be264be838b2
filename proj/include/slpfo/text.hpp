#ifndef SLPFO_TEXT_HPP
#define SLPFO_TEXT_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace slpfo {

struct Token {
    std::string text;
    std::size_t column = 0;  // 1-based
};

struct LineTokens {
    std::size_t number = 0;  // 1-based
    std::vector<Token> tokens;
};

// Whitespace-separated tokens per non-empty line; `#` starts a comment.
std::vector<LineTokens> tokenize_lines(const std::string& text);

// Parses `name/arity`.
std::pair<std::string, unsigned> parse_relation_decl(const Token& token, std::size_t line);

// Parses a non-negative decimal integer token.
unsigned long long parse_unsigned(const Token& token, std::size_t line);

std::string read_file(const std::string& path);

}  // namespace slpfo

#endif
