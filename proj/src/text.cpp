#include "slpfo/text.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "slpfo/errors.hpp"

namespace slpfo {

std::vector<LineTokens> tokenize_lines(const std::string& text) {
    std::vector<LineTokens> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        ++line_no;
        LineTokens line;
        line.number = line_no;
        std::size_t i = pos;
        while (i < end) {
            unsigned char c = static_cast<unsigned char>(text[i]);
            if (c == '#') break;
            if (std::isspace(c)) {
                ++i;
                continue;
            }
            std::size_t start = i;
            while (i < end && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '#') ++i;
            line.tokens.push_back({text.substr(start, i - start), start - pos + 1});
        }
        if (!line.tokens.empty()) out.push_back(std::move(line));
        if (end == text.size()) break;
        pos = end + 1;
    }
    return out;
}

std::pair<std::string, unsigned> parse_relation_decl(const Token& token, std::size_t line) {
    std::size_t slash = token.text.rfind('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == token.text.size())
        throw ParseError(line, token.column, "expected <name>/<arity>, got " + token.text);
    Token arity_token{token.text.substr(slash + 1), token.column + slash + 1};
    unsigned long long arity = parse_unsigned(arity_token, line);
    if (arity == 0 || arity > 64) throw ParseError(line, arity_token.column, "arity out of range");
    return {token.text.substr(0, slash), static_cast<unsigned>(arity)};
}

unsigned long long parse_unsigned(const Token& token, std::size_t line) {
    if (token.text.empty() || token.text.size() > 18)
        throw ParseError(line, token.column, "expected a natural number, got " + token.text);
    unsigned long long value = 0;
    for (char c : token.text) {
        if (c < '0' || c > '9') throw ParseError(line, token.column, "expected a natural number, got " + token.text);
        value = value * 10 + static_cast<unsigned long long>(c - '0');
    }
    return value;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace slpfo
