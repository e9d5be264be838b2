#include "slpfo/output.hpp"

#include <json.hpp>

#include "slpfo/errors.hpp"

namespace slpfo {

PrintedNode printed_node(const Slp& slp, const LexRep& rep) {
    const Production& p = slp.at(rep.nonterminal);
    std::string label = p.local.label(rep.local);
    return PrintedNode{rep.lex.str(), label};
}

std::string format_tsv(const PrintedTuple& t) {
    std::string out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += '\t';
        out += t[i].lex + ":" + t[i].label;
    }
    return out;
}

PrintedTuple parse_tsv(const std::string& line) {
    PrintedTuple out;
    if (line.empty()) return out;
    std::size_t start = 0;
    while (true) {
        std::size_t end = line.find('\t', start);
        std::string field = line.substr(start, end == std::string::npos ? std::string::npos : end - start);
        std::size_t colon = field.find(':');
        if (colon == std::string::npos || colon == 0) throw ParseError(1, start + 1, "expected lex:label");
        out.push_back(PrintedNode{field.substr(0, colon), field.substr(colon + 1)});
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

std::string format_json_line(const PrintedTuple& t) {
    nlohmann::json arr = nlohmann::json::array();
    for (const PrintedNode& n : t) arr.push_back({{"lex", n.lex}, {"label", n.label}});
    return nlohmann::json{{"tuple", arr}}.dump();
}

PrintedTuple parse_json_line(const std::string& line) {
    PrintedTuple out;
    try {
        nlohmann::json j = nlohmann::json::parse(line);
        for (const auto& n : j.at("tuple")) out.push_back(PrintedNode{n.at("lex").get<std::string>(), n.at("label").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(1, 1, std::string("bad json tuple: ") + e.what());
    }
    return out;
}

}  // namespace slpfo
