#ifndef SLPFO_OUTPUT_HPP
#define SLPFO_OUTPUT_HPP

#include <string>
#include <vector>

#include "slpfo/slp.hpp"

namespace slpfo {

// One printed tuple position: decimal lex rank and the label of the local node.
struct PrintedNode {
    std::string lex;
    std::string label;
    bool operator==(const PrintedNode& o) const { return lex == o.lex && label == o.label; }
    bool operator<(const PrintedNode& o) const { return lex != o.lex ? lex < o.lex : label < o.label; }
};
using PrintedTuple = std::vector<PrintedNode>;

PrintedNode printed_node(const Slp& slp, const LexRep& rep);

// Tab-separated `lex:label` pairs.
std::string format_tsv(const PrintedTuple& t);
PrintedTuple parse_tsv(const std::string& line);

// {"tuple":[{"lex":"..","label":".."},..]}
std::string format_json_line(const PrintedTuple& t);
PrintedTuple parse_json_line(const std::string& line);

inline const char* kEndOfEnumeration = "EOE";

}  // namespace slpfo

#endif
