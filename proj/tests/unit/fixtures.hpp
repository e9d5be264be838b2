#ifndef SLPFO_TEST_FIXTURES_HPP
#define SLPFO_TEST_FIXTURES_HPP

#include <string>

#include "slpfo/errors.hpp"
#include "slpfo/slp.hpp"
#include "slpfo/text.hpp"

inline std::string fixture_path(const std::string& name) { return std::string(SLPFO_FIXTURE_DIR) + "/" + name; }

inline slpfo::Slp example6() { return slpfo::parse_slp(slpfo::read_file(fixture_path("example6.slp"))); }

// Local node id of `label` in the production of `nonterminal`.
inline slpfo::NodeId local_id(const slpfo::Slp& slp, const std::string& nonterminal, const std::string& label) {
    const slpfo::Production& p = slp.at(*slp.find(nonterminal));
    for (slpfo::NodeId v = 0; v < p.local.universe_size; ++v)
        if (p.local.label(v) == label) return v;
    throw slpfo::InvalidArgument("no node " + label + " in " + nonterminal);
}

// Node id in `d` of the representation (path, label), read from the initial nonterminal.
inline slpfo::NodeId val_node(const slpfo::Slp& slp, const slpfo::Decompressed& d, const std::vector<std::uint32_t>& path,
                              const std::string& label) {
    slpfo::Nonterminal end = slpfo::path_end(slp, slp.initial, path);
    return *d.find(path, local_id(slp, slp.at(end).name, label));
}

#endif
