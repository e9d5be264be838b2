#ifndef SLPFO_GENERATORS_HPP
#define SLPFO_GENERATORS_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>

#include "slpfo/slp.hpp"

namespace slpfo {

// Perfect binary tree of height n over e/2 (2^(n+1) - 1 nodes, 2^n leaves).
Slp gen_ptree(unsigned n);
// Path with n edges over e/2.
Slp gen_chain(unsigned n);
// Ladder over e/2 whose length doubles with n (3 * 2^n - 1 rungs).
Slp gen_grid_strip(unsigned n);

struct RandomApexParams {
    unsigned max_nonterminals = 30;
    std::size_t max_nodes = 5000;   // |val(D)| bound
    std::size_t max_degree = 4;
    unsigned max_internal = 4;      // internal nodes per production
    unsigned max_refs = 3;          // references per production
    unsigned max_tuples = 3;        // tuples per production
};

// Random apex SLP over r1/2, r2/2, p/1 meeting the bounds of `params`; deterministic in the
// generator state.
Slp gen_random_apex(std::mt19937_64& rng, const RandomApexParams& params = {});

// Random ordered dag on nodes 0..n-1 (edges only to larger ids, initial node 0) with at
// most `max_edges` edges and at most `max_paths` initial paths.
OrderedDag gen_random_dag(std::mt19937_64& rng, std::size_t max_edges = 200, std::size_t max_paths = 10000);

// Text of a generated family member; `family` is ptree, chain, grid-strip or random-apex.
std::string gen_family_text(const std::string& family, unsigned n, std::uint64_t seed,
                            const RandomApexParams& params = {});

}  // namespace slpfo

#endif
