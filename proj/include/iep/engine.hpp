#pragma once

#include "iep/formula.hpp"
#include "iep/qmodel.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace iep
{

// A set of formulas flattened into one node table, children before parents.
struct program
{
    std::vector< formula > nodes;
    std::vector< op > ops;
    std::vector< int > lhs, rhs;
    std::vector< int > var;
    std::vector< std::string > vars;
    // Slot of a node in the future/past argument masks, or -1.
    std::vector< int > fslot, pslot;
    std::vector< int > fnode, pnode;
    std::vector< int > roots;
    int md = 0;
    std::unordered_map< formula, int > index;

    [[nodiscard]] int size() const { return static_cast< int >( nodes.size() ); }
    [[nodiscard]] int node_of( formula f ) const;
    [[nodiscard]] std::uint32_t atoms_mask( const signature& s ) const;
    // Tail window giving every tail point a representative of equal type.
    [[nodiscard]] int window( int k ) const { return k * ( md + 1 ); }
};

program compile( const std::vector< formula >& roots );

using truth_row = std::vector< std::uint8_t >;

struct component_eval
{
    std::vector< truth_row > rows;
    std::uint64_t here_f = 0;
    std::uint64_t here_p = 0;
};

// Evaluates every node at every representative of one component, given which
// future arguments hold somewhere in later components and which past
// arguments hold somewhere in earlier ones.
component_eval eval_component( const program& p, const rep_layout& layout, const std::vector< std::uint32_t >& base_atoms,
                               std::uint64_t later_f, std::uint64_t earlier_p );

// Node values at one point whose diamonds see exactly the arguments in
// seen_f (future) and seen_p (past).
truth_row eval_point( const program& p, std::uint32_t atoms, std::uint64_t seen_f, std::uint64_t seen_p );
std::uint64_t future_args( const program& p, const truth_row& row );
std::uint64_t past_args( const program& p, const truth_row& row );

struct quasi_eval
{
    std::vector< rep_layout > layouts;
    std::vector< component_eval > comps;

    [[nodiscard]] bool value( const quasi_model& m, const point_ref& x, int node ) const;
};

quasi_eval eval_quasi( const program& p, const quasi_model& m );

} // namespace iep
