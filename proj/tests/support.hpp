#pragma once

#include "iep/formula.hpp"
#include "iep/qmodel.hpp"

#include <random>
#include <string>
#include <vector>

namespace iep::testing
{

inline signature random_atoms( std::mt19937& rng, const std::vector< std::string >& vars )
{
    signature s;
    for ( const auto& v : vars )
        if ( rng() % 2 )
            s.insert( v );
    return s;
}

inline atomic_frame random_atomic( std::mt19937& rng, bool temporal, int max_param = 3 )
{
    int pick = static_cast< int >( rng() % ( temporal ? 6 : 4 ) );
    int m = 1 + static_cast< int >( rng() % max_param );
    int k = 1 + static_cast< int >( rng() % max_param );
    switch ( pick ) {
    case 0: return chain_frame( m );
    case 1: return refl_chain_frame( m );
    case 2: return cluster_frame( k );
    case 3: return tadpole_r_frame( k, rng() % 2 );
    case 4: return tadpole_l_frame( k, rng() % 2 );
    default: return tadpole_lr_frame( k );
    }
}

inline quasi_model random_quasi( std::mt19937& rng, bool temporal, const std::vector< std::string >& vars,
                                 int max_comps = 3 )
{
    int n = 1 + static_cast< int >( rng() % max_comps );
    std::vector< simple_model > comps;
    for ( int i = 0; i < n; ++i ) {
        simple_model s;
        s.frame = random_atomic( rng, temporal );
        for ( int j = 0; j < s.frame.base_points(); ++j )
            s.atoms.push_back( random_atoms( rng, vars ) );
        comps.push_back( s );
    }
    quasi_model m = ordered_sum( comps, temporal );
    const auto& f = m.comps[ 0 ].frame;
    m.root = f.is_tadpole() ? point_ref{ 0, part::cluster, 0 } : point_ref{ 0, part::finite, 0 };
    return m;
}

inline formula random_formula( std::mt19937& rng, int depth, int budget, bool temporal,
                               const std::vector< std::string >& vars )
{
    int choices = ( depth > 0 && budget > 0 ) ? 7 : ( budget > 0 ? 5 : 2 );
    int c = static_cast< int >( rng() % choices );
    switch ( c ) {
    case 0:
    case 1: return var( vars[ rng() % vars.size() ] );
    case 2: return ( rng() % 2 ) ? top() : bot();
    case 3: return neg( random_formula( rng, depth, budget - 1, temporal, vars ) );
    case 4:
        return conj( random_formula( rng, depth, budget / 2, temporal, vars ),
                     random_formula( rng, depth, budget / 2, temporal, vars ) );
    default: {
        formula a = random_formula( rng, depth - 1, budget - 1, temporal, vars );
        if ( !temporal )
            return ( rng() % 2 ) ? dia( a ) : box( a );
        switch ( rng() % 4 ) {
        case 0: return dia_f( a );
        case 1: return dia_p( a );
        case 2: return box_f( a );
        default: return box_p( a );
        }
    }
    }
}

} // namespace iep::testing
