#pragma once

#include "iep/interp.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <random>
#include <string>

namespace iep::testing
{

using big = boost::multiprecision::cpp_int;

struct big_bounds
{
    big kb, pL, sum_max, size_max;
};

inline big big_max( const big& a, const big& b ) { return a > b ? a : b; }

inline big_bounds big_bounds_from( long long cL, long long n )
{
    big_bounds b;
    big c = cL;
    b.kb = 3 + 3 * big( n );
    b.pL = 2 * ( b.kb - 1 ) * big_max( c + 2, b.kb ) + b.kb;
    b.sum_max = 3 * b.kb - 1;
    b.size_max = b.sum_max * big_max( c + 2, b.pL );
    return b;
}

// Returns the number of mismatches; `cases` random (cL, n) pairs.
inline int bounds_mismatches( std::mt19937_64& rng, int cases, std::string& first )
{
    int bad = 0;
    for ( int i = 0; i < cases; ++i ) {
        long long cL = static_cast< long long >( rng() % ( i < cases / 2 ? 50 : 100000 ) );
        long long n = static_cast< long long >( rng() % ( i < cases / 2 ? 200 : 100000 ) );
        bounds b = bounds_from( cL, n );
        big_bounds o = big_bounds_from( cL, n );
        bool ok = big( b.kb ) == o.kb && big( b.pL ) == o.pL && big( b.sum_max ) == o.sum_max &&
                  big( b.size_max ) == o.size_max && big( b.N_max ) == 2 * o.kb - 1 && b.cL == cL;
        if ( !ok && bad++ == 0 )
            first = "cL=" + std::to_string( cL ) + " n=" + std::to_string( n );
    }
    return bad;
}

} // namespace iep::testing
