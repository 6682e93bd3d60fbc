#include "iep/interp.hpp"
#include "iep/error.hpp"

#include <algorithm>
#include <stdexcept>

namespace iep
{

namespace
{

long long mul( long long a, long long b )
{
    long long r;
    if ( __builtin_mul_overflow( a, b, &r ) )
        throw input_error( "bound arithmetic overflows 64 bits" );
    return r;
}

long long add( long long a, long long b )
{
    long long r;
    if ( __builtin_add_overflow( a, b, &r ) )
        throw input_error( "bound arithmetic overflows 64 bits" );
    return r;
}

} // namespace

bounds bounds_from( long long cL, long long n )
{
    if ( cL < 0 || n < 0 )
        throw input_error( "bounds need non-negative inputs" );
    bounds b;
    b.cL = cL;
    b.kb = add( 3, mul( 3, n ) );
    long long wide = std::max( add( cL, 2 ), b.kb );
    b.pL = add( mul( mul( 2, b.kb - 1 ), wide ), b.kb );
    b.N_max = mul( 2, b.kb ) - 1;
    b.sum_max = mul( 3, b.kb ) - 1;
    b.size_max = mul( b.sum_max, std::max( add( cL, 2 ), b.pL ) );
    return b;
}

bounds compute_bounds( const logic& L, formula f1, formula f2 )
{
    long long n = static_cast< long long >( std::max( formula_size( f1 ), formula_size( f2 ) ) );
    return bounds_from( L.max_axiom_points(), n );
}

const char* match_type_name( match_type t )
{
    switch ( t ) {
    case match_type::a: return "a";
    case match_type::b: return "b";
    default: return "c";
    }
}

match_type match_type_from_name( const std::string& s )
{
    if ( s == "a" )
        return match_type::a;
    if ( s == "b" )
        return match_type::b;
    if ( s == "c" )
        return match_type::c;
    throw input_error( "unknown match type: " + s );
}

namespace
{

using atom_sets = std::set< signature >;

signature restrict( const signature& s, const signature& sigma )
{
    return sig_intersect( s, sigma );
}

// Tail points repeat cluster atoms, so base points cover every atom set.
atom_sets sigma_sets( const std::vector< simple_model >& seg, std::size_t from, std::size_t to,
                      const signature& sigma )
{
    atom_sets out;
    for ( std::size_t c = from; c < to; ++c )
        for ( const auto& a : seg[ c ].atoms )
            out.insert( restrict( a, sigma ) );
    return out;
}

struct final_cluster
{
    bool reflexive = false;
    atom_sets atoms;
};

final_cluster final_of( const simple_model& s, const signature& sigma )
{
    const auto& f = s.frame;
    switch ( f.kind ) {
    case shape::chain:
    case shape::refl_chain: return { false, { restrict( s.atoms.back(), sigma ) } };
    case shape::cluster: return { true, sigma_sets( { s }, 0, 1, sigma ) };
    case shape::tadpole_r: return { f.tail_reflexive, { restrict( s.atoms.front(), sigma ) } };
    default: throw input_error( "temporal shape in a unimodal segment" );
    }
}

bool covered( const atom_sets& xs, const atom_sets& into )
{
    return std::includes( into.begin(), into.end(), xs.begin(), xs.end() );
}

bool pointwise_equal( const simple_model& a, const simple_model& b, const signature& sigma )
{
    for ( std::size_t i = 0; i < a.atoms.size(); ++i )
        if ( restrict( a.atoms[ i ], sigma ) != restrict( b.atoms[ i ], sigma ) )
            return false;
    return true;
}

} // namespace

match_result is_sigma_matching( const std::vector< simple_model >& n1, const std::vector< simple_model >& n2,
                                const signature& sigma )
{
    match_result r;
    if ( n1.empty() || n2.empty() ) {
        r.reasons.push_back( "empty segment" );
        return r;
    }

    if ( n1.size() != 1 || n2.size() != 1 )
        r.reasons.push_back( "(a) segments are not single simple models" );
    else if ( !( n1[ 0 ].frame == n2[ 0 ].frame ) )
        r.reasons.push_back( "(a) atomic frames differ" );
    else if ( !pointwise_equal( n1[ 0 ], n2[ 0 ], sigma ) )
        r.reasons.push_back( "(a) sigma-atoms differ at some point" );
    else {
        r.type = match_type::a;
        return r;
    }

    auto all1 = sigma_sets( n1, 0, n1.size(), sigma );
    auto all2 = sigma_sets( n2, 0, n2.size(), sigma );
    auto c1 = final_of( n1.back(), sigma ), c2 = final_of( n2.back(), sigma );
    if ( !c1.reflexive || !c2.reflexive )
        r.reasons.push_back( "(b) a final cluster is degenerate" );
    else if ( !covered( all1, c2.atoms ) || !covered( all2, c1.atoms ) )
        r.reasons.push_back( "(b) some point has no sigma-equal partner in the other final cluster" );
    else {
        r.type = match_type::b;
        return r;
    }

    const auto &l1 = n1.back(), &l2 = n2.back();
    if ( l1.frame.kind != shape::tadpole_r || !( l1.frame == l2.frame ) )
        r.reasons.push_back( "(c.1) last components are not the same tadpole" );
    else if ( !pointwise_equal( l1, l2, sigma ) )
        r.reasons.push_back( "(c.2) cluster sigma-atoms differ" );
    else {
        auto a = sigma_sets( { l1 }, 0, 1, sigma );
        if ( !covered( sigma_sets( n1, 0, n1.size() - 1, sigma ), a ) ||
             !covered( sigma_sets( n2, 0, n2.size() - 1, sigma ), a ) )
            r.reasons.push_back( "(c.3) a non-last point has no sigma-equal partner in the cluster" );
        else {
            r.type = match_type::c;
            return r;
        }
    }
    return r;
}

namespace
{

std::vector< simple_model > slice( const quasi_model& m, int b, int e )
{
    return { m.comps.begin() + b, m.comps.begin() + e };
}

// Empty string when the segmentation covers both models in order.
std::string segmentation_error( const witness_pair& w )
{
    if ( w.segments.empty() )
        return "no segments";
    int l = 0, r = 0;
    for ( const auto& s : w.segments ) {
        if ( s.left_begin != l || s.right_begin != r )
            return "segments are not contiguous";
        if ( s.left_end <= s.left_begin || s.right_end <= s.right_begin )
            return "empty segment";
        l = s.left_end;
        r = s.right_end;
    }
    if ( l != static_cast< int >( w.m1.comps.size() ) || r != static_cast< int >( w.m2.comps.size() ) )
        return "segments do not cover the models";
    return {};
}

bool root_in_first_cluster( const quasi_model& m )
{
    const auto& p = m.root;
    if ( p.comp != 0 )
        return false;
    const auto& f = m.comps[ 0 ].frame;
    switch ( f.kind ) {
    case shape::chain: return p.where == part::finite && p.index == 0;
    case shape::refl_chain: return p.where == part::finite && p.index == 0;
    case shape::cluster: return p.where == part::finite;
    default: return p.where == part::cluster;
    }
}

} // namespace

bool certify_bisimilar( const witness_pair& w, const signature& sigma )
{
    if ( !segmentation_error( w ).empty() )
        return false;
    if ( !root_in_first_cluster( w.m1 ) || !root_in_first_cluster( w.m2 ) )
        return false;
    if ( restrict( atoms_at( w.m1, w.m1.root ), sigma ) != restrict( atoms_at( w.m2, w.m2.root ), sigma ) )
        return false;
    for ( const auto& s : w.segments )
        if ( !is_sigma_matching( slice( w.m1, s.left_begin, s.left_end ), slice( w.m2, s.right_begin, s.right_end ),
                                 sigma )
                  .type )
            return false;
    return true;
}

void check_report::record( const std::string& name, bool pass, const std::string& detail )
{
    std::string line = name + ": " + ( pass ? "pass" : "fail" );
    if ( !detail.empty() )
        line += " (" + detail + ")";
    transcript.push_back( line );
    if ( !pass && ok ) {
        ok = false;
        failed = name;
    }
}

check_report verify_witness( const witness_pair& w, formula f1, formula f2, const logic& L, const bounds& bd )
{
    check_report rep;
    signature sigma = sig_intersect( signature_of( f1 ), signature_of( f2 ) );

    std::string seg = segmentation_error( w );
    rep.record( "segmentation", seg.empty(), seg );
    if ( !rep.ok )
        return rep;
    bool rooted = root_in_first_cluster( w.m1 ) && root_in_first_cluster( w.m2 );
    rep.record( "roots", rooted, rooted ? "" : "roots must lie in the first cluster" );
    if ( !rep.ok )
        return rep;

    try {
        bool a1 = mc_quasi( w.m1, w.m1.root, f1 );
        bool a2 = mc_quasi( w.m2, w.m2.root, neg( f2 ) );
        rep.record( "(a) root satisfaction", a1 && a2,
                    a1 ? ( a2 ? "" : "second root satisfies phi2" ) : "first root refutes phi1" );

        bool b1 = validates_logic( frame_of( w.m1 ), L ), b2 = validates_logic( frame_of( w.m2 ), L );
        rep.record( "(b) frames for " + L.name, b1 && b2, b1 ? ( b2 ? "" : "second frame" ) : "first frame" );
    } catch ( const input_error& e ) {
        rep.record( "(a) root satisfaction", false, e.what() );
        return rep;
    }

    bool c = restrict( atoms_at( w.m1, w.m1.root ), sigma ) == restrict( atoms_at( w.m2, w.m2.root ), sigma );
    rep.record( "(c) root sigma-atoms", c );

    long long n = static_cast< long long >( w.segments.size() );
    rep.record( "(d) segment count", n <= bd.N_max,
                std::to_string( n ) + " segments, limit " + std::to_string( bd.N_max ) );
    long long c1 = static_cast< long long >( w.m1.comps.size() ), c2 = static_cast< long long >( w.m2.comps.size() );
    rep.record( "(d) component count", std::max( c1, c2 ) <= bd.sum_max,
                std::to_string( std::max( c1, c2 ) ) + " components, limit " + std::to_string( bd.sum_max ) );
    bool bounded = true;
    for ( const auto* m : { &w.m1, &w.m2 } )
        for ( const auto& s : m->comps )
            bounded = bounded && is_L_bounded( s.frame, bd.cL, bd.kb, bd.pL );
    rep.record( "(d) L-bounded components", bounded );
    for ( std::size_t i = 0; i < w.segments.size(); ++i ) {
        const auto& s = w.segments[ i ];
        auto r = is_sigma_matching( slice( w.m1, s.left_begin, s.left_end ), slice( w.m2, s.right_begin, s.right_end ),
                                    sigma );
        std::string name = "(d) segment " + std::to_string( i ) + " sigma-matching";
        if ( !r.type ) {
            std::string why;
            for ( const auto& x : r.reasons )
                why += ( why.empty() ? "" : "; " ) + x;
            rep.record( name, false, why );
        } else if ( *r.type != s.type ) {
            rep.record( name, true,
                        std::string( "declared " ) + match_type_name( s.type ) + ", holds as " +
                            match_type_name( *r.type ) );
        } else {
            rep.record( name, true, std::string( "type " ) + match_type_name( *r.type ) );
        }
    }
    return rep;
}

} // namespace iep
