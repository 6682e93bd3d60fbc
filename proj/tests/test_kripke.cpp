#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "iep/error.hpp"
#include "iep/kripke.hpp"

#include <map>
#include <random>

using namespace iep;

namespace
{

finite_model chain_model( std::vector< signature > atoms )
{
    std::vector< std::pair< bool, std::vector< signature > > > cl;
    for ( auto& a : atoms )
        cl.push_back( { false, { a } } );
    return make_finite_model( cl );
}

canonical_axiom axiom( std::vector< cluster_shape > cs, std::set< int > d = {} )
{
    return { finite_frame{ std::move( cs ) }, std::move( d ) };
}

finite_frame random_frame( std::mt19937& rng, int max_points )
{
    std::vector< cluster_shape > cs;
    int left = 1 + static_cast< int >( rng() % max_points );
    while ( left > 0 ) {
        bool refl = rng() % 2;
        int sz = refl ? 1 + static_cast< int >( rng() % std::min( left, 2 ) ) : 1;
        cs.push_back( { refl, sz } );
        left -= sz;
    }
    return finite_frame{ cs };
}

canonical_axiom random_axiom( std::mt19937& rng )
{
    finite_frame g = random_frame( rng, 3 );
    std::set< int > d;
    for ( int x = 0; x < g.size(); ++x )
        if ( !g.reflexive( x ) && g.cluster_of( x ) > 0 && rng() % 2 )
            d.insert( x );
    return { g, d };
}

// Tries every function from the axiom points to the frame points.
bool brute_refutes( const finite_frame& fr, const canonical_axiom& a )
{
    const auto& g = a.frame;
    const int v = g.size(), w = fr.size();
    std::vector< int > f( v, 0 );
    const int glast = g.cluster_count() - 1, flast = fr.cluster_count() - 1;
    while ( true ) {
        bool ok = true;
        for ( int x = 0; x < v && ok; ++x )
            for ( int y = 0; y < v && ok; ++y ) {
                if ( x != y && f[ x ] == f[ y ] )
                    ok = false;
                if ( g.R( x, y ) != fr.R( f[ x ], f[ y ] ) )
                    ok = false;
            }
        for ( int x = 0; x < v && ok; ++x )
            if ( g.cluster_of( x ) == glast && fr.cluster_of( f[ x ] ) != flast )
                ok = false;
        for ( int x : a.closed_domain ) {
            if ( !ok )
                break;
            int cx = fr.cluster_of( f[ x ] );
            if ( fr.clusters()[ cx ].size != 1 )
                ok = false;
            for ( int y = 0; y < v && ok; ++y )
                if ( g.cluster_of( y ) == g.cluster_of( x ) - 1 && fr.cluster_of( f[ y ] ) != cx - 1 )
                    ok = false;
        }
        if ( ok )
            return true;
        int i = 0;
        while ( i < v && ++f[ i ] == w )
            f[ i++ ] = 0;
        if ( i == v )
            return false;
    }
}

finite_model random_model( std::mt19937& rng, int max_points, bool temporal )
{
    finite_frame fr = random_frame( rng, max_points );
    std::vector< std::pair< bool, std::vector< signature > > > cl;
    for ( const auto& c : fr.clusters() ) {
        std::vector< signature > pts;
        for ( int i = 0; i < c.size; ++i ) {
            signature s;
            if ( rng() % 2 )
                s.insert( "p" );
            if ( rng() % 3 == 0 )
                s.insert( "q" );
            pts.push_back( s );
        }
        cl.push_back( { c.reflexive, pts } );
    }
    return make_finite_model( cl, temporal );
}

// Depth-bounded types: two points share a depth-n type iff they satisfy the
// same sigma-formulas of modal depth at most n.
std::vector< int > depth_types( const finite_model& a, const finite_model& b, const signature& sigma,
                                bool temporal, int depth )
{
    const int na = a.size(), n = na + b.size();
    auto m = [ & ]( int u ) -> const finite_model& { return u < na ? a : b; };
    auto l = [ & ]( int u ) { return u < na ? u : u - na; };
    std::vector< int > t( n );
    std::map< std::vector< int >, int > ids;
    for ( int u = 0; u < n; ++u ) {
        std::vector< int > k{ -1 };
        for ( const auto& p : m( u ).atoms_in( l( u ), sigma ) )
            k.push_back( p == "p" ? 1 : 2 );
        t[ u ] = ids.emplace( k, static_cast< int >( ids.size() ) ).first->second;
    }
    for ( int d = 0; d < depth; ++d ) {
        std::vector< int > nt( n );
        for ( int u = 0; u < n; ++u ) {
            std::set< int > fw, bw;
            for ( int v = 0; v < n; ++v ) {
                if ( ( u < na ) != ( v < na ) )
                    continue;
                if ( m( u ).frame.R( l( u ), l( v ) ) )
                    fw.insert( t[ v ] );
                if ( temporal && m( u ).frame.R( l( v ), l( u ) ) )
                    bw.insert( t[ v ] );
            }
            std::vector< int > k{ d, t[ u ], -2 };
            k.insert( k.end(), fw.begin(), fw.end() );
            k.push_back( -3 );
            k.insert( k.end(), bw.begin(), bw.end() );
            nt[ u ] = ids.emplace( k, static_cast< int >( ids.size() ) ).first->second;
        }
        t = nt;
    }
    return t;
}

} // namespace

TEST_CASE( "frame structure" )
{
    finite_frame fr{ { { false, 1 }, { true, 2 }, { false, 1 } } };
    CHECK( fr.size() == 4 );
    CHECK( fr.R( 0, 1 ) );
    CHECK( fr.R( 1, 2 ) );
    CHECK( fr.R( 2, 1 ) );
    CHECK( fr.R( 1, 1 ) );
    CHECK_FALSE( fr.R( 0, 0 ) );
    CHECK_FALSE( fr.R( 3, 0 ) );
    CHECK_THROWS_AS( finite_frame( { { false, 2 } } ), input_error );
    CHECK_THROWS_AS( finite_frame( std::vector< cluster_shape >{} ), input_error );
}

TEST_CASE( "mc_finite basics" )
{
    finite_model two = chain_model( { {}, {} } );
    CHECK( mc_finite( two, 0, top() ) );
    CHECK( mc_finite( two, 0, dia( top() ) ) );
    CHECK_FALSE( mc_finite( two, 0, dia( dia( top() ) ) ) );
    CHECK_FALSE( mc_finite( two, 1, dia( top() ) ) );
    CHECK_THROWS_AS( mc_finite( two, 2, top() ), input_error );

    finite_model t = chain_model( { { "p" }, {}, {} } );
    t.temporal = true;
    CHECK( mc_finite( t, 2, dia_p( var( "p" ) ) ) );
    CHECK_FALSE( mc_finite( t, 0, dia_p( top() ) ) );
    CHECK( mc_finite( t, 0, neg( dia_f( var( "p" ) ) ) ) );
    CHECK_FALSE( mc_finite( t, 0, var( "zz" ) ) );
}

TEST_CASE( "largest bisimulation basics" )
{
    auto m = make_finite_model( { { false, { { "p" } } }, { true, { { "p" }, { "q" } } } } );
    auto id = largest_sigma_bisim( m, m, { "p", "q" }, false );
    for ( int x = 0; x < m.size(); ++x )
        CHECK( id.count( { x, x } ) );

    auto a = make_finite_model( { { false, { { "p" } } } } );
    auto b = make_finite_model( { { false, { {} } } } );
    CHECK( largest_sigma_bisim( a, b, { "p" }, false ).empty() );
    CHECK( largest_sigma_bisim( a, b, {}, false ).size() == 1 );

    // A reflexive point and a two point reflexive cluster with equal atoms.
    auto c1 = make_finite_model( { { true, { { "p" } } } } );
    auto c2 = make_finite_model( { { true, { { "p" }, { "p" } } } } );
    CHECK( largest_sigma_bisim( c1, c2, { "p" }, true ).size() == 2 );
}

TEST_CASE( "canonical axiom diagnostics" )
{
    CHECK( validate_canonical_axiom( axiom( { { true, 1 } } ) ).empty() );
    auto d1 = validate_canonical_axiom( axiom( { { false, 1 }, { true, 1 } }, { 1 } ) );
    CHECK( std::find( d1.begin(), d1.end(), "D must be irreflexive" ) != d1.end() );
    auto d2 = validate_canonical_axiom( axiom( { { false, 1 } }, { 0 } ) );
    CHECK( std::find( d2.begin(), d2.end(), "D excludes root" ) != d2.end() );
}

TEST_CASE( "finite frame validity examples" )
{
    finite_frame refl{ { { true, 1 } } };
    finite_frame chain2{ { { false, 1 }, { false, 1 } } };
    finite_frame rc{ { { true, 1 }, { false, 1 } } };
    auto circ = axiom( { { true, 1 } } );
    auto circ_dot = axiom( { { true, 1 }, { false, 1 } } );
    CHECK_FALSE( finite_frame_validates_axiom( refl, circ ) );
    CHECK( finite_frame_validates_axiom( chain2, circ ) );
    CHECK_FALSE( finite_frame_validates_axiom( rc, circ_dot ) );
    CHECK( finite_frame_validates_axiom( chain2, circ_dot ) );

    auto dense1 = axiom( { { false, 1 }, { false, 1 } }, { 1 } );
    CHECK_FALSE( finite_frame_validates_axiom( chain2, dense1 ) );
    finite_frame sep{ { { false, 1 }, { true, 1 }, { false, 1 } } };
    CHECK( finite_frame_validates_axiom( sep, dense1 ) );
}

TEST_CASE( "property: cluster search agrees with brute force over all functions" )
{
    std::mt19937 rng( 11 );
    int refuted = 0;
    for ( int i = 0; i < 3000; ++i ) {
        finite_frame fr = random_frame( rng, 6 );
        canonical_axiom a = random_axiom( rng );
        bool brute = brute_refutes( fr, a );
        refuted += brute;
        CHECK( finite_frame_validates_axiom( fr, a ) == !brute );
    }
    CHECK( refuted > 100 );
}

TEST_CASE( "property: largest bisimulation agrees with depth-bounded types" )
{
    std::mt19937 rng( 5 );
    for ( int i = 0; i < 1500; ++i ) {
        bool temporal = i % 2;
        auto a = random_model( rng, 4, temporal );
        auto b = random_model( rng, 4, temporal );
        signature sigma = ( i % 3 == 0 ) ? signature{ "p" } : signature{ "p", "q" };
        auto rel = largest_sigma_bisim( a, b, sigma, temporal );
        auto t = depth_types( a, b, sigma, temporal, std::max( a.size(), b.size() ) );
        for ( int x = 0; x < a.size(); ++x )
            for ( int y = 0; y < b.size(); ++y )
                CHECK( rel.count( { x, y } ) == ( t[ x ] == t[ a.size() + y ] ? 1u : 0u ) );

        // Replay of the defining conditions on the relation.
        for ( auto [ x, y ] : rel ) {
            CHECK( a.atoms_in( x, sigma ) == b.atoms_in( y, sigma ) );
            for ( int x2 = 0; x2 < a.size(); ++x2 ) {
                if ( !a.frame.R( x, x2 ) )
                    continue;
                bool found = false;
                for ( int y2 = 0; y2 < b.size() && !found; ++y2 )
                    found = b.frame.R( y, y2 ) && rel.count( { x2, y2 } );
                CHECK( found );
            }
            if ( temporal )
                for ( int y2 = 0; y2 < b.size(); ++y2 ) {
                    if ( !b.frame.R( y2, y ) )
                        continue;
                    bool found = false;
                    for ( int x2 = 0; x2 < a.size() && !found; ++x2 )
                        found = a.frame.R( x2, x ) && rel.count( { x2, y2 } );
                    CHECK( found );
                }
        }
    }
}

TEST_CASE( "finite temporal frame conditions" )
{
    finite_frame cl{ { { true, 2 } } };
    CHECK( finite_temporal_frame_check( cl, temporal_logic::lin_q ) );
    CHECK( finite_temporal_frame_check( cl, temporal_logic::lin_r ) );
    finite_frame two{ { { true, 1 }, { true, 1 } } };
    CHECK( finite_temporal_frame_check( two, temporal_logic::lin_q ) );
    CHECK_FALSE( finite_temporal_frame_check( two, temporal_logic::lin_r ) );
    finite_frame dot{ { { false, 1 } } };
    CHECK_FALSE( finite_temporal_frame_check( dot, temporal_logic::lin_q ) );
    CHECK( finite_temporal_frame_check( dot, temporal_logic::lin ) );
    finite_frame sand{ { { true, 1 }, { false, 1 }, { true, 1 }, { false, 1 }, { true, 1 } } };
    CHECK( finite_temporal_frame_check( sand, temporal_logic::lin_r ) );
    finite_frame dd{ { { true, 1 }, { false, 1 }, { false, 1 }, { true, 1 } } };
    CHECK_FALSE( finite_temporal_frame_check( dd, temporal_logic::lin_q ) );
    CHECK( temporal_logic_from_name( "LinZ" ) == temporal_logic::lin_z );
    CHECK_FALSE( temporal_logic_from_name( "Lin_Z" ).has_value() );
}
