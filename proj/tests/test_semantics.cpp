#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "iep/error.hpp"
#include "iep/semantics.hpp"
#include "support.hpp"

using namespace iep;

namespace
{

const char* phi1_text = "dia(p1 & dia+(~q1)) & box(p2 -> box+(q1))";
const char* phi2_text = "~(dia(p2 & dia+(~q2)) & box(p1 -> box+(q2)))";

quasi_model gl3_m1()
{
    return ordered_sum( { { chain_frame( 1 ), { {} }, { "x1" } },
                          { chain_frame( 1 ), { { "p1" } }, { "y1" } },
                          { tadpole_r_frame( 2, false ), { { "p2", "q1" }, { "p1", "q1" } }, {} } } );
}

quasi_model gl3_m2()
{
    return ordered_sum( { { chain_frame( 1 ), { {} }, { "x2" } },
                          { chain_frame( 1 ), { { "p2" } }, { "y2" } },
                          { tadpole_r_frame( 2, false ), { { "p2", "q2" }, { "p1", "q2" } }, {} } } );
}

quasi_frame qf( std::vector< atomic_frame > comps ) { return { std::move( comps ), false }; }

int check_agreement( std::mt19937& rng, bool temporal, int cases )
{
    const std::vector< std::string > vars{ "p", "q", "r" };
    int compared = 0;
    for ( int i = 0; i < cases; ++i ) {
        auto m = testing::random_quasi( rng, temporal, { "p", "q" } );
        int md = 1 + static_cast< int >( rng() % 3 );
        formula f = testing::random_formula( rng, md, 8, temporal, vars );
        int d = modal_depth( f );
        int kmax = 1;
        for ( const auto& c : m.comps )
            kmax = std::max( kmax, c.frame.k );
        auto t = truncate( m, kmax * ( d + 2 ) );
        auto truth = mc_finite_all( t.model, f );
        for ( int x = 0; x < t.model.size(); ++x ) {
            long long dist = t.boundary_distance[ x ];
            if ( temporal && dist >= 0 && dist <= d )
                continue;
            INFO( render( f ) );
            INFO( t.model.names[ x ] );
            CHECK( mc_quasi( m, t.origin[ x ], f ) == truth[ x ] );
            ++compared;
        }
    }
    return compared;
}

} // namespace

TEST_CASE( "model checking the standard unimodal pair" )
{
    auto m1 = gl3_m1(), m2 = gl3_m2();
    formula f1 = parse( phi1_text ), f2 = parse( phi2_text );
    CHECK( mc_quasi( m1, parse_point( m1, "x1" ), f1 ) );
    CHECK( mc_quasi( m2, parse_point( m2, "x2" ), neg( f2 ) ) );
    CHECK_FALSE( mc_quasi( m1, parse_point( m1, "x1" ), bot() ) );
    CHECK( mc_quasi( m1, parse_point( m1, "2:b1001" ), var( "p1" ) ) );
    CHECK_THROWS_AS( mc_quasi( m1, { 5, part::finite, 0 }, top() ), input_error );
}

TEST_CASE( "empty valuation tadpole" )
{
    auto m = ordered_sum( { { tadpole_r_frame( 1, false ), { {} }, {} } } );
    formula bq = box( var( "q1" ) );
    CHECK_FALSE( mc_quasi( m, { 0, part::cluster, 0 }, bq ) );
    CHECK( mc_quasi( m, { 0, part::tail, 0 }, bq ) );
    CHECK_FALSE( mc_quasi( m, { 0, part::tail, 1 }, bq ) );
}

TEST_CASE( "temporal basics" )
{
    auto m = ordered_sum( { { chain_frame( 2 ), { {}, {} }, {} } }, true );
    CHECK( temporal_mc_quasi( m, { 0, part::finite, 1 }, dia_p( top() ) ) );
    CHECK_FALSE( temporal_mc_quasi( m, { 0, part::finite, 0 }, dia_p( top() ) ) );
    auto l = ordered_sum( { { tadpole_l_frame( 1, false ), {}, {} } }, true );
    CHECK( temporal_mc_quasi( l, { 0, part::tail, 0 }, neg( dia_p( top() ) ) ) );
    CHECK( temporal_mc_quasi( l, { 0, part::tail, 9 }, dia_p( neg( dia_p( top() ) ) ) ) );
    CHECK_THROWS_AS( temporal_mc_quasi( gl3_m1(), { 0, part::finite, 0 }, top() ), input_error );
}

TEST_CASE( "property: quasi-finite checker agrees with truncations" )
{
    std::mt19937 rng( 2024 );
    int uni = check_agreement( rng, false, 700 );
    int temp = check_agreement( rng, true, 700 );
    CHECK( uni > 5000 );
    CHECK( temp > 5000 );
}

TEST_CASE( "frame validity on tadpoles" )
{
    logic gl3 = builtin_logic( "GL.3" ), logn = builtin_logic( "LogN" );
    for ( int k = 1; k <= 3; ++k ) {
        CHECK( validates_logic( qf( { tadpole_r_frame( k, false ) } ), gl3 ) );
        CHECK_FALSE( validates_logic( qf( { tadpole_r_frame( k, true ) } ), gl3 ) );
        for ( const auto& a : gl3.axioms )
            CHECK( validates_axiom( qf( { tadpole_r_frame( k, false ) } ), a ) );
    }
    auto fr = qf( { chain_frame( 1 ), chain_frame( 1 ), tadpole_r_frame( 2, false ), cluster_frame( 1 ) } );
    for ( const auto& a : logn.axioms )
        CHECK( validates_axiom( fr, a ) );

    logic dense = builtin_logic( "Dense" );
    CHECK_FALSE( validates_axiom( qf( { chain_frame( 1 ), chain_frame( 1 ) } ), dense.axioms[ 0 ] ) );
    CHECK( validates_logic( qf( { chain_frame( 1 ), chain_frame( 1 ), tadpole_r_frame( 2, false ) } ), gl3 ) );
    CHECK_FALSE( validates_logic( qf( { cluster_frame( 1 ) } ), gl3 ) );
    CHECK( validates_logic( qf( { cluster_frame( 4 ), tadpole_r_frame( 1, true ) } ), builtin_logic( "K4.3" ) ) );
    CHECK_THROWS_AS( validates_logic( qf( { cluster_frame( 1 ) } ), builtin_logic( "LinZ" ) ), input_error );
}

TEST_CASE( "property: backward automaton agrees with the embedding search" )
{
    std::mt19937 rng( 17 );
    std::vector< canonical_axiom > axioms;
    for ( const auto& n : { "GL.3", "LogN", "Dense" } )
        for ( const auto& a : builtin_logic( n ).axioms )
            axioms.push_back( a );
    axioms.push_back( { finite_frame{ { { true, 2 }, { false, 1 }, { false, 1 } } }, { 3 } } );
    axioms.push_back( { finite_frame{ { { false, 1 }, { true, 1 }, { false, 1 }, { true, 2 } } }, { 2 } } );
    int refuted = 0;
    for ( int i = 0; i < 2000; ++i ) {
        quasi_frame f;
        int n = 1 + static_cast< int >( rng() % 4 );
        for ( int c = 0; c < n; ++c )
            f.comps.push_back( testing::random_atomic( rng, false ) );
        for ( const auto& a : axioms ) {
            axiom_automaton aut( a );
            axiom_state s = aut.start();
            for ( int c = n - 1; c >= 0; --c )
                s = aut.prepend_component( s, f.comps[ c ] );
            bool v = validates_axiom( f, a );
            refuted += !v;
            CHECK( aut.refuted( s ) == !v );
        }
    }
    CHECK( refuted > 1000 );
}

TEST_CASE( "property: lifted finite frames agree with the finite check" )
{
    std::mt19937 rng( 23 );
    std::vector< canonical_axiom > axioms;
    for ( const auto& n : { "GL.3", "LogN", "Dense" } )
        for ( const auto& a : builtin_logic( n ).axioms )
            axioms.push_back( a );
    for ( int i = 0; i < 1000; ++i ) {
        std::vector< cluster_shape > cs;
        int n = 1 + static_cast< int >( rng() % 6 );
        for ( int c = 0; c < n; ++c ) {
            bool refl = rng() % 2;
            cs.push_back( { refl, refl ? 1 + static_cast< int >( rng() % 3 ) : 1 } );
        }
        finite_frame fr{ cs };
        for ( const auto& a : axioms )
            CHECK( validates_axiom( lift( fr ), a ) == finite_frame_validates_axiom( fr, a ) );
    }
}

TEST_CASE( "property: cofinal axioms survive deleting non-final components" )
{
    std::mt19937 rng( 29 );
    std::vector< canonical_axiom > axioms;
    for ( const auto& n : { "GL.3", "LogN" } )
        for ( const auto& a : builtin_logic( n ).axioms )
            axioms.push_back( a );
    for ( int i = 0; i < 1000; ++i ) {
        quasi_frame f;
        int n = 2 + static_cast< int >( rng() % 3 );
        for ( int c = 0; c < n; ++c )
            f.comps.push_back( testing::random_atomic( rng, false ) );
        quasi_frame g = f;
        g.comps.erase( g.comps.begin() + static_cast< long >( rng() % ( n - 1 ) ) );
        for ( const auto& a : axioms )
            if ( validates_axiom( f, a ) )
                CHECK( validates_axiom( g, a ) );
    }
}
