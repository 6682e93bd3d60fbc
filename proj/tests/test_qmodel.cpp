#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "iep/error.hpp"
#include "iep/qmodel.hpp"
#include "support.hpp"

using namespace iep;

namespace
{

simple_model tadpole( int k, bool refl, std::vector< signature > atoms )
{
    return { tadpole_r_frame( k, refl ), std::move( atoms ), {} };
}

} // namespace

TEST_CASE( "ordered sums" )
{
    auto m = ordered_sum( { { chain_frame( 1 ), { {} }, { "x1" } },
                            { chain_frame( 1 ), { { "p1" } }, { "y1" } },
                            tadpole( 2, false, { { "p2", "q1" }, { "p1", "q1" } } ) } );
    CHECK( m.comps.size() == 3 );
    CHECK( model_size( frame_of( m ) ) == 4 );

    auto one = ordered_sum( { { cluster_frame( 1 ), {}, {} } } );
    auto t = truncate( one, 3 );
    CHECK( t.model.size() == 1 );
    CHECK( t.model.frame.reflexive( 0 ) );

    auto z = ordered_sum( { { tadpole_r_frame( 1, false ), {}, {} }, { tadpole_lr_frame( 2 ), {}, {} },
                            { tadpole_l_frame( 1, false ), {}, {} } },
                          true );
    CHECK( z.temporal );
    CHECK_THROWS_AS( ordered_sum( {} ), input_error );
    CHECK_THROWS_AS( ordered_sum( { { tadpole_l_frame( 1, false ), {}, {} } } ), input_error );
    CHECK_THROWS_AS( ordered_sum( { { chain_frame( 2 ), { {} }, {} } } ), input_error );
}

TEST_CASE( "L-boundedness" )
{
    const long long cL = 2, kb = 6, pL = 66;
    CHECK( is_L_bounded( chain_frame( 3 ), cL, kb, pL ) );
    CHECK_FALSE( is_L_bounded( chain_frame( 4 ), cL, kb, pL ) );
    CHECK( is_L_bounded( cluster_frame( 66 ), cL, kb, pL ) );
    CHECK_FALSE( is_L_bounded( tadpole_r_frame( 67, false ), cL, kb, pL ) );
    CHECK( is_L_bounded( cluster_frame( 1 ), 0, 1, 1 ) );
}

TEST_CASE( "truncation shapes" )
{
    auto m = ordered_sum( { tadpole( 2, false, { { "p" }, {} } ) } );
    auto t = truncate( m, 4 );
    REQUIRE( t.model.size() == 6 );
    CHECK( t.model.frame.cluster_count() == 5 );
    CHECK( t.model.names[ 2 ] == "0:b3" );
    CHECK( t.model.names[ 5 ] == "0:b0" );
    for ( int i = 2; i < 6; ++i ) {
        long long n = t.origin[ i ].index;
        CHECK( t.model.atoms[ i ] == m.comps[ 0 ].atoms[ n % 2 ] );
        CHECK_FALSE( t.model.frame.reflexive( i ) );
    }
    CHECK( t.model.frame.R( 0, 5 ) );
    CHECK( t.model.frame.R( 2, 5 ) );
    CHECK_FALSE( t.model.frame.R( 5, 2 ) );

    auto lr = ordered_sum( { { tadpole_lr_frame( 1 ), {}, {} } }, true );
    auto tl = truncate( lr, 2 );
    CHECK( tl.model.size() == 5 );
    CHECK( tl.model.names.front() == "0:bL0" );
    CHECK( tl.model.names.back() == "0:bR0" );
}

TEST_CASE( "points" )
{
    auto m = ordered_sum( { { chain_frame( 1 ), { {} }, { "x1" } }, tadpole( 2, false, { { "p" }, {} } ) } );
    CHECK( parse_point( m, "x1" ) == point_ref{ 0, part::finite, 0 } );
    CHECK( parse_point( m, "1:b7" ) == point_ref{ 1, part::tail, 7 } );
    CHECK( parse_point( m, "1:a1" ) == point_ref{ 1, part::cluster, 1 } );
    CHECK( parse_point( m, "1:1" ) == point_ref{ 1, part::cluster, 1 } );
    CHECK_THROWS_AS( parse_point( m, "1:a2" ), input_error );
    CHECK_THROWS_AS( parse_point( m, "0:b1" ), input_error );
    CHECK_THROWS_AS( parse_point( m, "nowhere" ), input_error );
    CHECK( point_name( m, { 1, part::tail, 3 } ) == "1:b3" );
    CHECK( atoms_at( m, { 1, part::tail, 6 } ) == signature{ "p" } );
}

TEST_CASE( "property: tail periodicity and truncation embedding" )
{
    std::mt19937 rng( 3 );
    const std::vector< std::string > vars{ "p", "q" };
    for ( int i = 0; i < 300; ++i ) {
        auto m = testing::random_quasi( rng, i % 2, vars );
        for ( int w = 1; w <= 7; ++w ) {
            auto a = truncate( m, w );
            auto b = truncate( m, w + 1 );
            for ( int x = 0; x < a.model.size(); ++x ) {
                const auto& p = a.origin[ x ];
                if ( p.where != part::finite && p.where != part::cluster ) {
                    const auto& c = m.comps[ p.comp ];
                    CHECK( a.model.atoms[ x ] == c.atoms[ p.index % c.frame.k ] );
                }
                int y = b.index_of( p );
                REQUIRE( y >= 0 );
                CHECK( b.model.atoms[ y ] == a.model.atoms[ x ] );
                for ( int x2 = 0; x2 < a.model.size(); ++x2 )
                    CHECK( a.model.frame.R( x, x2 ) == b.model.frame.R( y, b.index_of( a.origin[ x2 ] ) ) );
            }
        }
    }
}

TEST_CASE( "flattening sums" )
{
    std::mt19937 rng( 9 );
    const std::vector< std::string > vars{ "p" };
    for ( int i = 0; i < 50; ++i ) {
        auto a = testing::random_quasi( rng, false, vars );
        auto b = testing::random_quasi( rng, false, vars );
        auto comps = a.comps;
        comps.insert( comps.end(), b.comps.begin(), b.comps.end() );
        auto ab = ordered_sum( comps );
        CHECK( model_size( frame_of( ab ) ) == model_size( frame_of( a ) ) + model_size( frame_of( b ) ) );
        auto t = truncate( ab, 3 );
        auto ta = truncate( a, 3 );
        CHECK( t.model.size() == ta.model.size() + truncate( b, 3 ).model.size() );
    }
}
