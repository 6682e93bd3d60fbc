#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"

#include "iep/error.hpp"
#include "iep/io.hpp"

using namespace iep;

namespace
{

bool same_model( const quasi_model& a, const quasi_model& b )
{
    if ( a.comps.size() != b.comps.size() || !( a.root == b.root ) || a.temporal != b.temporal )
        return false;
    for ( std::size_t i = 0; i < a.comps.size(); ++i )
        if ( !( a.comps[ i ].frame == b.comps[ i ].frame ) || a.comps[ i ].atoms != b.comps[ i ].atoms ||
             a.comps[ i ].names != b.comps[ i ].names )
            return false;
    return true;
}

} // namespace

TEST_CASE( "model documents" )
{
    auto m = model_from_json( read_json_file( "fixtures/gl3_m1.json" ) );
    CHECK( m.comps.size() == 3 );
    CHECK( point_name( m, m.root ) == "x1" );
    CHECK( m.comps[ 2 ].frame == tadpole_r_frame( 2, false ) );
    CHECK( model_to_json( m )[ "schema" ] == 1 );
}

TEST_CASE( "property: model round trip" )
{
    std::mt19937 rng( 51 );
    for ( int i = 0; i < 500; ++i ) {
        bool temporal = i % 2;
        auto m = testing::random_quasi( rng, temporal, { "p", "q" } );
        auto back = model_from_json( json::parse( model_to_json( m ).dump() ) );
        CHECK( same_model( m, back ) );
        auto f = frame_from_json( frame_to_json( frame_of( m ) ) );
        CHECK( f.comps == frame_of( m ).comps );
    }
}

TEST_CASE( "schema and field errors" )
{
    json j = model_to_json( model_from_json( read_json_file( "fixtures/gl3_m1.json" ) ) );
    json wrong = j;
    wrong[ "schema" ] = 2;
    CHECK_THROWS_AS( check_schema( wrong ), input_error );
    json missing = j;
    missing.erase( "components" );
    CHECK_THROWS_AS( model_from_json( missing ), input_error );
    json bad_root = j;
    bad_root[ "root" ] = "nowhere";
    CHECK_THROWS_AS( model_from_json( bad_root ), input_error );
    json bad_shape = j;
    bad_shape[ "components" ][ 0 ][ "shape" ] = "ring";
    CHECK_THROWS_AS( model_from_json( bad_shape ), input_error );
    json arity = j;
    arity[ "components" ][ 2 ][ "atoms" ] = json::array( { json::array() } );
    CHECK_THROWS_AS( model_from_json( arity ), input_error );
    CHECK_THROWS_AS( read_json_file( "fixtures/missing.json" ), input_error );
    json lr = frame_to_json( { { tadpole_lr_frame( 2 ) }, true } );
    lr[ "temporal" ] = false;
    CHECK_THROWS_AS( frame_from_json( lr ), input_error );
}

TEST_CASE( "axiom documents" )
{
    auto ax = axioms_from_json( read_json_file( "fixtures/gl3_axioms.json" ) );
    logic file = unimodal_logic( "file", ax );
    logic gl3 = builtin_logic( "GL.3" );
    for ( int k = 1; k <= 3; ++k )
        for ( bool refl : { false, true } ) {
            quasi_frame f{ { chain_frame( 1 ), tadpole_r_frame( k, refl ) }, false };
            CHECK( validates_logic( f, file ) == validates_logic( f, gl3 ) );
        }
    auto round = axioms_from_json( axioms_to_json( gl3.axioms ) );
    REQUIRE( round.size() == gl3.axioms.size() );
    for ( std::size_t i = 0; i < round.size(); ++i )
        CHECK( round[ i ].frame.clusters().size() == gl3.axioms[ i ].frame.clusters().size() );
    json bad{ { "schema", 1 },
              { "axioms", json::array( { { { "clusters", json::array( { { { "reflexive", false }, { "size", 2 } } } ) } } } ) } };
    CHECK_THROWS_AS( axioms_from_json( bad ), input_error );
}

TEST_CASE( "certificate round trips" )
{
    auto w = witness_from_json( read_json_file( "fixtures/gl3_witness.json" ) );
    formula f1 = parse_file( "fixtures/phi1.fml" ), f2 = parse_file( "fixtures/phi2.fml" );
    json j = witness_to_json( w, f1, f2, "GL.3" );
    auto back = witness_from_json( j );
    CHECK( same_model( w.m1, back.m1 ) );
    CHECK( same_model( w.m2, back.m2 ) );
    REQUIRE( back.segments.size() == 2 );
    CHECK( back.segments[ 1 ].type == match_type::c );
    CHECK( parse( j[ "phi1" ].get< std::string >() ) == f1 );

    auto t = temporal_witness_from_json( read_json_file( "fixtures/linz_witness.json" ) );
    json tj = temporal_witness_to_json( t, f1, f2, temporal_logic::lin_z );
    auto tb = temporal_witness_from_json( tj );
    CHECK( same_model( t.m1, tb.m1 ) );
    REQUIRE( tb.blocks.size() == t.blocks.size() );
    CHECK( tb.blocks[ 0 ].kind == block_kind::sandwich );
    CHECK_THROWS_AS( temporal_witness_from_json( j ), input_error );
    CHECK_THROWS_AS( witness_from_json( tj ), input_error );
}
