#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bounds_oracle.hpp"
#include "properties.hpp"

#include "iep/error.hpp"
#include "iep/interp.hpp"
#include "iep/io.hpp"

using namespace iep;

namespace
{

formula phi1() { return parse_file( "fixtures/phi1.fml" ); }
formula phi2() { return parse_file( "fixtures/phi2.fml" ); }
formula phi1p() { return parse_file( "fixtures/phi1p.fml" ); }

witness_pair fixture() { return witness_from_json( read_json_file( "fixtures/gl3_witness.json" ) ); }

std::vector< simple_model > slice( const quasi_model& m, int b, int e )
{
    return { m.comps.begin() + b, m.comps.begin() + e };
}

simple_model point( std::initializer_list< const char* > atoms )
{
    signature s;
    for ( const char* a : atoms )
        s.insert( a );
    return { chain_frame( 1 ), { s }, {} };
}

simple_model one_cluster( std::vector< signature > atoms )
{
    return { cluster_frame( static_cast< int >( atoms.size() ) ), std::move( atoms ), {} };
}

} // namespace

TEST_CASE( "bounds closed forms" )
{
    bounds b = bounds_from( 0, 1 );
    CHECK( b.kb == 6 );
    CHECK( b.pL == 66 );
    CHECK( b.N_max == 11 );
    CHECK( b.sum_max == 17 );
    CHECK( b.size_max == 17 * 66 );
    CHECK( builtin_logic( "GL.3" ).max_axiom_points() == 2 );
    CHECK( compute_bounds( builtin_logic( "GL.3" ), var( "p" ), var( "q" ) ).cL == 2 );
    CHECK( compute_bounds( builtin_logic( "K4.3" ), phi1(), phi2() ).kb ==
           3 + 3 * static_cast< long long >( std::max( formula_size( phi1() ), formula_size( phi2() ) ) ) );
    CHECK_THROWS_AS( bounds_from( 1, 1LL << 40 ), input_error );
    CHECK_THROWS_AS( bounds_from( -1, 1 ), input_error );
}

TEST_CASE( "property: bounds against big-integer evaluation" )
{
    std::mt19937_64 rng( 99 );
    std::string first;
    CHECK( testing::bounds_mismatches( rng, 100, first ) == 0 );
    CHECK( first.empty() );
}

TEST_CASE( "sigma-matching examples" )
{
    signature sigma{ "p1", "p2" };
    auto w = fixture();
    // The tails alone are pointwise equal, and type a is tried first.
    auto tail = is_sigma_matching( slice( w.m1, 2, 3 ), slice( w.m2, 2, 3 ), sigma );
    REQUIRE( tail.type );
    CHECK( *tail.type == match_type::a );
    auto seg = is_sigma_matching( slice( w.m1, 1, 3 ), slice( w.m2, 1, 3 ), sigma );
    REQUIRE( seg.type );
    CHECK( *seg.type == match_type::c );

    auto same = is_sigma_matching( { point( { "p1" } ) }, { point( { "p1" } ) }, sigma );
    REQUIRE( same.type );
    CHECK( *same.type == match_type::a );

    auto bad = is_sigma_matching( { one_cluster( { { "p" } } ) }, { one_cluster( { {} } ) }, { "p" } );
    CHECK_FALSE( bad.type );
    CHECK( bad.reasons.size() == 3 );

    // Type b: different frames, both ending in clusters carrying every type.
    auto b = is_sigma_matching( { point( { "p" } ), one_cluster( { { "p" }, {} } ) },
                                { one_cluster( { {}, { "p" }, { "p", "q" } } ) }, { "p" } );
    REQUIRE( b.type );
    CHECK( *b.type == match_type::b );
}

TEST_CASE( "certify_bisimilar examples" )
{
    auto w = fixture();
    CHECK( certify_bisimilar( w, { "p1", "p2" } ) );

    witness_pair self{ w.m1, w.m1, {} };
    for ( int c = 0; c < 3; ++c )
        self.segments.push_back( { match_type::a, c, c + 1, c, c + 1 } );
    CHECK( certify_bisimilar( self, { "p1", "p2", "q1" } ) );

    witness_pair off = w;
    off.m2.comps[ 0 ].atoms[ 0 ] = { "p1" };
    CHECK_FALSE( certify_bisimilar( off, { "p1", "p2" } ) );
}

TEST_CASE( "verify_witness on the fixture and its mutations" )
{
    logic gl3 = builtin_logic( "GL.3" );
    auto bd = compute_bounds( gl3, phi1(), phi2() );
    auto rep = verify_witness( fixture(), phi1(), phi2(), gl3, bd );
    CHECK( rep.ok );
    CHECK( rep.transcript.size() == 10 );

    auto flipped = fixture();
    flipped.m1.comps[ 2 ].atoms[ 1 ] = { "q1" };
    auto r2 = verify_witness( flipped, phi1(), phi2(), gl3, bd );
    CHECK_FALSE( r2.ok );
    CHECK( r2.failed == "(d) segment 1 sigma-matching" );

    logic logn = builtin_logic( "LogN" );
    auto r3 = verify_witness( fixture(), phi1(), phi2(), logn, compute_bounds( logn, phi1(), phi2() ) );
    CHECK_FALSE( r3.ok );
    CHECK( r3.failed == "(b) frames for LogN" );

    auto broken = fixture();
    broken.segments.pop_back();
    auto r4 = verify_witness( broken, phi1(), phi2(), gl3, bd );
    CHECK( r4.failed == "segmentation" );
}

TEST_CASE( "validity examples" )
{
    logic k43 = builtin_logic( "K4.3" ), gl3 = builtin_logic( "GL.3" );
    CHECK( decide_validity( implies( phi1(), phi2() ), k43 ).status == validity_status::valid );
    CHECK( decide_validity( implies( phi1p(), phi2() ), k43 ).status == validity_status::valid );

    auto r = decide_validity( implies( dia( var( "p" ) ), var( "p" ) ), k43 );
    REQUIRE( r.status == validity_status::countermodel );
    CHECK( model_size( frame_of( *r.countermodel ) ) == 2 );
    CHECK_FALSE( mc_quasi( *r.countermodel, r.countermodel->root, implies( dia( var( "p" ) ), var( "p" ) ) ) );

    formula lob = implies( box( implies( box( var( "p" ) ), var( "p" ) ) ), box( var( "p" ) ) );
    CHECK( decide_validity( lob, gl3 ).status == validity_status::valid );
    auto c = decide_validity( lob, k43 );
    REQUIRE( c.status == validity_status::countermodel );
    CHECK_FALSE( mc_quasi( *c.countermodel, c.countermodel->root, lob ) );
}

TEST_CASE( "witness search examples" )
{
    logic gl3 = builtin_logic( "GL.3" ), logn = builtin_logic( "LogN" );
    auto bd = compute_bounds( gl3, phi1(), phi2() );
    auto a = search_witness( phi1(), phi2(), gl3, bd, {} );
    REQUIRE( a.status == search_status::found );
    CHECK( verify_witness( *a.witness, phi1(), phi2(), gl3, bd ).ok );

    auto bd2 = compute_bounds( logn, phi1p(), phi2() );
    auto b = search_witness( phi1p(), phi2(), logn, bd2, {} );
    REQUIRE( b.status == search_status::found );
    CHECK( verify_witness( *b.witness, phi1p(), phi2(), logn, bd2 ).ok );

    auto p = var( "p" );
    auto c = search_witness( p, p, builtin_logic( "K4.3" ), compute_bounds( builtin_logic( "K4.3" ), p, p ), {} );
    CHECK( c.status == search_status::exhausted );
}

TEST_CASE( "interpolant enumeration examples" )
{
    formula p = var( "p" ), q = var( "q" ), r = var( "r" );
    logic k43 = builtin_logic( "K4.3" );
    auto c = enumerate_interpolant( conj( p, q ), disj( p, r ), k43, {} );
    REQUIRE( c );
    CHECK( *c == p );
    auto d = enumerate_interpolant( p, p, builtin_logic( "GL.3" ), {} );
    REQUIRE( d );
    CHECK( *d == p );
    enumerate_limits small;
    small.max_size = 4;
    small.max_depth = 2;
    CHECK_FALSE( enumerate_interpolant( phi1(), phi2(), builtin_logic( "GL.3" ), small ) );

    auto cands = sigma_formulas( { "p" }, false, 3, 4 );
    CHECK( cands.front() == top() );
    CHECK( std::find( cands.begin(), cands.end(), neg( neg( p ) ) ) == cands.end() );
    CHECK( std::find( cands.begin(), cands.end(), dia( dia( p ) ) ) != cands.end() );

    enumerate_limits wide;
    wide.threads = 4;
    auto e = enumerate_interpolant( conj( p, q ), disj( p, r ), k43, wide );
    REQUIRE( e );
    CHECK( *e == p );
}

TEST_CASE( "decide_iep verdicts" )
{
    formula p = var( "p" ), q = var( "q" ), r = var( "r" );
    auto a = decide_iep( phi1(), phi2(), builtin_logic( "GL.3" ), {} );
    CHECK( a.kind == verdict_kind::no_interpolant );
    CHECK( a.witness );
    auto b = decide_iep( conj( p, q ), disj( p, r ), builtin_logic( "K4.3" ), {} );
    CHECK( b.kind == verdict_kind::interpolant_exists );
    REQUIRE( b.interpolant );
    CHECK( *b.interpolant == p );
    auto c = decide_iep( p, neg( p ), builtin_logic( "K4.3" ), {} );
    CHECK( c.kind == verdict_kind::implication_invalid );
    CHECK( c.countermodel );
    auto d = decide_iep( phi1p(), phi2(), builtin_logic( "LogN" ), {} );
    CHECK( d.kind == verdict_kind::no_interpolant );
    CHECK_THROWS_AS( decide_iep( p, p, builtin_logic( "LinZ" ), {} ), input_error );
}

TEST_CASE( "property: larger limits keep NoInterpolant" )
{
    // Strengthening phi1 or weakening phi2 keeps the implication valid.
    std::mt19937 rng( 31 );
    const std::vector< std::string > names{ "K4.3", "GL.3" };
    int kept = 0;
    for ( int i = 0; i < 40; ++i ) {
        logic L = builtin_logic( names[ i % 2 ] );
        formula f1 = phi1(), f2 = phi2();
        if ( i % 3 != 1 )
            f1 = conj( f1, testing::random_formula( rng, 1, 3, false, { "p1", "q1" } ) );
        if ( i % 3 != 0 )
            f2 = disj( f2, testing::random_formula( rng, 1, 3, false, { "p2", "q2" } ) );
        iep_options small;
        small.search.max_size = 8;
        small.search.budget = 3000;
        small.enumerate.max_size = 3;
        auto v = decide_iep( f1, f2, L, small );
        if ( v.kind != verdict_kind::no_interpolant )
            continue;
        iep_options big = small;
        big.search.max_size = 16;
        big.search.budget = 30000;
        big.search.max_segments = 6;
        CHECK( decide_iep( f1, f2, L, big ).kind == verdict_kind::no_interpolant );
        ++kept;
    }
    CHECK( kept > 5 );
}

TEST_CASE( "property: every search witness verifies" )
{
    std::mt19937 rng( 32 );
    const std::vector< std::string > names{ "K4.3", "GL.3", "LogN", "Dense" };
    int found = 0;
    search_limits lim;
    lim.max_size = 10;
    lim.budget = 5000;
    for ( int i = 0; i < 150; ++i ) {
        logic L = builtin_logic( names[ i % names.size() ] );
        formula f1 = testing::random_formula( rng, 2, 6, false, { "p", "q" } );
        formula f2 = testing::random_formula( rng, 2, 6, false, { "p", "r" } );
        auto bd = compute_bounds( L, f1, f2 );
        auto s = search_witness( f1, f2, L, bd, lim );
        if ( !s.witness )
            continue;
        ++found;
        CHECK( verify_witness( *s.witness, f1, f2, L, bd ).ok );
    }
    CHECK( found > 10 );
}

TEST_CASE( "property: certified pairs are bisimilar on truncations" )
{
    std::mt19937 rng( 33 );
    auto t = testing::certify_cross_check( rng, 250, 20000 );
    CHECK( t.cases >= 200 );
    CHECK( t.violations == 0 );
    CHECK( t.first_violation.empty() );

    // The generator reaches every matching type.
    std::set< match_type > seen;
    std::mt19937 again( 34 );
    for ( int i = 0; i < 400; ++i ) {
        auto w = testing::random_matching_pair( again, { "p", "q" }, { "r" } );
        if ( certify_bisimilar( w, { "p", "q" } ) )
            for ( const auto& s : w.segments )
                seen.insert( s.type );
    }
    CHECK( seen.size() == 3 );
}

TEST_CASE( "property: witnesses and interpolants exclude each other" )
{
    std::mt19937 rng( 35 );
    auto t = testing::soundness_exclusion( rng, 210 );
    CHECK( t.cases >= 200 );
    CHECK( t.violations == 0 );
    CHECK( t.hits_a > 10 );
    CHECK( t.hits_b > 10 );
}
