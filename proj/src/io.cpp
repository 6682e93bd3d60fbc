#include "iep/io.hpp"

#include "iep/error.hpp"

#include <fstream>
#include <sstream>

namespace iep
{

namespace
{

const json& field( const json& j, const char* key )
{
    if ( !j.is_object() || !j.contains( key ) )
        throw input_error( std::string( "missing field: " ) + key );
    return j.at( key );
}

template < typename T >
T get( const json& j, const char* key )
{
    try {
        return field( j, key ).get< T >();
    } catch ( const json::exception& e ) {
        throw input_error( std::string( "bad field " ) + key + ": " + e.what() );
    }
}

template < typename T >
T get_or( const json& j, const char* key, T fallback )
{
    if ( !j.is_object() || !j.contains( key ) )
        return fallback;
    return get< T >( j, key );
}

json range( int b, int e ) { return json::array( { b, e } ); }

std::pair< int, int > range_from( const json& j, const char* key )
{
    auto v = get< std::vector< int > >( j, key );
    if ( v.size() != 2 )
        throw input_error( std::string( "field " ) + key + " must be [begin, end]" );
    return { v[ 0 ], v[ 1 ] };
}

json frame_fields( const atomic_frame& f )
{
    return { { "shape", shape_name( f.kind ) }, { "m", f.m }, { "k", f.k }, { "tail_reflexive", f.tail_reflexive } };
}

atomic_frame frame_fields_from( const json& c )
{
    atomic_frame f;
    f.kind = shape_from_name( get< std::string >( c, "shape" ) );
    f.m = get_or( c, "m", 1 );
    f.k = get_or( c, "k", 1 );
    f.tail_reflexive = get_or( c, "tail_reflexive", false );
    return f;
}

} // namespace

void check_schema( const json& j )
{
    if ( !j.is_object() )
        throw input_error( "document is not a JSON object" );
    if ( get< int >( j, "schema" ) != schema_version )
        throw input_error( "unsupported schema version" );
}

json read_json_file( const std::string& path )
{
    std::ifstream in( path );
    if ( !in )
        throw input_error( "cannot open " + path );
    std::stringstream ss;
    ss << in.rdbuf();
    json j;
    try {
        j = json::parse( ss.str() );
    } catch ( const json::exception& e ) {
        throw input_error( path + ": " + e.what() );
    }
    check_schema( j );
    return j;
}

json signature_to_json( const signature& s ) { return json( std::vector< std::string >( s.begin(), s.end() ) ); }

signature signature_from_json( const json& j )
{
    try {
        auto v = j.get< std::vector< std::string > >();
        return { v.begin(), v.end() };
    } catch ( const json::exception& e ) {
        throw input_error( std::string( "bad atom list: " ) + e.what() );
    }
}

json model_to_json( const quasi_model& m )
{
    json comps = json::array();
    for ( const auto& c : m.comps ) {
        json o = frame_fields( c.frame );
        json atoms = json::array();
        for ( const auto& a : c.atoms )
            atoms.push_back( signature_to_json( a ) );
        o[ "atoms" ] = atoms;
        if ( !c.names.empty() )
            o[ "names" ] = c.names;
        comps.push_back( o );
    }
    json j{ { "schema", schema_version }, { "temporal", m.temporal }, { "components", comps } };
    if ( !m.comps.empty() )
        j[ "root" ] = point_name( m, m.root );
    return j;
}

quasi_model model_from_json( const json& j )
{
    const json& comps = field( j, "components" );
    if ( !comps.is_array() )
        throw input_error( "components must be an array" );
    std::vector< simple_model > cs;
    for ( const auto& c : comps ) {
        simple_model s;
        s.frame = frame_fields_from( c );
        for ( const auto& a : field( c, "atoms" ) )
            s.atoms.push_back( signature_from_json( a ) );
        s.names = get_or( c, "names", std::vector< std::string >{} );
        cs.push_back( std::move( s ) );
    }
    quasi_model m = ordered_sum( std::move( cs ), get_or( j, "temporal", false ) );
    if ( j.contains( "root" ) )
        m.root = parse_point( m, get< std::string >( j, "root" ) );
    validate_point( m, m.root );
    return m;
}

json frame_to_json( const quasi_frame& f )
{
    json comps = json::array();
    for ( const auto& c : f.comps )
        comps.push_back( frame_fields( c ) );
    return { { "schema", schema_version }, { "temporal", f.temporal }, { "components", comps } };
}

quasi_frame frame_from_json( const json& j )
{
    const json& comps = field( j, "components" );
    if ( !comps.is_array() || comps.empty() )
        throw input_error( "components must be a nonempty array" );
    quasi_frame f;
    f.temporal = get_or( j, "temporal", false );
    for ( const auto& c : comps ) {
        atomic_frame a = frame_fields_from( c );
        if ( a.m < 1 || a.k < 1 )
            throw input_error( "frame parameters must be positive" );
        if ( a.temporal_only() && !f.temporal )
            throw input_error( std::string( shape_name( a.kind ) ) + " needs a temporal frame" );
        f.comps.push_back( a );
    }
    return f;
}

json finite_model_to_json( const finite_model& m )
{
    json clusters = json::array();
    for ( int c = 0; c < m.frame.cluster_count(); ++c ) {
        const auto& cs = m.frame.clusters()[ c ];
        json atoms = json::array(), names = json::array();
        for ( int i = 0; i < cs.size; ++i ) {
            int x = m.frame.first_point( c ) + i;
            atoms.push_back( signature_to_json( m.atoms[ x ] ) );
            names.push_back( m.names[ x ] );
        }
        clusters.push_back( { { "reflexive", cs.reflexive }, { "atoms", atoms }, { "names", names } } );
    }
    return { { "schema", schema_version }, { "temporal", m.temporal }, { "clusters", clusters } };
}

json axioms_to_json( const std::vector< canonical_axiom >& axioms )
{
    json out = json::array();
    for ( const auto& a : axioms ) {
        json cs = json::array();
        for ( const auto& c : a.frame.clusters() )
            cs.push_back( { { "reflexive", c.reflexive }, { "size", c.size } } );
        out.push_back( { { "clusters", cs }, { "closed_domain", a.closed_domain } } );
    }
    return { { "schema", schema_version }, { "axioms", out } };
}

std::vector< canonical_axiom > axioms_from_json( const json& j )
{
    std::vector< canonical_axiom > out;
    for ( const auto& a : field( j, "axioms" ) ) {
        std::vector< cluster_shape > cs;
        for ( const auto& c : field( a, "clusters" ) ) {
            cluster_shape s{ get< bool >( c, "reflexive" ), get_or( c, "size", 1 ) };
            if ( s.size < 1 || ( !s.reflexive && s.size != 1 ) )
                throw input_error( "axiom clusters are one irreflexive point or reflexive points" );
            cs.push_back( s );
        }
        if ( cs.empty() )
            throw input_error( "axiom frame has no clusters" );
        auto d = get_or( a, "closed_domain", std::vector< int >{} );
        canonical_axiom ax{ finite_frame{ cs }, { d.begin(), d.end() } };
        auto why = validate_canonical_axiom( ax );
        if ( !why.empty() )
            throw input_error( "malformed axiom: " + why.front() );
        out.push_back( std::move( ax ) );
    }
    return out;
}

json witness_to_json( const witness_pair& w, formula f1, formula f2, const std::string& logic_name,
                      const std::vector< std::string >& transcript )
{
    json segs = json::array();
    for ( const auto& s : w.segments )
        segs.push_back( { { "type", match_type_name( s.type ) },
                          { "left", range( s.left_begin, s.left_end ) },
                          { "right", range( s.right_begin, s.right_end ) } } );
    return { { "schema", schema_version }, { "kind", "witness" },    { "logic", logic_name },
             { "phi1", render( f1 ) },      { "phi2", render( f2 ) }, { "m1", model_to_json( w.m1 ) },
             { "m2", model_to_json( w.m2 ) }, { "segments", segs },   { "transcript", transcript } };
}

witness_pair witness_from_json( const json& j )
{
    if ( get_or< std::string >( j, "kind", "witness" ) != "witness" )
        throw input_error( "not a unimodal witness certificate" );
    witness_pair w{ model_from_json( field( j, "m1" ) ), model_from_json( field( j, "m2" ) ), {} };
    for ( const auto& s : field( j, "segments" ) ) {
        segment g;
        g.type = match_type_from_name( get< std::string >( s, "type" ) );
        std::tie( g.left_begin, g.left_end ) = range_from( s, "left" );
        std::tie( g.right_begin, g.right_end ) = range_from( s, "right" );
        w.segments.push_back( g );
    }
    return w;
}

json temporal_witness_to_json( const temporal_witness& w, formula f1, formula f2, temporal_logic t,
                               const std::vector< std::string >& transcript )
{
    json blocks = json::array();
    for ( const auto& b : w.blocks )
        blocks.push_back( { { "kind", block_kind_name( b.kind ) },
                            { "left", range( b.left_begin, b.left_end ) },
                            { "right", range( b.right_begin, b.right_end ) } } );
    return { { "schema", schema_version },        { "kind", "temporal_witness" }, { "logic", temporal_logic_name( t ) },
             { "phi1", render( f1 ) },             { "phi2", render( f2 ) },        { "m1", model_to_json( w.m1 ) },
             { "m2", model_to_json( w.m2 ) }, { "blocks", blocks },            { "transcript", transcript } };
}

temporal_witness temporal_witness_from_json( const json& j )
{
    if ( get< std::string >( j, "kind" ) != "temporal_witness" )
        throw input_error( "not a temporal witness certificate" );
    temporal_witness w{ model_from_json( field( j, "m1" ) ), model_from_json( field( j, "m2" ) ), {} };
    for ( const auto& b : get_or( j, "blocks", json::array() ) ) {
        temporal_block t;
        t.kind = block_kind_from_name( get< std::string >( b, "kind" ) );
        std::tie( t.left_begin, t.left_end ) = range_from( b, "left" );
        std::tie( t.right_begin, t.right_end ) = range_from( b, "right" );
        w.blocks.push_back( t );
    }
    return w;
}

json report_to_json( const check_report& r )
{
    json j{ { "pass", r.ok }, { "transcript", r.transcript } };
    if ( !r.ok )
        j[ "failed" ] = r.failed;
    return j;
}

} // namespace iep
