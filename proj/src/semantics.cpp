#include "iep/semantics.hpp"
#include "iep/engine.hpp"
#include "iep/error.hpp"

#include <algorithm>

namespace iep
{

bool logic::cofinal() const
{
    return std::all_of( axioms.begin(), axioms.end(),
                        []( const canonical_axiom& a ) { return a.closed_domain.empty(); } );
}

int logic::max_axiom_points() const
{
    int c = 0;
    for ( const auto& a : axioms )
        c = std::max( c, a.frame.size() );
    return c;
}

logic unimodal_logic( std::string name, std::vector< canonical_axiom > axioms )
{
    for ( const auto& a : axioms ) {
        auto d = validate_canonical_axiom( a );
        if ( !d.empty() )
            throw input_error( "malformed axiom: " + d.front() );
    }
    logic L;
    L.name = std::move( name );
    L.axioms = std::move( axioms );
    return L;
}

namespace
{

canonical_axiom ax( std::vector< cluster_shape > cs, std::set< int > d = {} )
{
    return { finite_frame{ std::move( cs ) }, std::move( d ) };
}

} // namespace

logic builtin_logic( const std::string& name )
{
    const cluster_shape dot{ false, 1 }, circ{ true, 1 };
    if ( name == "K4.3" )
        return unimodal_logic( name, {} );
    if ( name == "GL.3" )
        return unimodal_logic( name, { ax( { circ } ), ax( { circ, dot } ) } );
    if ( name == "LogN" )
        return unimodal_logic( name, { ax( { dot } ), ax( { circ, circ } ) } );
    if ( name == "Dense" )
        return unimodal_logic( name, { ax( { dot, dot }, { 1 } ), ax( { dot, dot, circ }, { 1 } ),
                                       ax( { dot, dot, dot }, { 1 } ) } );
    if ( auto t = temporal_logic_from_name( name ) ) {
        logic L;
        L.name = name;
        L.temporal = true;
        L.tag = *t;
        return L;
    }
    throw input_error( "unknown logic: " + name );
}

std::vector< std::string > builtin_logic_names()
{
    return { "K4.3", "GL.3", "LogN", "Dense", "Lin", "LinQ", "LinR", "LinFin", "LinZ" };
}

bool mc_quasi( const quasi_model& m, const point_ref& x, formula f )
{
    validate_point( m, x );
    if ( f.is_temporal() && !m.temporal )
        throw input_error( "temporal formula on a unimodal model" );
    program p = compile( { f } );
    quasi_eval ev = eval_quasi( p, m );
    return ev.value( m, x, p.roots[ 0 ] );
}

bool temporal_mc_quasi( const quasi_model& m, const point_ref& x, formula f )
{
    if ( !m.temporal )
        throw input_error( "unimodal model passed to the temporal checker" );
    return mc_quasi( m, x, f );
}

std::vector< host_cluster > host_chain( const quasi_frame& f, int axiom_points )
{
    std::vector< host_cluster > h;
    for ( const auto& c : f.comps ) {
        switch ( c.kind ) {
        case shape::chain:
            for ( int i = 0; i < c.m; ++i )
                h.push_back( { false, 1, true } );
            break;
        case shape::refl_chain:
            h.push_back( { true, 1, true } );
            for ( int i = 0; i < c.m; ++i )
                h.push_back( { false, 1, true } );
            break;
        case shape::cluster: h.push_back( { true, c.k, true } ); break;
        case shape::tadpole_r:
            h.push_back( { c.tail_reflexive, 1, false } );
            for ( int i = 0; i < axiom_points; ++i )
                h.push_back( { c.tail_reflexive, 1, true } );
            break;
        default: throw input_error( "temporal shape in a unimodal frame" );
        }
    }
    return h;
}

bool validates_axiom( const quasi_frame& f, const canonical_axiom& a )
{
    if ( f.temporal )
        throw input_error( "canonical axioms apply to unimodal frames" );
    auto d = validate_canonical_axiom( a );
    if ( !d.empty() )
        throw input_error( "malformed axiom: " + d.front() );
    return !embeds_axiom( host_chain( f, a.frame.size() ), a );
}

bool validates_logic( const quasi_frame& f, const logic& L )
{
    if ( L.temporal )
        throw input_error( "temporal logic " + L.name + " needs the temporal frame check" );
    return std::all_of( L.axioms.begin(), L.axioms.end(),
                        [ & ]( const canonical_axiom& a ) { return validates_axiom( f, a ); } );
}

quasi_frame lift( const finite_frame& fr )
{
    quasi_frame q;
    for ( const auto& c : fr.clusters() )
        q.comps.push_back( c.reflexive ? cluster_frame( c.size ) : chain_frame( 1 ) );
    return q;
}

axiom_automaton::axiom_automaton( const canonical_axiom& a )
    : _g{ a.frame.clusters() }, _in_d( a.frame.cluster_count(), false ), _points{ a.frame.size() }
{
    if ( _g.size() > 31 )
        throw input_error( "axiom frame too large" );
    for ( int d : a.closed_domain )
        _in_d[ a.frame.cluster_of( d ) ] = true;
}

axiom_state axiom_automaton::prepend( const axiom_state& s, const host_cluster& c ) const
{
    const int r = static_cast< int >( _g.size() ) - 1;
    axiom_state t;
    t.empty = false;
    for ( int j = 0; j <= r; ++j ) {
        bool fits = c.hostable && c.reflexive == _g[ j ].reflexive && c.size >= _g[ j ].size;
        if ( !fits )
            continue;
        bool rest;
        if ( j == r )
            rest = s.empty;
        else if ( _in_d[ j + 1 ] )
            rest = ( s.first >> ( j + 1 ) ) & 1u;
        else
            rest = ( s.some >> ( j + 1 ) ) & 1u;
        if ( rest )
            t.first |= 1u << j;
    }
    t.some = s.some | t.first;
    return t;
}

axiom_state axiom_automaton::prepend_component( const axiom_state& s, const atomic_frame& f ) const
{
    axiom_state t = s;
    switch ( f.kind ) {
    case shape::chain:
        for ( int i = 0; i < f.m; ++i )
            t = prepend( t, { false, 1, true } );
        break;
    case shape::refl_chain:
        for ( int i = 0; i < f.m; ++i )
            t = prepend( t, { false, 1, true } );
        t = prepend( t, { true, 1, true } );
        break;
    case shape::cluster: t = prepend( t, { true, f.k, true } ); break;
    case shape::tadpole_r:
        for ( int i = 0; i < _points; ++i )
            t = prepend( t, { f.tail_reflexive, 1, true } );
        t = prepend( t, { f.tail_reflexive, 1, false } );
        break;
    default: throw input_error( "temporal shape in a unimodal frame" );
    }
    return t;
}

} // namespace iep
