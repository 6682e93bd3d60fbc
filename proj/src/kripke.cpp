#include "iep/kripke.hpp"
#include "iep/error.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace iep
{

finite_frame::finite_frame( std::vector< cluster_shape > clusters ) : _clusters{ std::move( clusters ) }
{
    if ( _clusters.empty() )
        throw input_error( "frame has no clusters" );
    for ( std::size_t c = 0; c < _clusters.size(); ++c ) {
        const auto& cl = _clusters[ c ];
        if ( cl.size < 1 )
            throw input_error( "cluster with no points" );
        if ( !cl.reflexive && cl.size != 1 )
            throw input_error( "a degenerate cluster has exactly one point" );
        _first.push_back( static_cast< int >( _cluster_of.size() ) );
        for ( int i = 0; i < cl.size; ++i )
            _cluster_of.push_back( static_cast< int >( c ) );
    }
}

bool finite_frame::R( int x, int y ) const
{
    int cx = cluster_of( x ), cy = cluster_of( y );
    return cx < cy || ( cx == cy && _clusters[ cx ].reflexive );
}

int finite_model::index_of( const std::string& name ) const
{
    for ( std::size_t i = 0; i < names.size(); ++i )
        if ( names[ i ] == name )
            return static_cast< int >( i );
    throw input_error( "unknown point: " + name );
}

signature finite_model::atoms_in( int x, const signature& sigma ) const
{
    return sig_intersect( atoms.at( x ), sigma );
}

finite_model make_finite_model( const std::vector< std::pair< bool, std::vector< signature > > >& clusters,
                                bool temporal )
{
    std::vector< cluster_shape > shapes;
    finite_model m;
    for ( const auto& [ refl, pts ] : clusters ) {
        shapes.push_back( { refl, static_cast< int >( pts.size() ) } );
        for ( const auto& a : pts ) {
            m.names.push_back( "w" + std::to_string( m.names.size() ) );
            m.atoms.push_back( a );
        }
    }
    m.frame = finite_frame{ shapes };
    m.temporal = temporal;
    return m;
}

std::vector< bool > mc_finite_all( const finite_model& m, formula f )
{
    const int n = m.size();
    std::map< formula, std::vector< bool > > val;
    for ( formula g : subformulas( f ) ) {
        std::vector< bool > v( n );
        for ( int x = 0; x < n; ++x ) {
            switch ( g.kind() ) {
            case op::var: v[ x ] = m.holds( x, g.name() ); break;
            case op::top: v[ x ] = true; break;
            case op::bot: v[ x ] = false; break;
            case op::neg: v[ x ] = !val[ g.lhs() ][ x ]; break;
            case op::conj: v[ x ] = val[ g.lhs() ][ x ] && val[ g.rhs() ][ x ]; break;
            case op::dia:
            case op::dia_f: {
                const auto& a = val[ g.lhs() ];
                for ( int y = 0; y < n && !v[ x ]; ++y )
                    if ( m.frame.R( x, y ) && a[ y ] )
                        v[ x ] = true;
                break;
            }
            case op::dia_p: {
                const auto& a = val[ g.lhs() ];
                for ( int y = 0; y < n && !v[ x ]; ++y )
                    if ( m.frame.R( y, x ) && a[ y ] )
                        v[ x ] = true;
                break;
            }
            }
        }
        val[ g ] = std::move( v );
    }
    return val[ f ];
}

bool mc_finite( const finite_model& m, int x, formula f )
{
    if ( x < 0 || x >= m.size() )
        throw input_error( "point out of range" );
    return mc_finite_all( m, f )[ x ];
}

bisim_relation largest_sigma_bisim( const finite_model& m1, const finite_model& m2, const signature& sigma,
                                    bool temporal )
{
    const int n1 = m1.size(), n = n1 + m2.size();
    auto model_of = [ & ]( int u ) -> const finite_model& { return u < n1 ? m1 : m2; };
    auto local = [ & ]( int u ) { return u < n1 ? u : u - n1; };
    auto related = [ & ]( int u, int v ) {
        if ( ( u < n1 ) != ( v < n1 ) )
            return false;
        return model_of( u ).frame.R( local( u ), local( v ) );
    };

    std::vector< int > block( n );
    {
        std::map< signature, int > ids;
        for ( int u = 0; u < n; ++u ) {
            auto a = model_of( u ).atoms_in( local( u ), sigma );
            block[ u ] = ids.emplace( a, static_cast< int >( ids.size() ) ).first->second;
        }
    }

    using key = std::tuple< int, std::set< int >, std::set< int > >;
    while ( true ) {
        std::map< key, int > ids;
        std::vector< int > next( n );
        for ( int u = 0; u < n; ++u ) {
            std::set< int > fwd, bwd;
            for ( int v = 0; v < n; ++v ) {
                if ( related( u, v ) )
                    fwd.insert( block[ v ] );
                if ( temporal && related( v, u ) )
                    bwd.insert( block[ v ] );
            }
            key k{ block[ u ], std::move( fwd ), std::move( bwd ) };
            next[ u ] = ids.emplace( std::move( k ), static_cast< int >( ids.size() ) ).first->second;
        }
        int before = *std::max_element( block.begin(), block.end() );
        int after = *std::max_element( next.begin(), next.end() );
        block = std::move( next );
        if ( after == before )
            break;
    }

    bisim_relation r;
    for ( int x = 0; x < n1; ++x )
        for ( int y = n1; y < n; ++y )
            if ( block[ x ] == block[ y ] )
                r.insert( { x, y - n1 } );
    return r;
}

std::vector< std::string > validate_canonical_axiom( const canonical_axiom& a )
{
    std::vector< std::string > diag;
    if ( a.frame.size() == 0 ) {
        diag.push_back( "axiom frame is empty" );
        return diag;
    }
    for ( int d : a.closed_domain ) {
        if ( d < 0 || d >= a.frame.size() ) {
            diag.push_back( "D refers to a point outside the frame" );
            continue;
        }
        if ( a.frame.reflexive( d ) )
            diag.push_back( "D must be irreflexive" );
        if ( a.frame.cluster_of( d ) == 0 )
            diag.push_back( "D excludes root" );
    }
    return diag;
}

bool embeds_axiom( const std::vector< host_cluster >& host, const canonical_axiom& a )
{
    const auto& g = a.frame.clusters();
    const int r = static_cast< int >( g.size() ) - 1;
    const int hn = static_cast< int >( host.size() );
    if ( hn == 0 )
        return false;
    std::vector< bool > in_d( g.size(), false );
    for ( int d : a.closed_domain )
        in_d[ a.frame.cluster_of( d ) ] = true;

    auto fits = [ & ]( int j, int h ) {
        const auto& hc = host[ h ];
        if ( !hc.hostable || hc.reflexive != g[ j ].reflexive )
            return false;
        return hc.size >= g[ j ].size;
    };

    std::function< bool( int, int ) > place = [ & ]( int j, int prev ) -> bool {
        int lo = prev + 1, hi = hn - 1;
        if ( j > 0 && in_d[ j ] )
            hi = lo;
        if ( j == r )
            lo = std::max( lo, hn - 1 );
        for ( int h = lo; h <= hi && h < hn; ++h ) {
            if ( !fits( j, h ) )
                continue;
            if ( j == r || place( j + 1, h ) )
                return true;
        }
        return false;
    };
    return place( 0, -1 );
}

bool finite_frame_validates_axiom( const finite_frame& fr, const canonical_axiom& a )
{
    std::vector< host_cluster > host;
    for ( const auto& c : fr.clusters() )
        host.push_back( { c.reflexive, c.size, true } );
    return !embeds_axiom( host, a );
}

const char* temporal_logic_name( temporal_logic t )
{
    switch ( t ) {
    case temporal_logic::lin: return "Lin";
    case temporal_logic::lin_q: return "LinQ";
    case temporal_logic::lin_r: return "LinR";
    case temporal_logic::lin_fin: return "LinFin";
    case temporal_logic::lin_z: return "LinZ";
    }
    return "?";
}

std::optional< temporal_logic > temporal_logic_from_name( const std::string& name )
{
    for ( auto t : { temporal_logic::lin, temporal_logic::lin_q, temporal_logic::lin_r, temporal_logic::lin_fin,
                     temporal_logic::lin_z } )
        if ( name == temporal_logic_name( t ) )
            return t;
    return std::nullopt;
}

bool finite_temporal_frame_check( const finite_frame& fr, temporal_logic t )
{
    const auto& cs = fr.clusters();
    const std::size_t n = cs.size();
    auto dense = [ & ] {
        if ( !cs.front().reflexive || !cs.back().reflexive )
            return false;
        for ( std::size_t i = 0; i + 1 < n; ++i )
            if ( !cs[ i ].reflexive && !cs[ i + 1 ].reflexive )
                return false;
        return true;
    };
    switch ( t ) {
    case temporal_logic::lin: return true;
    case temporal_logic::lin_q: return dense();
    case temporal_logic::lin_r: {
        if ( !dense() )
            return false;
        for ( std::size_t i = 0; i + 1 < n; ++i )
            if ( cs[ i ].reflexive && cs[ i + 1 ].reflexive )
                return false;
        return true;
    }
    case temporal_logic::lin_fin:
        return std::none_of( cs.begin(), cs.end(), []( const cluster_shape& c ) { return c.reflexive; } );
    case temporal_logic::lin_z: return n == 1 && cs.front().reflexive;
    }
    return false;
}

} // namespace iep
