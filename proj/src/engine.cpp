#include "iep/engine.hpp"
#include "iep/error.hpp"

#include <algorithm>

namespace iep
{

int program::node_of( formula f ) const
{
    auto it = index.find( f );
    if ( it == index.end() )
        throw input_error( "formula not part of the program" );
    return it->second;
}

std::uint32_t program::atoms_mask( const signature& s ) const
{
    std::uint32_t mask = 0;
    for ( std::size_t i = 0; i < vars.size(); ++i )
        if ( s.count( vars[ i ] ) )
            mask |= 1u << i;
    return mask;
}

program compile( const std::vector< formula >& roots )
{
    program p;
    std::unordered_map< std::string, int > var_ids;
    for ( formula r : roots ) {
        for ( formula g : subformulas( r ) ) {
            if ( p.index.count( g ) )
                continue;
            int id = p.size();
            p.index[ g ] = id;
            p.nodes.push_back( g );
            p.ops.push_back( g.kind() );
            p.lhs.push_back( g.lhs() ? p.index.at( g.lhs() ) : -1 );
            p.rhs.push_back( g.rhs() ? p.index.at( g.rhs() ) : -1 );
            int v = -1;
            if ( g.kind() == op::var ) {
                auto [ it, fresh ] = var_ids.emplace( g.name(), static_cast< int >( p.vars.size() ) );
                if ( fresh )
                    p.vars.push_back( g.name() );
                v = it->second;
            }
            p.var.push_back( v );
            p.fslot.push_back( -1 );
            p.pslot.push_back( -1 );
        }
        p.roots.push_back( p.index.at( r ) );
        p.md = std::max( p.md, modal_depth( r ) );
    }
    if ( p.vars.size() > 32 )
        throw input_error( "more than 32 variables" );
    for ( int i = 0; i < p.size(); ++i ) {
        int a = p.lhs[ i ];
        if ( p.ops[ i ] == op::dia || p.ops[ i ] == op::dia_f ) {
            if ( p.fslot[ a ] < 0 ) {
                p.fslot[ a ] = static_cast< int >( p.fnode.size() );
                p.fnode.push_back( a );
            }
        } else if ( p.ops[ i ] == op::dia_p ) {
            if ( p.pslot[ a ] < 0 ) {
                p.pslot[ a ] = static_cast< int >( p.pnode.size() );
                p.pnode.push_back( a );
            }
        }
    }
    if ( p.fnode.size() > 64 || p.pnode.size() > 64 )
        throw input_error( "more than 64 distinct modal arguments" );
    return p;
}

component_eval eval_component( const program& p, const rep_layout& layout, const std::vector< std::uint32_t >& base_atoms,
                               std::uint64_t later_f, std::uint64_t earlier_p )
{
    const int n = layout.size(), nodes = p.size();
    component_eval out;
    out.rows.assign( n, truth_row( nodes, 0 ) );
    auto& rows = out.rows;
    for ( int j = 0; j < nodes; ++j ) {
        const int a = p.lhs[ j ], b = p.rhs[ j ];
        for ( int x = 0; x < n; ++x ) {
            bool v = false;
            switch ( p.ops[ j ] ) {
            case op::var: v = ( base_atoms[ layout.base[ x ] ] >> p.var[ j ] ) & 1u; break;
            case op::top: v = true; break;
            case op::bot: v = false; break;
            case op::neg: v = !rows[ x ][ a ]; break;
            case op::conj: v = rows[ x ][ a ] && rows[ x ][ b ]; break;
            case op::dia:
            case op::dia_f:
                v = ( later_f >> p.fslot[ a ] ) & 1u;
                for ( int y : layout.fut[ x ] )
                    if ( v || rows[ y ][ a ] ) {
                        v = true;
                        break;
                    }
                break;
            case op::dia_p:
                v = ( earlier_p >> p.pslot[ a ] ) & 1u;
                for ( int y : layout.past[ x ] )
                    if ( v || rows[ y ][ a ] ) {
                        v = true;
                        break;
                    }
                break;
            }
            rows[ x ][ j ] = v;
        }
    }
    for ( int x = 0; x < n; ++x ) {
        for ( std::size_t s = 0; s < p.fnode.size(); ++s )
            if ( rows[ x ][ p.fnode[ s ] ] )
                out.here_f |= std::uint64_t{ 1 } << s;
        for ( std::size_t s = 0; s < p.pnode.size(); ++s )
            if ( rows[ x ][ p.pnode[ s ] ] )
                out.here_p |= std::uint64_t{ 1 } << s;
    }
    return out;
}

truth_row eval_point( const program& p, std::uint32_t atoms, std::uint64_t seen_f, std::uint64_t seen_p )
{
    truth_row row( p.size(), 0 );
    for ( int j = 0; j < p.size(); ++j ) {
        const int a = p.lhs[ j ], b = p.rhs[ j ];
        switch ( p.ops[ j ] ) {
        case op::var: row[ j ] = ( atoms >> p.var[ j ] ) & 1u; break;
        case op::top: row[ j ] = 1; break;
        case op::bot: row[ j ] = 0; break;
        case op::neg: row[ j ] = !row[ a ]; break;
        case op::conj: row[ j ] = row[ a ] && row[ b ]; break;
        case op::dia:
        case op::dia_f: row[ j ] = ( seen_f >> p.fslot[ a ] ) & 1u; break;
        case op::dia_p: row[ j ] = ( seen_p >> p.pslot[ a ] ) & 1u; break;
        }
    }
    return row;
}

std::uint64_t future_args( const program& p, const truth_row& row )
{
    std::uint64_t m = 0;
    for ( std::size_t s = 0; s < p.fnode.size(); ++s )
        if ( row[ p.fnode[ s ] ] )
            m |= std::uint64_t{ 1 } << s;
    return m;
}

std::uint64_t past_args( const program& p, const truth_row& row )
{
    std::uint64_t m = 0;
    for ( std::size_t s = 0; s < p.pnode.size(); ++s )
        if ( row[ p.pnode[ s ] ] )
            m |= std::uint64_t{ 1 } << s;
    return m;
}

bool quasi_eval::value( const quasi_model& m, const point_ref& x, int node ) const
{
    validate_point( m, x );
    int r = layouts.at( x.comp ).rep_of( x );
    return comps[ x.comp ].rows[ r ][ node ];
}

quasi_eval eval_quasi( const program& p, const quasi_model& m )
{
    quasi_eval ev;
    const int c = static_cast< int >( m.comps.size() );
    std::vector< std::vector< std::uint32_t > > atoms( c );
    for ( int i = 0; i < c; ++i ) {
        const auto& f = m.comps[ i ].frame;
        ev.layouts.push_back( make_layout( f, f.is_tadpole() ? p.window( f.k ) : 0 ) );
        for ( const auto& s : m.comps[ i ].atoms )
            atoms[ i ].push_back( p.atoms_mask( s ) );
    }
    ev.comps.resize( c );
    if ( !m.temporal ) {
        std::uint64_t later = 0;
        for ( int i = c - 1; i >= 0; --i ) {
            ev.comps[ i ] = eval_component( p, ev.layouts[ i ], atoms[ i ], later, 0 );
            later |= ev.comps[ i ].here_f;
        }
        return ev;
    }
    // Values of depth d settle after round d.
    std::vector< std::uint64_t > later( c, 0 ), earlier( c, 0 );
    for ( int round = 0; round <= p.md; ++round ) {
        for ( int i = 0; i < c; ++i )
            ev.comps[ i ] = eval_component( p, ev.layouts[ i ], atoms[ i ], later[ i ], earlier[ i ] );
        std::uint64_t acc = 0;
        for ( int i = c - 1; i >= 0; --i ) {
            later[ i ] = acc;
            acc |= ev.comps[ i ].here_f;
        }
        acc = 0;
        for ( int i = 0; i < c; ++i ) {
            earlier[ i ] = acc;
            acc |= ev.comps[ i ].here_p;
        }
    }
    return ev;
}

} // namespace iep
