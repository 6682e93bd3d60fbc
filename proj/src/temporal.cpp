#include "iep/engine.hpp"
#include "iep/error.hpp"
#include "iep/semantics.hpp"
#include "iep/temporal.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <tuple>

namespace iep
{

namespace
{

// A non-degenerate cluster with the internality of the sets before and after
// it, and whether those sets are empty.
struct side_info
{
    bool left_internal = true, right_internal = true;
    bool left_empty = false, right_empty = false;
};

std::vector< side_info > reflexive_clusters( const quasi_frame& f )
{
    std::vector< side_info > out;
    const std::size_t n = f.comps.size();
    for ( std::size_t i = 0; i < n; ++i ) {
        const auto& c = f.comps[ i ];
        const bool first = i == 0, last = i + 1 == n;
        auto add = [ & ]( bool li, bool ri, bool le, bool re ) { out.push_back( { li, ri, le, re } ); };
        switch ( c.kind ) {
        case shape::chain: break;
        case shape::refl_chain: add( true, true, first, false ); break;
        case shape::cluster: add( true, true, first, last ); break;
        case shape::tadpole_r:
            add( true, false, first, false );
            if ( c.tail_reflexive )
                add( true, true, false, false );
            break;
        case shape::tadpole_l:
            add( false, true, false, last );
            if ( c.tail_reflexive )
                add( true, true, false, false );
            break;
        case shape::tadpole_lr: add( false, false, false, false ); break;
        }
    }
    return out;
}

bool starts_serial( const atomic_frame& f )
{
    switch ( f.kind ) {
    case shape::refl_chain:
    case shape::cluster:
    case shape::tadpole_r: return true;
    case shape::tadpole_l: return f.tail_reflexive;
    default: return false;
    }
}

bool ends_serial( const atomic_frame& f )
{
    switch ( f.kind ) {
    case shape::cluster:
    case shape::tadpole_l: return true;
    case shape::tadpole_r: return f.tail_reflexive;
    default: return false;
    }
}

bool has_tadpole( const quasi_frame& f )
{
    for ( const auto& c : f.comps )
        if ( c.is_tadpole() )
            return true;
    return false;
}

} // namespace

finite_frame finite_temporal_frame( const quasi_frame& f )
{
    std::vector< cluster_shape > cs;
    for ( const auto& c : f.comps ) {
        switch ( c.kind ) {
        case shape::chain:
            for ( int i = 0; i < c.m; ++i )
                cs.push_back( { false, 1 } );
            break;
        case shape::refl_chain:
            cs.push_back( { true, 1 } );
            for ( int i = 0; i < c.m; ++i )
                cs.push_back( { false, 1 } );
            break;
        case shape::cluster: cs.push_back( { true, c.k } ); break;
        default: throw input_error( "frame with tadpoles is not finite" );
        }
    }
    return finite_frame( cs );
}

bool temporal_validates( const quasi_frame& f, temporal_logic t )
{
    if ( !f.temporal )
        throw input_error( "unimodal frame passed to the temporal frame check" );
    if ( f.comps.empty() )
        throw input_error( "empty frame" );
    switch ( t ) {
    case temporal_logic::lin: return true;
    case temporal_logic::lin_q:
    case temporal_logic::lin_r:
        if ( has_tadpole( f ) )
            throw input_error( "LinQ and LinR are checked on frames without tadpoles" );
        return finite_temporal_frame_check( finite_temporal_frame( f ), t );
    case temporal_logic::lin_fin:
        for ( const auto& s : reflexive_clusters( f ) )
            if ( s.left_internal || s.right_internal )
                return false;
        return true;
    case temporal_logic::lin_z:
        if ( !starts_serial( f.comps.front() ) || !ends_serial( f.comps.back() ) )
            return false;
        for ( const auto& s : reflexive_clusters( f ) )
            if ( ( s.left_internal && !s.left_empty ) || ( s.right_internal && !s.right_empty ) )
                return false;
        return true;
    }
    return false;
}

namespace
{

enum class last_kind : std::uint8_t { none, degenerate, reflexive, lasso_start };

// Arguments fixed by the components placed so far, and those still promised
// on the open side. Placement runs first to last, or last to first when that
// guesses fewer arguments; `exact` then holds future arguments.
struct tstate
{
    std::uint64_t exact = 0, promise = 0;
    bool root = false;
    last_kind last = last_kind::none;
    auto operator<=>( const tstate& ) const = default;
};

struct tstep
{
    atomic_frame frame;
    std::vector< std::uint32_t > atoms;
    std::optional< point_ref > root;
};

struct tnode
{
    int parent = -1;
    tstate state;
    tstep step;
};

struct point_type
{
    std::uint32_t atoms;
    std::uint64_t args_exact, args_promise;
    bool refutes;
};

struct lasso_end_option
{
    int k;
    std::uint64_t code, here_exact, here_promise;
    std::optional< point_ref > root;
};

std::uint64_t mask_of( std::size_t n )
{
    return n >= 64 ? ~std::uint64_t{ 0 } : ( std::uint64_t{ 1 } << n ) - 1;
}

class temporal_validity
{
    temporal_logic _t;
    program _p;
    int _root;
    std::uint32_t _atom_count;
    bool _backward;
    std::uint64_t _full_exact, _full_promise;
    int _lasso;
    std::vector< tnode > _nodes;
    std::map< tstate, int > _seen;
    std::deque< int > _queue;
    std::map< std::pair< std::uint64_t, std::uint64_t >, std::vector< point_type > > _good;
    std::map< std::uint64_t, std::vector< lasso_end_option > > _ends;

public:
    std::optional< quasi_model > found;

    temporal_validity( formula g, temporal_logic t, int lasso )
        : _t{ t }, _p{ compile( { g } ) }, _root{ _p.roots[ 0 ] }, _lasso{ lasso }
    {
        if ( _p.vars.size() > 12 )
            throw input_error( "validity search supports at most 12 variables" );
        _atom_count = 1u << _p.vars.size();
        _backward = _p.pnode.size() < _p.fnode.size();
        _full_exact = mask_of( _backward ? _p.fnode.size() : _p.pnode.size() );
        _full_promise = mask_of( _backward ? _p.pnode.size() : _p.fnode.size() );
    }

    bool run( long long max_states )
    {
        for ( std::uint64_t g = _full_promise;; g = ( g - 1 ) & _full_promise ) {
            add( -1, { 0, g, false, last_kind::none }, {} );
            if ( g == 0 )
                break;
        }
        if ( _t == temporal_logic::lin_z )
            lasso_starts();
        while ( !_queue.empty() && !found ) {
            if ( static_cast< long long >( _nodes.size() ) > max_states )
                return false;
            int i = _queue.front();
            _queue.pop_front();
            expand( i );
        }
        return true;
    }

private:
    truth_row row_at( std::uint32_t atoms, std::uint64_t exact, std::uint64_t promise ) const
    {
        return _backward ? eval_point( _p, atoms, exact, promise ) : eval_point( _p, atoms, promise, exact );
    }

    std::uint64_t exact_args( const truth_row& row ) const
    {
        return _backward ? future_args( _p, row ) : past_args( _p, row );
    }

    std::uint64_t promise_args( const truth_row& row ) const
    {
        return _backward ? past_args( _p, row ) : future_args( _p, row );
    }

    component_eval run_component( const rep_layout& lay, const std::vector< std::uint32_t >& atoms,
                                  std::uint64_t exact, std::uint64_t promise ) const
    {
        return _backward ? eval_component( _p, lay, atoms, exact, promise )
                         : eval_component( _p, lay, atoms, promise, exact );
    }

    std::uint64_t here_exact( const component_eval& ev ) const { return _backward ? ev.here_f : ev.here_p; }
    std::uint64_t here_promise( const component_eval& ev ) const { return _backward ? ev.here_p : ev.here_f; }

    // The lasso tadpole placed first, and the one closing it.
    atomic_frame opening( int k ) const { return _backward ? tadpole_l_frame( k, false ) : tadpole_r_frame( k, false ); }
    atomic_frame closing( int k ) const { return _backward ? tadpole_r_frame( k, false ) : tadpole_l_frame( k, false ); }

    void add( int parent, tstate s, tstep step )
    {
        if ( found || _seen.count( s ) )
            return;
        _seen[ s ] = static_cast< int >( _nodes.size() );
        _nodes.push_back( { parent, s, std::move( step ) } );
        if ( accepting( s ) ) {
            finish( static_cast< int >( _nodes.size() ) - 1 );
            return;
        }
        _queue.push_back( static_cast< int >( _nodes.size() ) - 1 );
    }

    bool accepting( const tstate& s ) const
    {
        if ( !s.root || s.promise != 0 )
            return false;
        switch ( _t ) {
        case temporal_logic::lin:
        case temporal_logic::lin_fin: return s.last != last_kind::none;
        case temporal_logic::lin_q:
        case temporal_logic::lin_r: return s.last == last_kind::reflexive;
        case temporal_logic::lin_z: return false;
        }
        return false;
    }

    bool degenerate_allowed( const tstate& s ) const
    {
        switch ( _t ) {
        case temporal_logic::lin:
        case temporal_logic::lin_fin: return true;
        case temporal_logic::lin_q:
        case temporal_logic::lin_r: return s.last == last_kind::reflexive;
        case temporal_logic::lin_z: return s.last == last_kind::lasso_start || s.last == last_kind::degenerate;
        }
        return false;
    }

    bool reflexive_allowed( const tstate& s ) const
    {
        switch ( _t ) {
        case temporal_logic::lin:
        case temporal_logic::lin_q: return true;
        case temporal_logic::lin_r: return s.last != last_kind::reflexive;
        case temporal_logic::lin_z: return s.last == last_kind::none;
        case temporal_logic::lin_fin: return false;
        }
        return false;
    }

    const std::vector< point_type >& good( std::uint64_t seen_exact, std::uint64_t seen_promise )
    {
        auto key = std::make_pair( seen_exact, seen_promise );
        auto it = _good.find( key );
        if ( it != _good.end() )
            return it->second;
        std::vector< point_type > out;
        std::set< std::tuple< std::uint64_t, std::uint64_t, bool > > kinds;
        for ( std::uint32_t a = 0; a < _atom_count; ++a ) {
            auto row = row_at( a, seen_exact, seen_promise );
            std::uint64_t e = exact_args( row ), p = promise_args( row );
            if ( ( e & ~seen_exact ) || ( p & ~seen_promise ) )
                continue;
            if ( kinds.insert( { e, p, !row[ _root ] } ).second )
                out.push_back( { a, e, p, !row[ _root ] } );
        }
        return _good[ key ] = std::move( out );
    }

    void expand( int i )
    {
        const tstate s = _nodes[ i ].state;
        if ( degenerate_allowed( s ) ) {
            for ( std::uint64_t g = s.promise;; g = ( g - 1 ) & s.promise ) {
                for ( std::uint32_t a = 0; a < _atom_count; ++a ) {
                    auto row = row_at( a, s.exact, g );
                    if ( ( promise_args( row ) | g ) != s.promise )
                        continue;
                    bool hit = !row[ _root ];
                    tstep st{ chain_frame( 1 ), { a }, {} };
                    if ( hit && !s.root )
                        st.root = point_ref{ 0, part::finite, 0 };
                    add( i, { s.exact | exact_args( row ), g, s.root || hit, last_kind::degenerate }, st );
                }
                if ( g == 0 )
                    break;
            }
        }
        if ( reflexive_allowed( s ) )
            reflexive_moves( i, s );
        if ( _t == temporal_logic::lin_z && ( s.last == last_kind::lasso_start || s.last == last_kind::degenerate ) )
            lasso_end( i, s );
    }

    void reflexive_moves( int i, const tstate& s )
    {
        const std::uint64_t free = _full_exact & ~s.exact;
        for ( std::uint64_t sub = free;; sub = ( sub - 1 ) & free ) {
            const std::uint64_t d = s.exact | sub;
            const auto& g = good( d, s.promise );
            std::uint64_t up = 0, ue = s.exact;
            int hit = -1;
            for ( std::size_t j = 0; j < g.size(); ++j ) {
                up |= g[ j ].args_promise;
                ue |= g[ j ].args_exact;
                if ( g[ j ].refutes && hit < 0 )
                    hit = static_cast< int >( j );
            }
            if ( !g.empty() && ue == d ) {
                tstep st{ cluster_frame( static_cast< int >( g.size() ) ), {}, {} };
                for ( const auto& x : g )
                    st.atoms.push_back( x.atoms );
                if ( hit >= 0 && !s.root )
                    st.root = point_ref{ 0, part::finite, hit };
                const std::uint64_t forced = s.promise & ~up;
                const std::uint64_t optional = s.promise & up;
                const bool root = s.root || hit >= 0;
                if ( _t == temporal_logic::lin_z ) {
                    if ( s.promise == up && root ) {
                        _nodes.push_back( { i, { d, 0, root, last_kind::reflexive }, st } );
                        finish( static_cast< int >( _nodes.size() ) - 1 );
                        return;
                    }
                } else {
                    for ( std::uint64_t o = optional;; o = ( o - 1 ) & optional ) {
                        add( i, { d, forced | o, root, last_kind::reflexive }, st );
                        if ( o == 0 )
                            break;
                    }
                }
            }
            if ( sub == 0 )
                break;
        }
    }

    std::vector< std::uint32_t > decode( std::uint64_t code, int k ) const
    {
        std::vector< std::uint32_t > atoms( k );
        for ( int j = 0; j < k; ++j )
            atoms[ j ] = static_cast< std::uint32_t >( ( code >> ( j * _p.vars.size() ) ) & ( _atom_count - 1 ) );
        return atoms;
    }

    std::optional< point_ref > refuting( const rep_layout& lay, const component_eval& ev ) const
    {
        for ( int r = 0; r < lay.size(); ++r )
            if ( !ev.rows[ r ][ _root ] )
                return point_ref{ 0, lay.refs[ r ].where, lay.refs[ r ].index };
        return std::nullopt;
    }

    void lasso_starts()
    {
        for ( int k = 1; k <= _lasso; ++k ) {
            auto f = opening( k );
            auto lay = make_layout( f, _p.window( k ) );
            const std::uint64_t total = std::uint64_t{ 1 } << ( _p.vars.size() * k );
            for ( std::uint64_t code = 0; code < total; ++code ) {
                auto atoms = decode( code, k );
                for ( std::uint64_t g = _full_promise;; g = ( g - 1 ) & _full_promise ) {
                    auto ev = run_component( lay, atoms, 0, g );
                    auto r = refuting( lay, ev );
                    add( -1, { here_exact( ev ), g, r.has_value(), last_kind::lasso_start }, { f, atoms, r } );
                    if ( g == 0 )
                        break;
                }
            }
        }
    }

    // Closing tadpoles by the arguments they see; independent of the state.
    const std::vector< lasso_end_option >& end_options( std::uint64_t exact )
    {
        auto it = _ends.find( exact );
        if ( it != _ends.end() )
            return it->second;
        std::vector< lasso_end_option > out;
        std::set< std::tuple< std::uint64_t, std::uint64_t, bool > > kinds;
        for ( int k = 1; k <= _lasso; ++k ) {
            auto lay = make_layout( closing( k ), _p.window( k ) );
            const std::uint64_t total = std::uint64_t{ 1 } << ( _p.vars.size() * k );
            for ( std::uint64_t code = 0; code < total; ++code ) {
                auto ev = run_component( lay, decode( code, k ), exact, 0 );
                auto r = refuting( lay, ev );
                if ( kinds.insert( { here_exact( ev ), here_promise( ev ), r.has_value() } ).second )
                    out.push_back( { k, code, here_exact( ev ), here_promise( ev ), r } );
            }
        }
        return _ends[ exact ] = std::move( out );
    }

    void lasso_end( int i, const tstate& s )
    {
        for ( const auto& o : end_options( s.exact ) ) {
            if ( o.here_promise != s.promise || ( !s.root && !o.root ) )
                continue;
            tstep st{ closing( o.k ), decode( o.code, o.k ), s.root ? std::nullopt : o.root };
            _nodes.push_back( { i, { s.exact | o.here_exact, 0, true, last_kind::reflexive }, st } );
            finish( static_cast< int >( _nodes.size() ) - 1 );
            return;
        }
    }

    void finish( int i )
    {
        std::vector< tstep > steps;
        for ( int j = i; j >= 0; j = _nodes[ j ].parent )
            if ( !_nodes[ j ].step.atoms.empty() )
                steps.push_back( _nodes[ j ].step );
        if ( !_backward )
            std::reverse( steps.begin(), steps.end() );
        std::vector< simple_model > comps;
        point_ref root;
        for ( const auto& st : steps ) {
            simple_model c;
            c.frame = st.frame;
            for ( auto a : st.atoms ) {
                signature sg;
                for ( std::size_t v = 0; v < _p.vars.size(); ++v )
                    if ( ( a >> v ) & 1u )
                        sg.insert( _p.vars[ v ] );
                c.atoms.push_back( std::move( sg ) );
            }
            if ( st.root ) {
                root = *st.root;
                root.comp = static_cast< int >( comps.size() );
            }
            comps.push_back( std::move( c ) );
        }
        quasi_model q = ordered_sum( comps, true );
        q.root = root;
        bool frame_ok = temporal_validates( frame_of( q ), _t );
        if ( temporal_mc_quasi( q, q.root, _p.nodes[ _root ] ) || !frame_ok )
            throw std::logic_error( "temporal validity search produced an invalid countermodel" );
        found = std::move( q );
    }
};

} // namespace

validity_result decide_temporal_validity( formula g, temporal_logic t, long long max_states, int lasso_width )
{
    if ( g.is_unimodal_modal() )
        throw input_error( "unimodal formula with a temporal logic" );
    temporal_validity s( g, t, lasso_width );
    bool done = s.run( max_states );
    validity_result r;
    if ( s.found ) {
        r.status = validity_status::countermodel;
        r.countermodel = s.found;
    } else if ( !done ) {
        r.note = "state budget exhausted";
    } else {
        r.status = validity_status::valid;
        if ( t == temporal_logic::lin_z )
            r.note = "no countermodel on a single cluster or a lasso of width " + std::to_string( lasso_width );
    }
    return r;
}

} // namespace iep
