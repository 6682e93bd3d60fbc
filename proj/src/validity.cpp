#include "iep/engine.hpp"
#include "iep/error.hpp"
#include "iep/interp.hpp"
#include "iep/temporal.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace iep
{

namespace
{

// One prepended component of a countermodel under construction.
struct move
{
    atomic_frame frame;
    std::vector< std::uint32_t > atoms;
    point_ref root;
};

struct node
{
    int parent = -1;
    move step;
};

using state_key = std::vector< std::uint64_t >;

state_key key_of( std::uint64_t e, const std::vector< axiom_state >& aut )
{
    state_key k{ e };
    for ( const auto& s : aut )
        k.push_back( ( std::uint64_t{ s.first } << 33 ) | ( std::uint64_t{ s.some } << 1 ) | s.empty );
    return k;
}

signature atoms_of( const program& p, std::uint32_t mask )
{
    signature s;
    for ( std::size_t i = 0; i < p.vars.size(); ++i )
        if ( ( mask >> i ) & 1u )
            s.insert( p.vars[ i ] );
    return s;
}

struct cluster_type
{
    std::uint32_t atoms;
    std::uint64_t args;
    bool refutes;
};

// Smallest number of types whose arguments cover `need`, or -1 beyond `cap`.
int min_cover( const std::vector< cluster_type >& good, std::uint64_t need, int cap, std::vector< int >& pick )
{
    if ( need == 0 )
        return 0;
    std::vector< int > cur;
    std::function< bool( std::uint64_t, int, std::size_t ) > go = [ & ]( std::uint64_t left, int depth,
                                                                          std::size_t from ) {
        if ( left == 0 )
            return true;
        if ( depth == 0 )
            return false;
        for ( std::size_t i = from; i < good.size(); ++i ) {
            if ( !( good[ i ].args & left ) )
                continue;
            cur.push_back( static_cast< int >( i ) );
            if ( go( left & ~good[ i ].args, depth - 1, i + 1 ) )
                return true;
            cur.pop_back();
        }
        return false;
    };
    for ( int d = 1; d <= cap; ++d ) {
        cur.clear();
        if ( go( need, d, 0 ) ) {
            pick = cur;
            return d;
        }
    }
    return -1;
}

int greedy_cover( const std::vector< cluster_type >& good, std::uint64_t need, std::vector< int >& pick )
{
    pick.clear();
    while ( need ) {
        int best = -1, gain = 0;
        for ( std::size_t i = 0; i < good.size(); ++i ) {
            int g = __builtin_popcountll( good[ i ].args & need );
            if ( g > gain ) {
                gain = g;
                best = static_cast< int >( i );
            }
        }
        if ( best < 0 )
            return -1;
        pick.push_back( best );
        need &= ~good[ best ].args;
    }
    return static_cast< int >( pick.size() );
}

class unimodal_search
{
    const logic& _L;
    program _p;
    int _root;
    std::uint32_t _atom_count;
    std::uint64_t _full;
    int _cap = 1;
    std::vector< axiom_automaton > _aut;
    std::map< std::uint64_t, std::vector< cluster_type > > _good;
    std::vector< node > _nodes;
    std::vector< std::uint64_t > _e;
    std::vector< std::vector< axiom_state > > _states;
    std::map< state_key, int > _seen;
    std::deque< int > _queue;

public:
    std::optional< quasi_model > found;

    unimodal_search( formula g, const logic& L ) : _L{ L }, _p{ compile( { g } ) }, _root{ _p.roots[ 0 ] }
    {
        if ( _p.vars.size() > 12 )
            throw input_error( "validity search supports at most 12 variables" );
        _atom_count = 1u << _p.vars.size();
        _full = _p.fnode.size() == 64 ? ~std::uint64_t{ 0 } : ( std::uint64_t{ 1 } << _p.fnode.size() ) - 1;
        for ( const auto& a : L.axioms ) {
            _aut.emplace_back( a );
            for ( const auto& c : a.frame.clusters() )
                if ( c.reflexive )
                    _cap = std::max( _cap, c.size );
        }
    }

    // Returns false when the state budget ran out.
    bool run( long long max_states )
    {
        std::vector< axiom_state > start;
        for ( const auto& a : _aut )
            start.push_back( a.start() );
        add( -1, {}, 0, start );
        while ( !_queue.empty() ) {
            if ( static_cast< long long >( _nodes.size() ) > max_states )
                return false;
            int i = _queue.front();
            _queue.pop_front();
            if ( expand( i ) )
                return true;
        }
        return true;
    }

private:
    void add( int parent, move m, std::uint64_t e, std::vector< axiom_state > aut )
    {
        auto k = key_of( e, aut );
        if ( _seen.count( k ) )
            return;
        _seen[ k ] = static_cast< int >( _nodes.size() );
        _nodes.push_back( { parent, std::move( m ) } );
        _e.push_back( e );
        _states.push_back( std::move( aut ) );
        _queue.push_back( static_cast< int >( _nodes.size() ) - 1 );
    }

    bool step( const std::vector< axiom_state >& from, const atomic_frame& f, std::vector< axiom_state >& to ) const
    {
        to.clear();
        for ( std::size_t j = 0; j < _aut.size(); ++j ) {
            to.push_back( _aut[ j ].prepend_component( from[ j ], f ) );
            if ( _aut[ j ].refuted( to.back() ) )
                return false;
        }
        return true;
    }

    const std::vector< cluster_type >& good( std::uint64_t d )
    {
        auto it = _good.find( d );
        if ( it != _good.end() )
            return it->second;
        std::vector< cluster_type > out;
        std::set< std::pair< std::uint64_t, bool > > kinds;
        for ( std::uint32_t a = 0; a < _atom_count; ++a ) {
            auto row = eval_point( _p, a, d, 0 );
            std::uint64_t args = future_args( _p, row );
            if ( ( args & ~d ) == 0 && kinds.insert( { args, !row[ _root ] } ).second )
                out.push_back( { a, args, !row[ _root ] } );
        }
        return _good[ d ] = std::move( out );
    }

    void finish( int parent, move m )
    {
        std::vector< simple_model > comps;
        point_ref root = m.root;
        auto push = [ & ]( const move& s ) {
            simple_model c;
            c.frame = s.frame;
            for ( auto a : s.atoms )
                c.atoms.push_back( atoms_of( _p, a ) );
            comps.push_back( std::move( c ) );
        };
        push( m );
        for ( int i = parent; i > 0; i = _nodes[ i ].parent )
            push( _nodes[ i ].step );
        quasi_model q = ordered_sum( comps );
        q.root = root;
        if ( mc_quasi( q, q.root, _p.nodes[ _root ] ) || !validates_logic( frame_of( q ), _L ) )
            throw std::logic_error( "validity search produced an invalid countermodel" );
        found = std::move( q );
    }

    bool expand( int i )
    {
        const std::uint64_t e = _e[ i ];
        const auto aut = _states[ i ];
        std::vector< axiom_state > next;

        if ( step( aut, chain_frame( 1 ), next ) ) {
            for ( std::uint32_t a = 0; a < _atom_count; ++a ) {
                auto row = eval_point( _p, a, e, 0 );
                move m{ chain_frame( 1 ), { a }, { 0, part::finite, 0 } };
                if ( !row[ _root ] ) {
                    finish( i, m );
                    return true;
                }
                add( i, m, e | future_args( _p, row ), next );
            }
        }

        const std::uint64_t free = _full & ~e;
        for ( std::uint64_t sub = free;; sub = ( sub - 1 ) & free ) {
            const std::uint64_t d = e | sub;
            const auto& g = good( d );
            std::uint64_t reach = e;
            for ( const auto& t : g )
                reach |= t.args;
            if ( reach == d && !g.empty() && cluster_moves( i, e, d, g, aut ) )
                return true;
            if ( sub == 0 )
                break;
        }

        if ( !_L.cofinal() )
            for ( int k = 1; k <= 2; ++k )
                for ( bool refl : { false, true } )
                    if ( tadpole_moves( i, e, tadpole_r_frame( k, refl ), aut ) )
                        return true;
        return false;
    }

    std::vector< std::uint32_t > cover_atoms( const std::vector< cluster_type >& g, int first, std::uint64_t need )
    {
        std::vector< int > pick;
        if ( min_cover( g, need, _cap, pick ) < 0 )
            greedy_cover( g, need, pick );
        std::vector< std::uint32_t > atoms;
        if ( first >= 0 )
            atoms.push_back( g[ first ].atoms );
        for ( int j : pick )
            atoms.push_back( g[ j ].atoms );
        if ( atoms.empty() )
            atoms.push_back( g[ 0 ].atoms );
        return atoms;
    }

    bool cluster_moves( int i, std::uint64_t e, std::uint64_t d, const std::vector< cluster_type >& g,
                        const std::vector< axiom_state >& aut )
    {
        std::vector< axiom_state > next;
        for ( std::size_t r = 0; r < g.size(); ++r ) {
            if ( !g[ r ].refutes )
                continue;
            auto atoms = cover_atoms( g, static_cast< int >( r ), d & ~e & ~g[ r ].args );
            if ( step( aut, cluster_frame( static_cast< int >( atoms.size() ) ), next ) ) {
                finish( i, { cluster_frame( static_cast< int >( atoms.size() ) ), atoms, { 0, part::finite, 0 } } );
                return true;
            }
        }
        auto atoms = cover_atoms( g, -1, d & ~e );
        auto f = cluster_frame( static_cast< int >( atoms.size() ) );
        if ( step( aut, f, next ) )
            add( i, { f, atoms, { 0, part::finite, 0 } }, d, next );
        return false;
    }

    bool tadpole_moves( int i, std::uint64_t e, const atomic_frame& f, const std::vector< axiom_state >& aut )
    {
        std::vector< axiom_state > next;
        if ( !step( aut, f, next ) )
            return false;
        rep_layout lay = make_layout( f, _p.window( f.k ) );
        std::vector< std::uint32_t > atoms( f.k, 0 );
        const std::uint64_t total = std::uint64_t{ 1 } << ( _p.vars.size() * f.k );
        for ( std::uint64_t code = 0; code < total; ++code ) {
            for ( int j = 0; j < f.k; ++j )
                atoms[ j ] = static_cast< std::uint32_t >( ( code >> ( j * _p.vars.size() ) ) & ( _atom_count - 1 ) );
            auto ev = eval_component( _p, lay, atoms, e, 0 );
            for ( int j = 0; j < f.k; ++j ) {
                int r = lay.rep_of( { 0, part::cluster, j } );
                if ( !ev.rows[ r ][ _root ] ) {
                    finish( i, { f, atoms, { 0, part::cluster, j } } );
                    return true;
                }
            }
            add( i, { f, atoms, { 0, part::cluster, 0 } }, e | ev.here_f, next );
        }
        return false;
    }
};

} // namespace

validity_result decide_validity( formula g, const logic& L, long long max_states )
{
    if ( L.temporal )
        return decide_temporal_validity( g, L.tag, max_states );
    if ( g.is_temporal() )
        throw input_error( "temporal formula with a unimodal logic" );
    unimodal_search s( g, L );
    bool done = s.run( max_states );
    validity_result r;
    if ( s.found ) {
        r.status = validity_status::countermodel;
        r.countermodel = s.found;
    } else if ( !done ) {
        r.note = "state budget exhausted";
    } else if ( L.cofinal() ) {
        r.status = validity_status::valid;
    } else {
        r.note = "no countermodel among the searched shapes; the logic has non-empty closed domains";
    }
    return r;
}

} // namespace iep
