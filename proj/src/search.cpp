#include "iep/engine.hpp"
#include "iep/error.hpp"
#include "iep/interp.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <unordered_map>

namespace iep
{

namespace
{

// Atom sets over sigma are coded as bit masks over the sorted sigma list.
struct comp_choice
{
    atomic_frame frame;
    std::vector< std::uint32_t > sigma;
};

struct trail
{
    int parent = -1;
    atomic_frame frame;
    std::vector< std::uint32_t > atoms;
    int seg = 0;
    match_type type = match_type::a;
};

using elem_key = std::vector< std::uint64_t >;

struct elem
{
    std::uint64_t e = 0;
    std::vector< axiom_state > aut;
    int size = 0;
    int trail = -1;
};

elem_key key_of( const elem& x )
{
    elem_key k{ x.e };
    for ( const auto& s : x.aut )
        k.push_back( ( std::uint64_t{ s.first } << 33 ) | ( std::uint64_t{ s.some } << 1 ) | s.empty );
    return k;
}

struct side_set
{
    std::vector< elem > elems;
    std::map< elem_key, int > index;

    void add( elem x, std::vector< trail >& trails, trail t )
    {
        auto k = key_of( x );
        auto it = index.find( k );
        if ( it != index.end() && elems[ it->second ].size <= x.size )
            return;
        trails.push_back( std::move( t ) );
        x.trail = static_cast< int >( trails.size() ) - 1;
        if ( it != index.end() ) {
            elems[ it->second ] = std::move( x );
            return;
        }
        index.emplace( std::move( k ), static_cast< int >( elems.size() ) );
        elems.push_back( std::move( x ) );
    }

    void merge( const side_set& o )
    {
        for ( const auto& x : o.elems ) {
            auto k = key_of( x );
            auto it = index.find( k );
            if ( it == index.end() ) {
                index.emplace( std::move( k ), static_cast< int >( elems.size() ) );
                elems.push_back( x );
            } else if ( elems[ it->second ].size > x.size ) {
                elems[ it->second ] = x;
            }
        }
    }
};

struct root_hit
{
    int trail = -1;
    point_ref point;
};

using root_hits = std::map< std::uint32_t, root_hit >;

struct eval_key_hash
{
    std::size_t operator()( const std::vector< std::uint64_t >& v ) const noexcept
    {
        std::size_t h = 1469598103934665603ull;
        for ( auto x : v )
            h = ( h ^ x ) * 1099511628211ull;
        return h;
    }
};

struct cached_eval
{
    std::uint64_t here_f = 0;
    // Bit i: the goal holds at root candidate i.
    std::uint32_t goal = 0;
};

std::vector< point_ref > root_candidates( const atomic_frame& f )
{
    std::vector< point_ref > out;
    switch ( f.kind ) {
    case shape::chain:
    case shape::refl_chain: out.push_back( { 0, part::finite, 0 } ); break;
    case shape::cluster:
        for ( int i = 0; i < f.k; ++i )
            out.push_back( { 0, part::finite, i } );
        break;
    default:
        for ( int i = 0; i < f.k; ++i )
            out.push_back( { 0, part::cluster, i } );
    }
    return out;
}

int base_of( const atomic_frame&, const point_ref& p )
{
    return static_cast< int >( p.index );
}

class side_ctx
{
public:
    program p;
    int goal = 0;
    std::vector< std::uint32_t > sigma_to_side;
    std::vector< std::uint32_t > priv;
    std::vector< axiom_automaton > aut;
    std::vector< trail > trails;
    std::map< std::vector< int >, rep_layout > layouts;
    std::unordered_map< std::vector< std::uint64_t >, cached_eval, eval_key_hash > cache;
    long long evals = 0;

    side_ctx( formula target, const std::vector< std::string >& sigma, const logic& L ) : p{ compile( { target } ) }
    {
        goal = p.roots[ 0 ];
        if ( p.vars.size() > 16 )
            throw input_error( "witness search supports at most 16 variables per formula" );
        sigma_to_side.assign( 1u << sigma.size(), 0 );
        for ( std::uint32_t code = 0; code < sigma_to_side.size(); ++code ) {
            signature s;
            for ( std::size_t j = 0; j < sigma.size(); ++j )
                if ( ( code >> j ) & 1u )
                    s.insert( sigma[ j ] );
            sigma_to_side[ code ] = p.atoms_mask( s );
        }
        std::vector< int > pv;
        for ( std::size_t i = 0; i < p.vars.size(); ++i )
            if ( std::find( sigma.begin(), sigma.end(), p.vars[ i ] ) == sigma.end() )
                pv.push_back( static_cast< int >( i ) );
        for ( std::uint32_t c = 0; c < ( 1u << pv.size() ); ++c ) {
            std::uint32_t m = 0;
            for ( std::size_t j = 0; j < pv.size(); ++j )
                if ( ( c >> j ) & 1u )
                    m |= 1u << pv[ j ];
            priv.push_back( m );
        }
        for ( const auto& a : L.axioms )
            aut.emplace_back( a );
    }

    const rep_layout& layout( const atomic_frame& f )
    {
        std::vector< int > k{ static_cast< int >( f.kind ), f.m, f.k, f.tail_reflexive };
        auto it = layouts.find( k );
        if ( it == layouts.end() )
            it = layouts.emplace( k, make_layout( f, f.is_tadpole() ? p.window( f.k ) : 0 ) ).first;
        return it->second;
    }

    cached_eval eval( const atomic_frame& f, const std::vector< std::uint32_t >& atoms, std::uint64_t e,
                      const std::vector< point_ref >& roots )
    {
        std::vector< std::uint64_t > k{ static_cast< std::uint64_t >( f.kind ), static_cast< std::uint64_t >( f.m ),
                                        static_cast< std::uint64_t >( f.k ), f.tail_reflexive, e };
        k.insert( k.end(), atoms.begin(), atoms.end() );
        auto it = cache.find( k );
        if ( it != cache.end() )
            return it->second;
        ++evals;
        const auto& lay = layout( f );
        auto ev = eval_component( p, lay, atoms, e, 0 );
        cached_eval out;
        out.here_f = ev.here_f;
        for ( std::size_t i = 0; i < roots.size(); ++i )
            if ( ev.rows[ lay.rep_of( roots[ i ] ) ][ goal ] )
                out.goal |= 1u << i;
        cache.emplace( std::move( k ), out );
        return out;
    }

    // Prepends one component to every state; records roots reaching the goal.
    side_set step( const side_set& in, const comp_choice& c, int seg, match_type type, int max_size, root_hits* hits )
    {
        side_set out;
        const int bp = c.frame.base_points();
        auto roots = root_candidates( c.frame );
        std::vector< std::uint32_t > atoms( bp );
        std::vector< std::size_t > pick( bp, 0 );
        for ( const auto& x : in.elems ) {
            int size = x.size + c.frame.size();
            if ( size > max_size )
                continue;
            std::vector< axiom_state > next;
            bool dead = false;
            for ( std::size_t j = 0; j < aut.size() && !dead; ++j ) {
                next.push_back( aut[ j ].prepend_component( x.aut[ j ], c.frame ) );
                dead = aut[ j ].refuted( next.back() );
            }
            if ( dead )
                continue;
            std::fill( pick.begin(), pick.end(), 0 );
            for ( ;; ) {
                for ( int i = 0; i < bp; ++i )
                    atoms[ i ] = sigma_to_side[ c.sigma[ i ] ] | priv[ pick[ i ] ];
                auto ev = eval( c.frame, atoms, x.e, roots );
                elem y{ x.e | ev.here_f, next, size, -1 };
                std::size_t before = trails.size();
                out.add( y, trails, { x.trail, c.frame, atoms, seg, type } );
                if ( hits && ev.goal ) {
                    int t = trails.size() > before ? static_cast< int >( trails.size() ) - 1 : -1;
                    if ( t < 0 ) {
                        trails.push_back( { x.trail, c.frame, atoms, seg, type } );
                        t = static_cast< int >( trails.size() ) - 1;
                    }
                    for ( std::size_t r = 0; r < roots.size(); ++r )
                        if ( ( ev.goal >> r ) & 1u ) {
                            std::uint32_t s = c.sigma[ base_of( c.frame, roots[ r ] ) ];
                            if ( !hits->count( s ) )
                                ( *hits )[ s ] = { t, roots[ r ] };
                        }
                }
                int i = 0;
                while ( i < bp && ++pick[ i ] == priv.size() )
                    pick[ i++ ] = 0;
                if ( i == bp )
                    break;
            }
        }
        return out;
    }
};

struct pair_node
{
    side_set side[ 2 ];
    int depth = 0;
};

// The shared part of a segment; per-side free components are drawn from
// the sigma-sets in `allowed`.
struct seg_choice
{
    match_type type = match_type::a;
    comp_choice comp;
    std::vector< std::uint32_t > allowed;
};

void multisets( int k, std::uint32_t n, std::uint32_t from, std::vector< std::uint32_t >& cur,
                std::vector< std::vector< std::uint32_t > >& out )
{
    if ( static_cast< int >( cur.size() ) == k ) {
        out.push_back( cur );
        return;
    }
    for ( std::uint32_t s = from; s < n; ++s ) {
        cur.push_back( s );
        multisets( k, n, s, cur, out );
        cur.pop_back();
    }
}

std::vector< std::vector< std::uint32_t > > sequences( int k, std::uint32_t n )
{
    std::vector< std::vector< std::uint32_t > > out{ {} };
    for ( int i = 0; i < k; ++i ) {
        std::vector< std::vector< std::uint32_t > > next;
        for ( const auto& s : out )
            for ( std::uint32_t a = 0; a < n; ++a ) {
                auto t = s;
                t.push_back( a );
                next.push_back( std::move( t ) );
            }
        out = std::move( next );
    }
    return out;
}

std::vector< std::uint32_t > distinct( std::vector< std::uint32_t > v )
{
    std::sort( v.begin(), v.end() );
    v.erase( std::unique( v.begin(), v.end() ), v.end() );
    return v;
}

std::vector< seg_choice > segment_menu( std::uint32_t n, const search_limits& lim )
{
    std::vector< seg_choice > out;
    for ( std::uint32_t s = 0; s < n; ++s )
        out.push_back( { match_type::a, { chain_frame( 1 ), { s } }, {} } );
    for ( int k = 1; k <= lim.max_k; ++k ) {
        std::vector< std::vector< std::uint32_t > > ms;
        std::vector< std::uint32_t > cur;
        multisets( k, n, 0, cur, ms );
        for ( auto& m : ms )
            out.push_back( { match_type::a, { cluster_frame( k ), m }, {} } );
    }
    for ( std::uint32_t set = 1; set < ( 1u << std::min< std::uint32_t >( n, 31 ) ); ++set ) {
        std::vector< std::uint32_t > allowed;
        for ( std::uint32_t s = 0; s < n; ++s )
            if ( ( set >> s ) & 1u )
                allowed.push_back( s );
        if ( static_cast< int >( allowed.size() ) <= lim.max_k )
            out.push_back( { match_type::b, {}, allowed } );
    }
    for ( int k = 1; k <= lim.max_k; ++k )
        for ( bool refl : { false, true } )
            for ( auto& seq : sequences( k, n ) )
                out.push_back( { match_type::c, { tadpole_r_frame( k, refl ), seq }, distinct( seq ) } );
    return out;
}

class witness_search
{
    formula _f1, _f2;
    const logic& _L;
    bounds _bd;
    search_limits _lim;
    int _max_size;
    std::vector< std::string > _sigma;
    std::unique_ptr< side_ctx > _side[ 2 ];
    std::vector< seg_choice > _menu;
    std::vector< pair_node > _nodes;
    std::map< std::vector< std::uint64_t >, int > _seen;

public:
    search_result result;

    witness_search( formula f1, formula f2, const logic& L, const bounds& bd, const search_limits& lim )
        : _f1{ f1 }, _f2{ f2 }, _L{ L }, _bd{ bd }, _lim{ lim }
    {
        long long cap = L.cofinal() ? bd.kb : bd.size_max;
        _max_size = static_cast< int >( std::min< long long >( lim.max_size, cap ) );
        for ( const auto& v : sig_intersect( signature_of( f1 ), signature_of( f2 ) ) )
            _sigma.push_back( v );
        if ( _sigma.size() > 8 )
            throw input_error( "witness search supports at most 8 shared variables" );
        _side[ 0 ] = std::make_unique< side_ctx >( f1, _sigma, L );
        _side[ 1 ] = std::make_unique< side_ctx >( neg( f2 ), _sigma, L );
        _menu = segment_menu( 1u << _sigma.size(), lim );
    }

    void run()
    {
        pair_node start;
        for ( int s = 0; s < 2; ++s ) {
            elem x;
            for ( const auto& a : _side[ s ]->aut )
                x.aut.push_back( a.start() );
            start.side[ s ].elems.push_back( x );
            start.side[ s ].index.emplace( key_of( x ), 0 );
        }
        _nodes.push_back( std::move( start ) );
        std::deque< int > queue{ 0 };
        int max_depth = static_cast< int >( std::min< long long >( _lim.max_segments, _bd.N_max ) );
        while ( !queue.empty() ) {
            int i = queue.front();
            queue.pop_front();
            if ( _nodes[ i ].depth >= max_depth )
                continue;
            for ( const auto& ch : _menu ) {
                if ( ++result.expanded > _lim.budget ) {
                    result.status = search_status::budget_exceeded;
                    return;
                }
                pair_node next;
                next.depth = _nodes[ i ].depth + 1;
                root_hits hits[ 2 ];
                bool alive = true;
                for ( int s = 0; s < 2 && alive; ++s ) {
                    next.side[ s ] = apply( *_side[ s ], _nodes[ i ].side[ s ], ch, next.depth, hits[ s ] );
                    alive = !next.side[ s ].elems.empty();
                }
                if ( !alive )
                    continue;
                for ( const auto& [ sig, h1 ] : hits[ 0 ] ) {
                    auto it = hits[ 1 ].find( sig );
                    if ( it == hits[ 1 ].end() )
                        continue;
                    auto w = build( h1, it->second );
                    if ( verify_witness( w, _f1, _f2, _L, _bd ).ok ) {
                        result.status = search_status::found;
                        result.witness = std::move( w );
                        return;
                    }
                }
                auto k = pair_key( next );
                if ( _seen.count( k ) )
                    continue;
                _seen.emplace( std::move( k ), static_cast< int >( _nodes.size() ) );
                _nodes.push_back( std::move( next ) );
                queue.push_back( static_cast< int >( _nodes.size() ) - 1 );
            }
        }
        result.status = search_status::exhausted;
    }

private:
    static std::vector< std::uint64_t > pair_key( const pair_node& n )
    {
        std::vector< std::uint64_t > k;
        for ( int s = 0; s < 2; ++s ) {
            for ( const auto& [ ek, _ ] : n.side[ s ].index ) {
                k.push_back( ek.size() );
                k.insert( k.end(), ek.begin(), ek.end() );
            }
            k.push_back( ~std::uint64_t{ 0 } );
        }
        return k;
    }

    side_set apply( side_ctx& ctx, const side_set& in, const seg_choice& ch, int seg, root_hits& hits )
    {
        if ( ch.type == match_type::a )
            return ctx.step( in, ch.comp, seg, ch.type, _max_size, &hits );
        side_set last;
        if ( ch.type == match_type::c ) {
            last = ctx.step( in, ch.comp, seg, ch.type, _max_size, &hits );
        } else {
            std::uint32_t need = 0;
            for ( auto s : ch.allowed )
                need |= 1u << s;
            const int n = static_cast< int >( ch.allowed.size() );
            for ( int k = n; k <= _lim.max_k; ++k ) {
                std::vector< std::vector< std::uint32_t > > ms;
                std::vector< std::uint32_t > cur;
                multisets( k, static_cast< std::uint32_t >( n ), 0, cur, ms );
                for ( auto& m : ms ) {
                    std::uint32_t got = 0;
                    for ( auto& x : m ) {
                        x = ch.allowed[ x ];
                        got |= 1u << x;
                    }
                    if ( got == need )
                        last.merge( ctx.step( in, { cluster_frame( k ), m }, seg, ch.type, _max_size, &hits ) );
                }
            }
            if ( n == 1 )
                for ( int k = 1; k <= _lim.max_k; ++k )
                    last.merge( ctx.step( in, { tadpole_r_frame( k, true ), std::vector< std::uint32_t >( k, ch.allowed[ 0 ] ) },
                                          seg, ch.type, _max_size, &hits ) );
        }
        side_set all = last, cur = last;
        for ( int layer = 0; layer < _lim.max_prefix && !cur.elems.empty(); ++layer ) {
            side_set next;
            for ( auto s : ch.allowed ) {
                next.merge( ctx.step( cur, { chain_frame( 1 ), { s } }, seg, ch.type, _max_size, &hits ) );
                next.merge( ctx.step( cur, { cluster_frame( 1 ), { s } }, seg, ch.type, _max_size, &hits ) );
            }
            all.merge( next );
            cur = std::move( next );
        }
        return all;
    }

    quasi_model model_of( const side_ctx& ctx, int t, const point_ref& root, std::vector< int >& segs,
                          std::vector< match_type >& types ) const
    {
        std::vector< simple_model > comps;
        segs.clear();
        types.clear();
        for ( ; t >= 0; t = ctx.trails[ t ].parent ) {
            const auto& tr = ctx.trails[ t ];
            simple_model c;
            c.frame = tr.frame;
            for ( auto a : tr.atoms ) {
                signature s;
                for ( std::size_t i = 0; i < ctx.p.vars.size(); ++i )
                    if ( ( a >> i ) & 1u )
                        s.insert( ctx.p.vars[ i ] );
                c.atoms.push_back( std::move( s ) );
            }
            comps.push_back( std::move( c ) );
            segs.push_back( tr.seg );
            types.push_back( tr.type );
        }
        quasi_model m = ordered_sum( comps );
        m.root = root;
        return m;
    }

    witness_pair build( const root_hit& h1, const root_hit& h2 ) const
    {
        witness_pair w;
        std::vector< int > s1, s2;
        std::vector< match_type > t1, t2;
        w.m1 = model_of( *_side[ 0 ], h1.trail, h1.point, s1, t1 );
        w.m2 = model_of( *_side[ 1 ], h2.trail, h2.point, s2, t2 );
        int l = 0, r = 0;
        while ( l < static_cast< int >( s1.size() ) && r < static_cast< int >( s2.size() ) ) {
            segment g;
            g.type = t1[ l ];
            g.left_begin = l;
            g.right_begin = r;
            int id = s1[ l ];
            while ( l < static_cast< int >( s1.size() ) && s1[ l ] == id )
                ++l;
            while ( r < static_cast< int >( s2.size() ) && s2[ r ] == id )
                ++r;
            g.left_end = l;
            g.right_end = r;
            w.segments.push_back( g );
        }
        return w;
    }
};

} // namespace

search_result search_witness( formula f1, formula f2, const logic& L, const bounds& bd, const search_limits& lim )
{
    if ( L.temporal || f1.is_temporal() || f2.is_temporal() )
        throw input_error( "the unimodal witness search needs a unimodal logic and formulas" );
    witness_search s( f1, f2, L, bd, lim );
    s.run();
    return s.result;
}

} // namespace iep
