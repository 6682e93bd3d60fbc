#include "iep/engine.hpp"
#include "iep/error.hpp"
#include "iep/semantics.hpp"
#include "iep/temporal.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <tuple>

namespace iep
{

namespace
{

bool dense_regime( temporal_logic t )
{
    return t == temporal_logic::lin || t == temporal_logic::lin_q || t == temporal_logic::lin_r;
}

struct block_spec
{
    block_kind kind = block_kind::identity;
    atomic_frame start, end;
    [[nodiscard]] int cost() const
    {
        return kind == block_kind::identity ? start.base_points() : start.base_points() + end.base_points() + 1;
    }
};

using skeleton = std::vector< block_spec >;

std::vector< skeleton > skeletons( temporal_logic t, const temporal_limits& lim )
{
    const bool dense = dense_regime( t ), z = t == temporal_logic::lin_z;
    // Options per position: 0 first, 1 middle, 2 last, 3 alone.
    auto options = [ & ]( bool first, bool last ) {
        std::vector< block_spec > out;
        auto id = [ & ]( atomic_frame f ) { out.push_back( { block_kind::identity, f, f } ); };
        auto sw = [ & ]( atomic_frame s, atomic_frame e ) { out.push_back( { block_kind::sandwich, s, e } ); };
        std::vector< atomic_frame > starts, ends;
        if ( dense ) {
            id( chain_frame( 1 ) );
            for ( int k = 1; k <= lim.max_k; ++k ) {
                id( cluster_frame( k ) );
                starts.push_back( cluster_frame( k ) );
                ends.push_back( cluster_frame( k ) );
            }
        } else if ( z && first && last ) {
            for ( int k = 1; k <= lim.max_k; ++k ) {
                id( cluster_frame( k ) );
                starts.push_back( tadpole_r_frame( k, false ) );
                ends.push_back( tadpole_l_frame( k, false ) );
            }
        } else {
            if ( !z || ( !first && !last ) )
                id( chain_frame( 1 ) );
            for ( int k = 1; k <= lim.max_k; ++k ) {
                if ( !z || ( !first && !last ) )
                    id( tadpole_lr_frame( k ) );
                if ( z && first )
                    id( tadpole_r_frame( k, false ) );
                if ( z && last )
                    id( tadpole_l_frame( k, false ) );
                starts.push_back( z && first ? tadpole_r_frame( k, false ) : tadpole_lr_frame( k ) );
                ends.push_back( z && last ? tadpole_l_frame( k, false ) : tadpole_lr_frame( k ) );
            }
        }
        for ( const auto& s : starts )
            for ( const auto& e : ends )
                sw( s, e );
        return out;
    };
    std::vector< skeleton > all;
    for ( int n = 1; n <= lim.max_blocks; ++n ) {
        std::vector< skeleton > level{ {} };
        for ( int j = 0; j < n; ++j ) {
            std::vector< skeleton > next;
            auto opts = options( j == 0, j + 1 == n );
            for ( const auto& s : level )
                for ( const auto& o : opts ) {
                    next.push_back( s );
                    next.back().push_back( o );
                }
            level = std::move( next );
        }
        std::stable_sort( level.begin(), level.end(), []( const skeleton& a, const skeleton& b ) {
            int ca = 0, cb = 0;
            for ( const auto& x : a )
                ca += x.cost();
            for ( const auto& x : b )
                cb += x.cost();
            return ca < cb;
        } );
        all.insert( all.end(), level.begin(), level.end() );
    }
    return all;
}

enum class last_kind : std::uint8_t { none, degenerate, reflexive };

// Arguments fixed by the components placed so far, and the arguments still
// promised on the open side.
struct state_key
{
    std::uint64_t exact = 0, promise = 0;
    int root = -1;
    last_kind last = last_kind::none;
    auto operator<=>( const state_key& ) const = default;
};

struct trail_node
{
    int parent = -1;
    atomic_frame frame;
    std::vector< std::uint32_t > atoms;
    int block = 0;
    std::optional< point_ref > root;
};

using state_set = std::map< state_key, int >;

class budget_exceeded
{
};

// Root positions shared by both sides: identity points by block, component
// and point, sandwich middles by block and sigma code.
class descriptor_table
{
    std::map< std::tuple< int, int, int, long long >, int > _ids;

public:
    int id( int block, int region, int comp, long long which )
    {
        auto k = std::make_tuple( block, region, comp, which );
        auto it = _ids.find( k );
        if ( it != _ids.end() )
            return it->second;
        int v = static_cast< int >( _ids.size() );
        _ids[ k ] = v;
        return v;
    }
};

long long ref_code( const point_ref& p )
{
    return static_cast< long long >( p.where ) * ( 1LL << 40 ) + p.index;
}

class side_ctx
{
public:
    program prog;
    int target;
    std::vector< std::uint32_t > sigma_to_side;
    std::uint32_t sigma_mask = 0;
    std::vector< int > private_bits;
    std::uint64_t full_f, full_p;
    std::vector< trail_node > trail;

    side_ctx( formula goal, const std::vector< std::string >& sigma )
        : prog{ compile( { goal } ) }, target{ prog.roots[ 0 ] }
    {
        if ( prog.vars.size() > 16 )
            throw input_error( "witness search supports at most 16 variables per formula" );
        std::vector< int > pos;
        for ( const auto& s : sigma ) {
            auto it = std::find( prog.vars.begin(), prog.vars.end(), s );
            pos.push_back( it == prog.vars.end() ? -1 : static_cast< int >( it - prog.vars.begin() ) );
        }
        for ( std::uint32_t code = 0; code < ( 1u << sigma.size() ); ++code ) {
            std::uint32_t m = 0;
            for ( std::size_t i = 0; i < sigma.size(); ++i )
                if ( ( ( code >> i ) & 1u ) && pos[ i ] >= 0 )
                    m |= 1u << pos[ i ];
            sigma_to_side.push_back( m );
        }
        sigma_mask = sigma_to_side.back();
        for ( std::size_t v = 0; v < prog.vars.size(); ++v )
            if ( !( ( sigma_mask >> v ) & 1u ) )
                private_bits.push_back( static_cast< int >( v ) );
        auto mask = []( std::size_t n ) { return n >= 64 ? ~std::uint64_t{ 0 } : ( std::uint64_t{ 1 } << n ) - 1; };
        full_f = mask( prog.fnode.size() );
        full_p = mask( prog.pnode.size() );
    }

    [[nodiscard]] int private_count() const { return static_cast< int >( private_bits.size() ); }

    [[nodiscard]] std::uint32_t spread( std::uint32_t code ) const
    {
        std::uint32_t m = 0;
        for ( std::size_t i = 0; i < private_bits.size(); ++i )
            if ( ( code >> i ) & 1u )
                m |= 1u << private_bits[ i ];
        return m;
    }

    int push_trail( trail_node n )
    {
        trail.push_back( std::move( n ) );
        return static_cast< int >( trail.size() ) - 1;
    }
};

struct comp_move
{
    atomic_frame frame;
    int block = 0;
    // Sigma codes per base point; for free points the allowed codes.
    std::vector< std::uint32_t > sigma;
    std::vector< std::uint32_t > allowed;
    bool free_sigma = false;
    // Root descriptor per representative, given the sigma code at it.
    std::function< int( const point_ref&, std::uint32_t ) > describe;
};

class temporal_search
{
    temporal_logic _t;
    temporal_limits _lim;
    bool _dense;
    std::vector< std::string > _sigma;
    side_ctx _s1, _s2;
    int _window_md;
    // Components are placed last to first when that guesses fewer bits.
    bool _backward;
    descriptor_table _desc;
    long long _expanded = 0;
    std::map< atomic_frame, rep_layout, std::function< bool( const atomic_frame&, const atomic_frame& ) > > _layouts;

public:
    temporal_search( formula f1, formula f2, temporal_logic t, const temporal_limits& lim )
        : _t{ t }, _lim{ lim }, _dense{ dense_regime( t ) }, _sigma{ sorted_sigma( f1, f2 ) },
          _s1{ f1, _sigma }, _s2{ neg( f2 ), _sigma }, _window_md{ std::max( _s1.prog.md, _s2.prog.md ) },
          _backward{ _s1.prog.pnode.size() + _s2.prog.pnode.size() < _s1.prog.fnode.size() + _s2.prog.fnode.size() },
          _layouts{ []( const atomic_frame& a, const atomic_frame& b ) {
              return std::tie( a.kind, a.m, a.k, a.tail_reflexive ) < std::tie( b.kind, b.m, b.k, b.tail_reflexive );
          } }
    {
        if ( _sigma.size() > 8 )
            throw input_error( "witness search supports at most 8 shared variables" );
    }

    temporal_search_result run()
    {
        temporal_search_result res;
        try {
            for ( const auto& sk : skeletons( _t, _lim ) ) {
                if ( auto w = try_skeleton( sk ) ) {
                    res.status = search_status::found;
                    res.witness = std::move( w );
                    break;
                }
            }
        } catch ( const budget_exceeded& ) {
            res.status = search_status::budget_exceeded;
        }
        res.expanded = _expanded;
        return res;
    }

private:
    static std::vector< std::string > sorted_sigma( formula f1, formula f2 )
    {
        auto s = sig_intersect( signature_of( f1 ), signature_of( f2 ) );
        return { s.begin(), s.end() };
    }

    const rep_layout& layout( const atomic_frame& f )
    {
        auto it = _layouts.find( f );
        if ( it == _layouts.end() )
            it = _layouts.emplace( f, make_layout( f, f.is_tadpole() ? f.k * ( _window_md + 1 ) : 0 ) ).first;
        return it->second;
    }

    state_set start( side_ctx& ctx ) const
    {
        state_set s;
        const std::uint64_t full = _backward ? ctx.full_p : ctx.full_f;
        for ( std::uint64_t g = full;; g = ( g - 1 ) & full ) {
            s.emplace( state_key{ 0, g, -1, last_kind::none }, -1 );
            if ( g == 0 )
                break;
        }
        return s;
    }

    bool adjacency_ok( last_kind prev, bool reflexive ) const
    {
        if ( _t == temporal_logic::lin_q || _t == temporal_logic::lin_r ) {
            if ( prev == last_kind::none && !reflexive )
                return false;
            if ( prev == last_kind::degenerate && !reflexive )
                return false;
        }
        if ( _t == temporal_logic::lin_r && prev == last_kind::reflexive && reflexive )
            return false;
        return true;
    }

    state_set step( side_ctx& ctx, const state_set& in, const comp_move& mv )
    {
        state_set out;
        const auto& lay = layout( mv.frame );
        const int bp = mv.frame.base_points();
        const bool reflexive = mv.frame.kind == shape::cluster;
        const int pc = ctx.private_count();
        const std::uint64_t priv_total = std::uint64_t{ 1 } << ( pc * bp );
        std::vector< std::uint32_t > sig_codes( bp );
        std::vector< std::uint32_t > sig_choices = mv.free_sigma ? mv.allowed : std::vector< std::uint32_t >{ 0 };
        for ( const auto& [ key, tr ] : in ) {
            if ( !adjacency_ok( key.last, reflexive ) )
                continue;
            for ( std::uint32_t sc : sig_choices ) {
                for ( int j = 0; j < bp; ++j )
                    sig_codes[ j ] = mv.free_sigma ? sc : mv.sigma[ j ];
                for ( std::uint64_t pcode = 0; pcode < priv_total; ++pcode ) {
                    std::vector< std::uint32_t > atoms( bp );
                    for ( int j = 0; j < bp; ++j )
                        atoms[ j ] = ctx.sigma_to_side[ sig_codes[ j ] ] |
                                     ctx.spread( static_cast< std::uint32_t >( ( pcode >> ( j * pc ) ) &
                                                                               ( ( 1u << pc ) - 1 ) ) );
                    for ( std::uint64_t g = key.promise;; g = ( g - 1 ) & key.promise ) {
                        if ( ++_expanded > _lim.budget )
                            throw budget_exceeded{};
                        auto ev = _backward ? eval_component( ctx.prog, lay, atoms, key.exact, g )
                                            : eval_component( ctx.prog, lay, atoms, g, key.exact );
                        const std::uint64_t here = _backward ? ev.here_p : ev.here_f;
                        const std::uint64_t fixed = _backward ? ev.here_f : ev.here_p;
                        if ( ( here | g ) == key.promise ) {
                            state_key nk{ key.exact | fixed, g, key.root,
                                          reflexive ? last_kind::reflexive : last_kind::degenerate };
                            auto add = [ & ]( int root, std::optional< point_ref > at ) {
                                nk.root = root;
                                if ( out.count( nk ) )
                                    return;
                                out[ nk ] = ctx.push_trail( { tr, mv.frame, atoms, mv.block, at } );
                            };
                            add( key.root, std::nullopt );
                            if ( key.root < 0 )
                                for ( int r = 0; r < lay.size(); ++r )
                                    if ( ev.rows[ r ][ ctx.target ] ) {
                                        const auto& ref = lay.refs[ r ];
                                        add( mv.describe( ref, sig_codes[ lay.base[ r ] ] ), ref );
                                    }
                        }
                        if ( g == 0 )
                            break;
                    }
                }
            }
        }
        return out;
    }

    std::vector< int > final_roots( const state_set& s ) const
    {
        std::vector< int > out;
        for ( const auto& [ k, tr ] : s )
            if ( k.promise == 0 && k.root >= 0 &&
                 ( ( _t != temporal_logic::lin_q && _t != temporal_logic::lin_r ) || k.last == last_kind::reflexive ) )
                out.push_back( k.root );
        std::sort( out.begin(), out.end() );
        out.erase( std::unique( out.begin(), out.end() ), out.end() );
        return out;
    }

    static int trail_of( const state_set& s, int root, temporal_logic t )
    {
        for ( const auto& [ k, tr ] : s )
            if ( k.promise == 0 && k.root == root &&
                 ( ( t != temporal_logic::lin_q && t != temporal_logic::lin_r ) || k.last == last_kind::reflexive ) )
                return tr;
        return -1;
    }

    quasi_model model_of( const side_ctx& ctx, int tr, std::vector< std::pair< int, int > >& ranges ) const
    {
        std::vector< const trail_node* > path;
        for ( int i = tr; i >= 0; i = ctx.trail[ i ].parent )
            path.push_back( &ctx.trail[ i ] );
        if ( !_backward )
            std::reverse( path.begin(), path.end() );
        std::vector< simple_model > comps;
        point_ref root;
        for ( const auto* n : path ) {
            simple_model c;
            c.frame = n->frame;
            for ( auto a : n->atoms ) {
                signature sg;
                for ( std::size_t v = 0; v < ctx.prog.vars.size(); ++v )
                    if ( ( a >> v ) & 1u )
                        sg.insert( ctx.prog.vars[ v ] );
                c.atoms.push_back( std::move( sg ) );
            }
            if ( n->root ) {
                root = *n->root;
                root.comp = static_cast< int >( comps.size() );
            }
            if ( static_cast< int >( ranges.size() ) <= n->block )
                ranges.resize( n->block + 1, { static_cast< int >( comps.size() ), static_cast< int >( comps.size() ) } );
            ranges[ n->block ].second = static_cast< int >( comps.size() ) + 1;
            comps.push_back( std::move( c ) );
        }
        quasi_model q = ordered_sum( comps, true );
        q.root = root;
        return q;
    }

    struct slot
    {
        int block;
        bool interior;
        block_kind kind;
        atomic_frame frame;
        bool is_end;
        bool opens = false;
    };

    std::vector< std::uint32_t > all_codes() const
    {
        std::vector< std::uint32_t > v;
        for ( std::uint32_t c = 0; c < ( 1u << _sigma.size() ); ++c )
            v.push_back( c );
        return v;
    }

    std::optional< temporal_witness > try_skeleton( const skeleton& sk )
    {
        std::vector< slot > slots;
        for ( std::size_t j = 0; j < sk.size(); ++j ) {
            const int b = static_cast< int >( j );
            if ( sk[ j ].kind == block_kind::identity ) {
                slots.push_back( { b, false, block_kind::identity, sk[ j ].start, false } );
            } else {
                slots.push_back( { b, false, block_kind::sandwich, sk[ j ].start, false } );
                slots.push_back( { b, true, block_kind::sandwich, chain_frame( 1 ), false } );
                slots.push_back( { b, false, block_kind::sandwich, sk[ j ].end, true } );
            }
        }
        if ( _backward )
            std::reverse( slots.begin(), slots.end() );
        std::set< int > opened;
        for ( auto& sl : slots )
            if ( sl.kind == block_kind::sandwich && !sl.interior )
                sl.opens = opened.insert( sl.block ).second;
        _s1.trail.clear();
        _s2.trail.clear();
        std::vector< std::uint32_t > S;
        std::optional< temporal_witness > found;
        std::function< void( std::size_t, const state_set&, const state_set& ) > go =
            [ & ]( std::size_t i, const state_set& a, const state_set& b ) {
                if ( found )
                    return;
                if ( i == slots.size() ) {
                    finish( sk, a, b, found );
                    return;
                }
                const auto& sl = slots[ i ];
                if ( sl.interior ) {
                    auto a2 = interior( _s1, a, sl.block, S ), b2 = interior( _s2, b, sl.block, S );
                    if ( !a2.empty() && !b2.empty() )
                        go( i + 1, a2, b2 );
                    return;
                }
                const int bp = sl.frame.base_points();
                const std::uint64_t total = std::uint64_t{ 1 } << ( _sigma.size() * bp );
                const std::uint32_t one = ( 1u << _sigma.size() ) - 1;
                for ( std::uint64_t code = 0; code < total && !found; ++code ) {
                    comp_move mv;
                    mv.frame = sl.frame;
                    mv.block = sl.block;
                    for ( int j = 0; j < bp; ++j )
                        mv.sigma.push_back( static_cast< std::uint32_t >( ( code >> ( j * _sigma.size() ) ) & one ) );
                    std::vector< std::uint32_t > set = mv.sigma;
                    std::sort( set.begin(), set.end() );
                    set.erase( std::unique( set.begin(), set.end() ), set.end() );
                    if ( sl.kind == block_kind::sandwich && !sl.opens && set != S )
                        continue;
                    if ( sl.kind == block_kind::sandwich && sl.opens )
                        S = set;
                    mv.describe = describer( sl );
                    auto a2 = step( _s1, a, mv );
                    if ( a2.empty() )
                        continue;
                    auto b2 = step( _s2, b, mv );
                    if ( b2.empty() )
                        continue;
                    go( i + 1, a2, b2 );
                }
            };
        go( 0, start( _s1 ), start( _s2 ) );
        return found;
    }

    std::function< int( const point_ref&, std::uint32_t ) > describer( const slot& sl )
    {
        const int block = sl.block;
        if ( sl.kind == block_kind::identity ) {
            return [ this, block ]( const point_ref& p, std::uint32_t ) { return _desc.id( block, 0, 0, ref_code( p ) ); };
        }
        const bool is_end = sl.is_end;
        const atomic_frame f = sl.frame;
        return [ this, block, is_end, f ]( const point_ref& p, std::uint32_t code ) {
            bool outer = f.kind == shape::tadpole_lr &&
                         ( ( !is_end && p.where == part::tail_l ) || ( is_end && p.where == part::tail_r ) );
            if ( outer )
                return _desc.id( block, 2, is_end ? 1 : 0, ref_code( p ) );
            return _desc.id( block, 1, 0, code );
        };
    }

    state_set interior( side_ctx& ctx, const state_set& in, int block, const std::vector< std::uint32_t >& S )
    {
        state_set all = in, cur = in;
        for ( int n = 0; n < _lim.max_interior && !cur.empty(); ++n ) {
            state_set next;
            for ( const atomic_frame& f : _dense ? std::vector< atomic_frame >{ chain_frame( 1 ), cluster_frame( 1 ) }
                                                 : std::vector< atomic_frame >{ chain_frame( 1 ) } ) {
                comp_move mv;
                mv.frame = f;
                mv.block = block;
                mv.free_sigma = true;
                mv.allowed = S;
                mv.describe = [ this, block ]( const point_ref&, std::uint32_t code ) {
                    return _desc.id( block, 1, 0, code );
                };
                for ( auto& kv : step( ctx, cur, mv ) )
                    next.insert( kv );
            }
            state_set fresh;
            for ( auto& kv : next )
                if ( all.insert( kv ).second )
                    fresh.insert( kv );
            cur = std::move( fresh );
        }
        return all;
    }

    void finish( const skeleton& sk, const state_set& a, const state_set& b, std::optional< temporal_witness >& found )
    {
        auto r1 = final_roots( a ), r2 = final_roots( b );
        std::vector< int > common;
        std::set_intersection( r1.begin(), r1.end(), r2.begin(), r2.end(), std::back_inserter( common ) );
        for ( int root : common ) {
            std::vector< std::pair< int, int > > g1, g2;
            temporal_witness w;
            w.m1 = model_of( _s1, trail_of( a, root, _t ), g1 );
            w.m2 = model_of( _s2, trail_of( b, root, _t ), g2 );
            for ( std::size_t j = 0; j < sk.size(); ++j )
                w.blocks.push_back( { sk[ j ].kind, g1[ j ].first, g1[ j ].second, g2[ j ].first, g2[ j ].second } );
            found = std::move( w );
            return;
        }
    }
};

} // namespace

temporal_search_result search_temporal_witness( formula f1, formula f2, temporal_logic t, const temporal_limits& lim )
{
    if ( f1.is_unimodal_modal() || f2.is_unimodal_modal() )
        throw input_error( "temporal witness search needs temporal formulas" );
    temporal_search s( f1, f2, t, lim );
    auto r = s.run();
    if ( r.witness ) {
        auto rep = verify_temporal_witness( *r.witness, f1, f2, t );
        if ( !rep.ok )
            throw std::logic_error( "temporal witness search produced a witness failing " + rep.failed );
    }
    return r;
}

namespace
{

temporal_verdict decide_temporal( formula f1, formula f2, temporal_logic t, const temporal_limits& lim,
                                  const enumerate_limits& en )
{
    temporal_verdict v;
    auto& log = v.transcript;
    auto imp = decide_temporal_validity( implies( f1, f2 ), t, en.validity_states );
    if ( imp.status == validity_status::countermodel ) {
        v.kind = verdict_kind::implication_invalid;
        v.countermodel = imp.countermodel;
        log.push_back( "implication: countermodel found" );
        return v;
    }
    log.push_back( std::string( "implication: " ) +
                   ( imp.status == validity_status::valid ? "valid" : "not refuted (" + imp.note + ")" ) );
    auto s = search_temporal_witness( f1, f2, t, lim );
    log.push_back( "witness search: " + std::to_string( s.expanded ) + " evaluations, " +
                   ( s.status == search_status::found       ? "found"
                     : s.status == search_status::exhausted ? "exhausted"
                                                            : "budget exceeded" ) );
    if ( s.witness ) {
        auto rep = verify_temporal_witness( *s.witness, f1, f2, t );
        for ( const auto& line : rep.transcript )
            log.push_back( "verify " + line );
        v.kind = verdict_kind::no_interpolant;
        v.witness = s.witness;
        return v;
    }
    auto c = enumerate_interpolant( f1, f2, builtin_logic( temporal_logic_name( t ) ), en );
    if ( c ) {
        v.kind = verdict_kind::interpolant_exists;
        v.interpolant = c;
        log.push_back( "enumerator: interpolant " + render( *c ) );
    } else {
        log.push_back( "enumerator: no interpolant up to size " + std::to_string( en.max_size ) + ", depth " +
                       std::to_string( en.max_depth ) );
    }
    return v;
}

} // namespace

temporal_verdict decide_iep_dense( formula f1, formula f2, temporal_logic t, const temporal_limits& lim,
                                   const enumerate_limits& en )
{
    if ( !dense_regime( t ) )
        throw input_error( std::string( "not a dense-regime logic: " ) + temporal_logic_name( t ) );
    if ( f1.is_unimodal_modal() || f2.is_unimodal_modal() )
        throw input_error( "temporal procedures need temporal formulas" );
    return decide_temporal( f1, f2, t, lim, en );
}

temporal_verdict decide_iep_discrete( formula f1, formula f2, temporal_logic t, const temporal_limits& lim,
                                      const enumerate_limits& en )
{
    if ( dense_regime( t ) )
        throw input_error( std::string( "not a discrete-regime logic: " ) + temporal_logic_name( t ) );
    if ( f1.is_unimodal_modal() || f2.is_unimodal_modal() )
        throw input_error( "temporal procedures need temporal formulas" );
    return decide_temporal( f1, f2, t, lim, en );
}

} // namespace iep
