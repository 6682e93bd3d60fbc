#include "iep/qmodel.hpp"
#include "iep/error.hpp"

#include <algorithm>
#include <charconv>

namespace iep
{

const char* shape_name( shape s )
{
    switch ( s ) {
    case shape::chain: return "chain";
    case shape::refl_chain: return "refl_chain";
    case shape::cluster: return "cluster";
    case shape::tadpole_r: return "tadpole_r";
    case shape::tadpole_l: return "tadpole_l";
    case shape::tadpole_lr: return "tadpole_lr";
    }
    return "?";
}

shape shape_from_name( const std::string& name )
{
    for ( auto s : { shape::chain, shape::refl_chain, shape::cluster, shape::tadpole_r, shape::tadpole_l,
                     shape::tadpole_lr } )
        if ( name == shape_name( s ) )
            return s;
    throw input_error( "unknown shape: " + name );
}

int atomic_frame::base_points() const
{
    switch ( kind ) {
    case shape::chain: return m;
    case shape::refl_chain: return m + 1;
    default: return k;
    }
}

int atomic_frame::size() const { return base_points(); }

atomic_frame chain_frame( int m ) { return { shape::chain, m, 1, false }; }
atomic_frame refl_chain_frame( int m ) { return { shape::refl_chain, m, 1, false }; }
atomic_frame cluster_frame( int k ) { return { shape::cluster, 1, k, false }; }
atomic_frame tadpole_r_frame( int k, bool tail_reflexive ) { return { shape::tadpole_r, 1, k, tail_reflexive }; }
atomic_frame tadpole_l_frame( int k, bool tail_reflexive ) { return { shape::tadpole_l, 1, k, tail_reflexive }; }
atomic_frame tadpole_lr_frame( int k ) { return { shape::tadpole_lr, 1, k, false }; }

quasi_frame frame_of( const quasi_model& m )
{
    quasi_frame f;
    f.temporal = m.temporal;
    for ( const auto& c : m.comps )
        f.comps.push_back( c.frame );
    return f;
}

quasi_model ordered_sum( std::vector< simple_model > comps, bool temporal )
{
    if ( comps.empty() )
        throw input_error( "ordered sum of no components" );
    for ( auto& c : comps ) {
        const auto& f = c.frame;
        if ( f.m < 1 || f.k < 1 )
            throw input_error( "atomic frame parameters must be positive" );
        if ( f.temporal_only() && !temporal )
            throw input_error( std::string( "shape " ) + shape_name( f.kind ) + " needs a temporal model" );
        if ( f.kind == shape::tadpole_lr && f.tail_reflexive )
            throw input_error( "tadpole_lr tails are irreflexive" );
        if ( c.atoms.empty() )
            c.atoms.resize( f.base_points() );
        if ( static_cast< int >( c.atoms.size() ) != f.base_points() )
            throw input_error( "valuation does not match the component's points" );
        if ( !c.names.empty() && ( f.is_tadpole() || static_cast< int >( c.names.size() ) != f.base_points() ) )
            throw input_error( "point names must cover exactly the points of a finite component" );
    }
    quasi_model m;
    m.comps = std::move( comps );
    m.temporal = temporal;
    return m;
}

void validate_point( const quasi_model& m, const point_ref& p )
{
    if ( p.comp < 0 || p.comp >= static_cast< int >( m.comps.size() ) )
        throw input_error( "point refers to a missing component" );
    const auto& f = m.comps[ p.comp ].frame;
    if ( p.index < 0 )
        throw input_error( "negative point index" );
    bool ok = false;
    switch ( p.where ) {
    case part::finite: ok = !f.is_tadpole() && p.index < f.base_points(); break;
    case part::cluster: ok = f.is_tadpole() && p.index < f.k; break;
    case part::tail: ok = f.kind == shape::tadpole_r || f.kind == shape::tadpole_l; break;
    case part::tail_l:
    case part::tail_r: ok = f.kind == shape::tadpole_lr; break;
    }
    if ( !ok )
        throw input_error( "point does not exist in component " + std::to_string( p.comp ) );
}

std::string point_name( const quasi_model& m, const point_ref& p )
{
    const auto& c = m.comps.at( p.comp );
    std::string pre = std::to_string( p.comp ) + ":";
    switch ( p.where ) {
    case part::finite:
        if ( !c.names.empty() )
            return c.names.at( p.index );
        return pre + std::to_string( p.index );
    case part::cluster: return pre + "a" + std::to_string( p.index );
    case part::tail: return pre + "b" + std::to_string( p.index );
    case part::tail_l: return pre + "bL" + std::to_string( p.index );
    case part::tail_r: return pre + "bR" + std::to_string( p.index );
    }
    return pre;
}

point_ref parse_point( const quasi_model& m, const std::string& text )
{
    for ( std::size_t c = 0; c < m.comps.size(); ++c )
        for ( std::size_t i = 0; i < m.comps[ c ].names.size(); ++i )
            if ( m.comps[ c ].names[ i ] == text )
                return { static_cast< int >( c ), part::finite, static_cast< long long >( i ) };

    auto colon = text.find( ':' );
    if ( colon == std::string::npos )
        throw input_error( "unknown point: " + text );
    auto number = []( std::string_view s, long long& out ) {
        if ( s.empty() )
            return false;
        auto [ ptr, ec ] = std::from_chars( s.data(), s.data() + s.size(), out );
        return ec == std::errc{} && ptr == s.data() + s.size();
    };
    long long comp = 0, idx = 0;
    std::string_view rest = std::string_view( text ).substr( colon + 1 );
    if ( !number( std::string_view( text ).substr( 0, colon ), comp ) )
        throw input_error( "bad point: " + text );
    point_ref p{ static_cast< int >( comp ), part::finite, 0 };
    if ( rest.starts_with( "bL" ) ) {
        p.where = part::tail_l;
        rest.remove_prefix( 2 );
    } else if ( rest.starts_with( "bR" ) ) {
        p.where = part::tail_r;
        rest.remove_prefix( 2 );
    } else if ( rest.starts_with( "b" ) ) {
        p.where = part::tail;
        rest.remove_prefix( 1 );
    } else if ( rest.starts_with( "a" ) ) {
        p.where = part::cluster;
        rest.remove_prefix( 1 );
    } else if ( comp >= 0 && comp < static_cast< long long >( m.comps.size() ) && m.comps[ comp ].frame.is_tadpole() ) {
        p.where = part::cluster;
    }
    if ( !number( rest, idx ) )
        throw input_error( "bad point: " + text );
    p.index = idx;
    validate_point( m, p );
    return p;
}

signature atoms_at( const quasi_model& m, const point_ref& p )
{
    validate_point( m, p );
    const auto& c = m.comps[ p.comp ];
    if ( p.where == part::finite || p.where == part::cluster )
        return c.atoms[ p.index ];
    return c.atoms[ p.index % c.frame.k ];
}

long long model_size( const quasi_frame& f )
{
    long long s = 0;
    for ( const auto& c : f.comps )
        s += c.size();
    return s;
}

bool is_L_bounded( const atomic_frame& f, long long cL, long long /*kb*/, long long pL )
{
    switch ( f.kind ) {
    case shape::chain:
    case shape::refl_chain: return f.m <= cL + 1;
    default: return f.k <= pL;
    }
}

int truncation::index_of( const point_ref& p ) const
{
    for ( std::size_t i = 0; i < origin.size(); ++i )
        if ( origin[ i ] == p )
            return static_cast< int >( i );
    return -1;
}

truncation truncate( const quasi_model& m, int window )
{
    if ( window < 1 )
        throw input_error( "truncation window must be positive" );
    truncation t;
    std::vector< cluster_shape > shapes;
    auto add = [ & ]( bool refl, std::vector< point_ref > pts, long long dist_base, bool tail_desc ) {
        shapes.push_back( { refl, static_cast< int >( pts.size() ) } );
        for ( auto& p : pts ) {
            t.model.names.push_back( point_name( m, p ) );
            t.model.atoms.push_back( atoms_at( m, p ) );
            t.origin.push_back( p );
            t.boundary_distance.push_back( dist_base < 0 ? -1 : ( tail_desc ? window - 1 - p.index : p.index ) );
        }
    };
    for ( int c = 0; c < static_cast< int >( m.comps.size() ); ++c ) {
        const auto& f = m.comps[ c ].frame;
        auto cluster_pts = [ & ] {
            std::vector< point_ref > v;
            for ( int i = 0; i < f.k; ++i )
                v.push_back( { c, part::cluster, i } );
            return v;
        };
        switch ( f.kind ) {
        case shape::chain:
            for ( int i = 0; i < f.m; ++i )
                add( false, { { c, part::finite, i } }, -1, false );
            break;
        case shape::refl_chain:
            add( true, { { c, part::finite, 0 } }, -1, false );
            for ( int i = 1; i <= f.m; ++i )
                add( false, { { c, part::finite, i } }, -1, false );
            break;
        case shape::cluster: {
            std::vector< point_ref > v;
            for ( int i = 0; i < f.k; ++i )
                v.push_back( { c, part::finite, i } );
            add( true, v, -1, false );
            break;
        }
        case shape::tadpole_r:
            add( true, cluster_pts(), -1, false );
            for ( int n = window - 1; n >= 0; --n )
                add( f.tail_reflexive, { { c, part::tail, n } }, 0, true );
            break;
        case shape::tadpole_l:
            for ( int n = 0; n < window; ++n )
                add( f.tail_reflexive, { { c, part::tail, n } }, 0, true );
            add( true, cluster_pts(), -1, false );
            break;
        case shape::tadpole_lr:
            for ( int n = 0; n < window; ++n )
                add( false, { { c, part::tail_l, n } }, 0, true );
            add( true, cluster_pts(), -1, false );
            for ( int n = window - 1; n >= 0; --n )
                add( false, { { c, part::tail_r, n } }, 0, true );
            break;
        }
    }
    t.model.frame = finite_frame{ shapes };
    t.model.temporal = m.temporal;
    return t;
}

int rep_layout::rep_of( const point_ref& p ) const
{
    point_ref q = p;
    q.comp = 0;
    if ( q.where == part::tail || q.where == part::tail_l || q.where == part::tail_r ) {
        int k = 0;
        for ( const auto& r : refs )
            k += r.where == part::cluster;
        if ( q.index >= window ) {
            long long lo = window - k;
            q.index = lo + ( q.index - lo ) % k;
        }
    }
    for ( int i = 0; i < size(); ++i )
        if ( refs[ i ] == q )
            return i;
    throw input_error( "point has no representative" );
}

rep_layout make_layout( const atomic_frame& f, int window )
{
    rep_layout L;
    const int k = f.k;
    if ( f.is_tadpole() ) {
        if ( window < k || window % k != 0 )
            throw input_error( "tail window must be a positive multiple of the cluster size" );
        L.window = window;
    }
    auto push = [ & ]( part w, int idx, int base ) {
        L.refs.push_back( { 0, w, idx } );
        L.base.push_back( base );
    };
    switch ( f.kind ) {
    case shape::chain:
    case shape::refl_chain:
    case shape::cluster:
        for ( int i = 0; i < f.base_points(); ++i )
            push( part::finite, i, i );
        break;
    case shape::tadpole_r:
    case shape::tadpole_l:
        for ( int i = 0; i < k; ++i )
            push( part::cluster, i, i );
        for ( int n = 0; n < window; ++n )
            push( part::tail, n, n % k );
        break;
    case shape::tadpole_lr:
        for ( int i = 0; i < k; ++i )
            push( part::cluster, i, i );
        for ( int n = 0; n < window; ++n )
            push( part::tail_l, n, n % k );
        for ( int n = 0; n < window; ++n )
            push( part::tail_r, n, n % k );
        break;
    }
    const int n = L.size();
    L.fut.assign( n, {} );
    L.past.assign( n, {} );

    // Position of a representative along the component, with the unbounded
    // part of a tail standing in as "beyond the window".
    auto sees = [ & ]( int x, int y ) -> bool {
        const auto& a = L.refs[ x ];
        const auto& b = L.refs[ y ];
        switch ( f.kind ) {
        case shape::chain: return a.index < b.index;
        case shape::refl_chain: return a.index < b.index || ( a.index == 0 && b.index == 0 );
        case shape::cluster: return true;
        case shape::tadpole_r:
            if ( a.where == part::cluster )
                return true;
            if ( b.where == part::cluster )
                return false;
            return a.index > b.index || ( a.index == b.index && f.tail_reflexive );
        case shape::tadpole_l:
            if ( b.where == part::cluster )
                return true;
            if ( a.where == part::cluster )
                return false;
            return a.index < b.index || ( a.index == b.index && f.tail_reflexive );
        case shape::tadpole_lr: {
            auto rank = []( part w ) { return w == part::tail_l ? 0 : w == part::cluster ? 1 : 2; };
            int ra = rank( a.where ), rb = rank( b.where );
            if ( ra != rb )
                return ra < rb;
            if ( ra == 1 )
                return true;
            if ( ra == 0 )
                return a.index < b.index;
            return a.index > b.index;
        }
        }
        return false;
    };
    for ( int x = 0; x < n; ++x )
        for ( int y = 0; y < n; ++y )
            if ( sees( x, y ) ) {
                L.fut[ x ].push_back( y );
                L.past[ y ].push_back( x );
            }

    // Tail points beyond the window: b_n with n >= window. Every tail point
    // in the window on the infinite side sees them (tadpole_l, left tail of
    // tadpole_lr looking future; tadpole_r, right tail looking past) and does
    // so infinitely often, so the last period stands in for them.
    if ( f.is_tadpole() ) {
        auto stand_in = [ & ]( part w, std::vector< std::vector< int > >& lists ) {
            std::vector< int > tail;
            for ( int y = 0; y < n; ++y )
                if ( L.refs[ y ].where == w && L.refs[ y ].index >= window - k )
                    tail.push_back( y );
            for ( int x = 0; x < n; ++x ) {
                if ( L.refs[ x ].where != w )
                    continue;
                auto& v = lists[ x ];
                for ( int y : tail )
                    if ( std::find( v.begin(), v.end(), y ) == v.end() )
                        v.push_back( y );
            }
        };
        switch ( f.kind ) {
        case shape::tadpole_r: stand_in( part::tail, L.past ); break;
        case shape::tadpole_l: stand_in( part::tail, L.fut ); break;
        default:
            stand_in( part::tail_l, L.fut );
            stand_in( part::tail_r, L.past );
            break;
        }
    }
    return L;
}

} // namespace iep
