#include "iep/error.hpp"
#include "iep/semantics.hpp"
#include "iep/temporal.hpp"

#include <algorithm>

namespace iep
{

const char* block_kind_name( block_kind k )
{
    return k == block_kind::identity ? "identity" : "sandwich";
}

block_kind block_kind_from_name( const std::string& s )
{
    if ( s == "identity" )
        return block_kind::identity;
    if ( s == "sandwich" )
        return block_kind::sandwich;
    throw input_error( "unknown block kind: " + s );
}

namespace
{

using code_set = std::set< signature >;

code_set sigma_sets( const simple_model& m, const signature& sigma )
{
    code_set out;
    for ( const auto& a : m.atoms )
        out.insert( sig_intersect( a, sigma ) );
    return out;
}

bool pointwise_equal( const simple_model& a, const simple_model& b, const signature& sigma )
{
    if ( !( a.frame == b.frame ) )
        return false;
    for ( std::size_t i = 0; i < a.atoms.size(); ++i )
        if ( sig_intersect( a.atoms[ i ], sigma ) != sig_intersect( b.atoms[ i ], sigma ) )
            return false;
    return true;
}

bool sandwich_start( const atomic_frame& f )
{
    return f.kind == shape::tadpole_lr || f.kind == shape::tadpole_r || f.kind == shape::cluster;
}

bool sandwich_end( const atomic_frame& f )
{
    return f.kind == shape::tadpole_lr || f.kind == shape::tadpole_l || f.kind == shape::cluster;
}

bool dense_regime( temporal_logic t )
{
    return t == temporal_logic::lin || t == temporal_logic::lin_q || t == temporal_logic::lin_r;
}

} // namespace

std::vector< std::string > temporal_block_mismatch( const std::vector< simple_model >& n1,
                                                    const std::vector< simple_model >& n2, const signature& sigma,
                                                    block_kind kind )
{
    std::vector< std::string > why;
    if ( kind == block_kind::identity ) {
        if ( n1.size() != 1 || n2.size() != 1 )
            why.push_back( "identity block must be one component per side" );
        else if ( !( n1[ 0 ].frame == n2[ 0 ].frame ) )
            why.push_back( "identity block frames differ" );
        else if ( !pointwise_equal( n1[ 0 ], n2[ 0 ], sigma ) )
            why.push_back( "identity block sigma-atoms differ at some point" );
        return why;
    }
    if ( n1.size() < 2 || n2.size() < 2 ) {
        why.push_back( "sandwich block needs two end components per side" );
        return why;
    }
    const auto &s1 = n1.front(), &s2 = n2.front(), &e1 = n1.back(), &e2 = n2.back();
    if ( !sandwich_start( s1.frame ) || !sandwich_end( e1.frame ) )
        why.push_back( "sandwich ends have the wrong shape" );
    if ( !pointwise_equal( s1, s2, sigma ) )
        why.push_back( "start components differ in frame or sigma-atoms" );
    if ( !pointwise_equal( e1, e2, sigma ) )
        why.push_back( "end components differ in frame or sigma-atoms" );
    if ( !why.empty() )
        return why;
    code_set S = sigma_sets( s1, sigma );
    if ( sigma_sets( e1, sigma ) != S )
        why.push_back( "start and end clusters carry different sigma-atom sets" );
    for ( const auto* n : { &n1, &n2 } )
        for ( std::size_t i = 1; i + 1 < n->size(); ++i ) {
            const auto& c = ( *n )[ i ];
            if ( c.frame.is_tadpole() ) {
                why.push_back( "sandwich interior contains a tadpole" );
                return why;
            }
            for ( const auto& a : c.atoms )
                if ( !S.count( sig_intersect( a, sigma ) ) ) {
                    why.push_back( "an interior point has sigma-atoms outside the end clusters" );
                    return why;
                }
        }
    return why;
}

namespace
{

std::vector< simple_model > slice( const quasi_model& m, int b, int e )
{
    return { m.comps.begin() + b, m.comps.begin() + e };
}

std::string block_cover_error( const temporal_witness& w )
{
    if ( w.blocks.empty() )
        return "no blocks";
    int l = 0, r = 0;
    for ( const auto& b : w.blocks ) {
        if ( b.left_begin != l || b.right_begin != r )
            return "blocks are not contiguous";
        if ( b.left_end <= b.left_begin || b.right_end <= b.right_begin )
            return "empty block";
        l = b.left_end;
        r = b.right_end;
    }
    if ( l != static_cast< int >( w.m1.comps.size() ) || r != static_cast< int >( w.m2.comps.size() ) )
        return "blocks do not cover the models";
    return {};
}

// Empty when every block has a shape allowed at its position.
std::string grammar_error( const temporal_witness& w, temporal_logic t )
{
    const bool z = t == temporal_logic::lin_z;
    const std::size_t n = w.blocks.size();
    for ( std::size_t j = 0; j < n; ++j ) {
        const auto& b = w.blocks[ j ];
        const bool first = j == 0, last = j + 1 == n;
        for ( const auto* m : { &w.m1, &w.m2 } ) {
            const int begin = m == &w.m1 ? b.left_begin : b.right_begin;
            const int end = m == &w.m1 ? b.left_end : b.right_end;
            const auto& s = m->comps[ begin ].frame;
            const auto& e = m->comps[ end - 1 ].frame;
            const std::string at = "block " + std::to_string( j ) + ": ";
            if ( b.kind == block_kind::identity ) {
                bool ok = s.kind == shape::chain || s.kind == shape::tadpole_lr ||
                          ( z && s.kind == shape::cluster && n == 1 ) || ( z && s.kind == shape::tadpole_r && first ) ||
                          ( z && s.kind == shape::tadpole_l && last );
                if ( !ok )
                    return at + shape_name( s.kind ) + " is not an identity block here";
                continue;
            }
            if ( !( s.kind == shape::tadpole_lr || ( z && first && s.kind == shape::tadpole_r ) ) )
                return at + "sandwich start " + shape_name( s.kind ) + " is not allowed here";
            if ( !( e.kind == shape::tadpole_lr || ( z && last && e.kind == shape::tadpole_l ) ) )
                return at + "sandwich end " + shape_name( e.kind ) + " is not allowed here";
            for ( int c = begin + 1; c < end - 1; ++c )
                if ( m->comps[ c ].frame.kind != shape::chain )
                    return at + "sandwich interior must be irreflexive points";
        }
    }
    return {};
}

int block_of( const temporal_witness& w, bool left, int comp )
{
    for ( std::size_t j = 0; j < w.blocks.size(); ++j ) {
        const auto& b = w.blocks[ j ];
        int begin = left ? b.left_begin : b.right_begin, end = left ? b.left_end : b.right_end;
        if ( comp >= begin && comp < end )
            return static_cast< int >( j );
    }
    return -1;
}

// Where a root sits inside a sandwich: the region between the end clusters,
// or an outer tail at an exact position.
struct sandwich_place
{
    bool middle = true;
    int end = 0;
    long long index = 0;
};

sandwich_place place_in( const quasi_model& m, int begin, int end, const point_ref& p )
{
    const auto& f = m.comps[ p.comp ].frame;
    if ( p.comp == begin && f.kind == shape::tadpole_lr && p.where == part::tail_l )
        return { false, 0, p.index };
    if ( p.comp == end - 1 && f.kind == shape::tadpole_lr && p.where == part::tail_r )
        return { false, 1, p.index };
    return {};
}

std::string root_error( const temporal_witness& w )
{
    const auto &r1 = w.m1.root, &r2 = w.m2.root;
    int j1 = block_of( w, true, r1.comp ), j2 = block_of( w, false, r2.comp );
    if ( j1 < 0 || j2 < 0 || j1 != j2 )
        return "roots lie in different blocks";
    const auto& b = w.blocks[ j1 ];
    if ( b.kind == block_kind::identity ) {
        point_ref a = r1, c = r2;
        a.comp = c.comp = 0;
        return a == c ? "" : "roots in an identity block are different points";
    }
    auto p1 = place_in( w.m1, b.left_begin, b.left_end, r1 );
    auto p2 = place_in( w.m2, b.right_begin, b.right_end, r2 );
    if ( p1.middle != p2.middle || ( !p1.middle && ( p1.end != p2.end || p1.index != p2.index ) ) )
        return "roots in a sandwich block are not related";
    return {};
}

} // namespace

check_report verify_temporal_witness( const temporal_witness& w, formula f1, formula f2, temporal_logic t )
{
    check_report rep;
    signature sigma = sig_intersect( signature_of( f1 ), signature_of( f2 ) );
    const bool dense = dense_regime( t );

    bool temporal = w.m1.temporal && w.m2.temporal && !f1.is_unimodal_modal() && !f2.is_unimodal_modal();
    rep.record( "temporal models", temporal );
    if ( !rep.ok )
        return rep;
    try {
        bool a1 = temporal_mc_quasi( w.m1, w.m1.root, f1 );
        bool a2 = temporal_mc_quasi( w.m2, w.m2.root, neg( f2 ) );
        rep.record( "(a) root satisfaction", a1 && a2,
                    a1 ? ( a2 ? "" : "second root satisfies phi2" ) : "first root refutes phi1" );
    } catch ( const input_error& e ) {
        rep.record( "(a) root satisfaction", false, e.what() );
        return rep;
    }

    bool frames = true;
    std::string frame_detail;
    try {
        for ( const auto* m : { &w.m1, &w.m2 } ) {
            quasi_frame f = frame_of( *m );
            bool ok = dense ? finite_temporal_frame_check( finite_temporal_frame( f ), t ) : temporal_validates( f, t );
            if ( !ok && frames )
                frame_detail = m == &w.m1 ? "first frame" : "second frame";
            frames = frames && ok;
        }
    } catch ( const input_error& e ) {
        frames = false;
        frame_detail = e.what();
    }
    rep.record( std::string( "(b) frames for " ) + temporal_logic_name( t ), frames, frame_detail );

    bool c = sig_intersect( atoms_at( w.m1, w.m1.root ), sigma ) == sig_intersect( atoms_at( w.m2, w.m2.root ), sigma );
    rep.record( "(c) root sigma-atoms", c );

    if ( dense ) {
        if ( !frames )
            return rep;
        auto t1 = truncate( w.m1, 1 ), t2 = truncate( w.m2, 1 );
        auto rel = largest_sigma_bisim( t1.model, t2.model, sigma, true );
        bool related = rel.count( { t1.index_of( w.m1.root ), t2.index_of( w.m2.root ) } ) > 0;
        rep.record( "(d) roots temporally sigma-bisimilar", related,
                    std::to_string( rel.size() ) + " related pairs" );
        return rep;
    }

    std::string cover = block_cover_error( w );
    rep.record( "(d) block segmentation", cover.empty(), cover );
    if ( !cover.empty() )
        return rep;
    std::string grammar = grammar_error( w, t );
    rep.record( "(d) block shapes", grammar.empty(), grammar );
    for ( std::size_t j = 0; j < w.blocks.size(); ++j ) {
        const auto& b = w.blocks[ j ];
        auto why = temporal_block_mismatch( slice( w.m1, b.left_begin, b.left_end ),
                                            slice( w.m2, b.right_begin, b.right_end ), sigma, b.kind );
        std::string detail = block_kind_name( b.kind );
        for ( const auto& s : why )
            detail += "; " + s;
        rep.record( "(d) block " + std::to_string( j ) + " matching", why.empty(), detail );
    }
    std::string roots = root_error( w );
    rep.record( "(d) roots related", roots.empty(), roots );
    return rep;
}

} // namespace iep
