#pragma once

#include "iep/formula.hpp"
#include "iep/kripke.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace iep
{

enum class shape { chain, refl_chain, cluster, tadpole_r, tadpole_l, tadpole_lr };

const char* shape_name( shape s );
shape shape_from_name( const std::string& name );

// One of the atomic frames. Tadpoles carry a k-point cluster and one or two
// infinite tails; tadpole_r has its tail after the cluster (b_n sees b_m iff
// n > m), tadpole_l is the mirror image, tadpole_lr has irreflexive tails on
// both sides.
struct atomic_frame
{
    shape kind = shape::chain;
    int m = 1;
    int k = 1;
    bool tail_reflexive = false;

    [[nodiscard]] bool is_tadpole() const
    {
        return kind == shape::tadpole_r || kind == shape::tadpole_l || kind == shape::tadpole_lr;
    }
    [[nodiscard]] bool temporal_only() const { return kind == shape::tadpole_l || kind == shape::tadpole_lr; }
    // Points carrying their own atoms: all points of finite shapes, the
    // cluster points of tadpoles.
    [[nodiscard]] int base_points() const;
    // The size measure used by the bounds.
    [[nodiscard]] int size() const;
    bool operator==( const atomic_frame& ) const = default;
};

atomic_frame chain_frame( int m );
atomic_frame refl_chain_frame( int m );
atomic_frame cluster_frame( int k );
atomic_frame tadpole_r_frame( int k, bool tail_reflexive );
atomic_frame tadpole_l_frame( int k, bool tail_reflexive );
atomic_frame tadpole_lr_frame( int k );

// Valuation as atoms per base point; tail point b_n copies a_{n mod k}.
struct simple_model
{
    atomic_frame frame;
    std::vector< signature > atoms;
    std::vector< std::string > names;
};

enum class part { finite, cluster, tail, tail_l, tail_r };

struct point_ref
{
    int comp = 0;
    part where = part::finite;
    long long index = 0;
    bool operator==( const point_ref& ) const = default;
};

struct quasi_model
{
    std::vector< simple_model > comps;
    point_ref root;
    bool temporal = false;
};

struct quasi_frame
{
    std::vector< atomic_frame > comps;
    bool temporal = false;
};

quasi_frame frame_of( const quasi_model& m );

// Checks shapes and valuation arity, and the temporal flag.
quasi_model ordered_sum( std::vector< simple_model > comps, bool temporal = false );

void validate_point( const quasi_model& m, const point_ref& p );
std::string point_name( const quasi_model& m, const point_ref& p );
// Accepts a component point name or "c:i", "c:aI", "c:bN", "c:bLN", "c:bRN".
point_ref parse_point( const quasi_model& m, const std::string& text );

// Atoms at any point, tail points included.
signature atoms_at( const quasi_model& m, const point_ref& p );

long long model_size( const quasi_frame& f );

bool is_L_bounded( const atomic_frame& f, long long cL, long long kb, long long pL );

// Finite points kept per tail point from the boundary inward; points of other
// shapes are kept completely.
struct truncation
{
    finite_model model;
    std::vector< point_ref > origin;
    // Tail points still present between the point and the cut, or -1 when the
    // point is not in a tail.
    std::vector< long long > boundary_distance;
    [[nodiscard]] int index_of( const point_ref& p ) const;
};

truncation truncate( const quasi_model& m, int window );

// Representative points of one component used by the evaluators: all finite
// points, all cluster points, and the first `window` points of each tail.
// Successor lists stand in for unrepresented tail points with the last
// period of representatives.
struct rep_layout
{
    int window = 0;
    std::vector< point_ref > refs;
    std::vector< int > base;
    std::vector< std::vector< int > > fut;
    std::vector< std::vector< int > > past;
    [[nodiscard]] int size() const { return static_cast< int >( refs.size() ); }
    // Representative for any point of the component.
    [[nodiscard]] int rep_of( const point_ref& p ) const;
};

rep_layout make_layout( const atomic_frame& f, int window );

} // namespace iep
