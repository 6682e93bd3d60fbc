#pragma once

#include "iep/formula.hpp"

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace iep
{

struct cluster_shape
{
    bool reflexive = false;
    int size = 1;
};

// A finite transitive connected frame stored as its chain of clusters. Points
// are numbered consecutively along the chain.
class finite_frame
{
    std::vector< cluster_shape > _clusters;
    std::vector< int > _cluster_of;
    std::vector< int > _first;

public:
    finite_frame() = default;
    explicit finite_frame( std::vector< cluster_shape > clusters );

    [[nodiscard]] const std::vector< cluster_shape >& clusters() const { return _clusters; }
    [[nodiscard]] int size() const { return static_cast< int >( _cluster_of.size() ); }
    [[nodiscard]] int cluster_count() const { return static_cast< int >( _clusters.size() ); }
    [[nodiscard]] int cluster_of( int x ) const { return _cluster_of.at( x ); }
    [[nodiscard]] int first_point( int c ) const { return _first.at( c ); }
    [[nodiscard]] bool reflexive( int x ) const { return _clusters[ _cluster_of.at( x ) ].reflexive; }
    [[nodiscard]] bool R( int x, int y ) const;
};

struct finite_model
{
    finite_frame frame;
    std::vector< std::string > names;
    std::vector< signature > atoms;
    bool temporal = false;

    [[nodiscard]] int size() const { return frame.size(); }
    [[nodiscard]] bool holds( int x, const std::string& p ) const { return atoms.at( x ).count( p ) > 0; }
    // Throws input_error for unknown names.
    [[nodiscard]] int index_of( const std::string& name ) const;
    [[nodiscard]] signature atoms_in( int x, const signature& sigma ) const;
};

// Builds a model from (reflexive, atom sets) clusters with generated names.
finite_model make_finite_model( const std::vector< std::pair< bool, std::vector< signature > > >& clusters,
                                bool temporal = false );

// Truth of f at every point, by direct quantification over R.
std::vector< bool > mc_finite_all( const finite_model& m, formula f );
bool mc_finite( const finite_model& m, int x, formula f );

using bisim_relation = std::set< std::pair< int, int > >;

bisim_relation largest_sigma_bisim( const finite_model& m1, const finite_model& m2, const signature& sigma,
                                    bool temporal );

// Canonical axiom: a finite rooted frame with closed-domain points.
struct canonical_axiom
{
    finite_frame frame;
    std::set< int > closed_domain;
};

// Empty when well formed.
std::vector< std::string > validate_canonical_axiom( const canonical_axiom& a );

// One cluster of a host chain. Points in a non-hostable cluster may not be
// images of an embedding.
struct host_cluster
{
    bool reflexive = false;
    int size = 1;
    bool hostable = true;
};

// True iff some injection of the axiom frame into the host chain meets the
// refutation conditions: order and reflexivity preserved, final cluster to
// final cluster, and closed-domain points sitting right after the image of
// their predecessor.
bool embeds_axiom( const std::vector< host_cluster >& host, const canonical_axiom& a );

bool finite_frame_validates_axiom( const finite_frame& fr, const canonical_axiom& a );

enum class temporal_logic { lin, lin_q, lin_r, lin_fin, lin_z };

const char* temporal_logic_name( temporal_logic t );
std::optional< temporal_logic > temporal_logic_from_name( const std::string& name );

// Frame conditions for the dense-time logics on finite frames.
bool finite_temporal_frame_check( const finite_frame& fr, temporal_logic t );

} // namespace iep
