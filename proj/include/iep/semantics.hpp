#pragma once

#include "iep/formula.hpp"
#include "iep/kripke.hpp"
#include "iep/qmodel.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace iep
{

// K4.3 plus canonical axioms, or one of the built-in temporal logics.
struct logic
{
    std::string name;
    bool temporal = false;
    temporal_logic tag = temporal_logic::lin;
    std::vector< canonical_axiom > axioms;

    [[nodiscard]] bool cofinal() const;
    [[nodiscard]] int max_axiom_points() const;
};

// K4.3, GL.3, LogN, Dense, Lin, LinQ, LinR, LinFin, LinZ.
logic builtin_logic( const std::string& name );
std::vector< std::string > builtin_logic_names();
logic unimodal_logic( std::string name, std::vector< canonical_axiom > axioms );

bool mc_quasi( const quasi_model& m, const point_ref& x, formula f );
bool temporal_mc_quasi( const quasi_model& m, const point_ref& x, formula f );

// The finite host chain for one axiom: finite components unchanged, each
// tadpole reduced to its last points+1 tail points with the deepest one
// unusable.
std::vector< host_cluster > host_chain( const quasi_frame& f, int axiom_points );

bool validates_axiom( const quasi_frame& f, const canonical_axiom& a );
bool validates_logic( const quasi_frame& f, const logic& L );

// A finite frame as a quasi-finite frame without tadpoles.
quasi_frame lift( const finite_frame& fr );

// Embedding search run backwards over a chain of clusters. Bit j of `first`
// says the clusters g_j .. g_r of the axiom embed with g_j on the current
// first cluster; bit j of `some` says they embed with g_j anywhere.
struct axiom_state
{
    std::uint32_t first = 0;
    std::uint32_t some = 0;
    bool empty = true;
    auto operator<=>( const axiom_state& ) const = default;
};

class axiom_automaton
{
    std::vector< cluster_shape > _g;
    std::vector< bool > _in_d;
    int _points = 0;

public:
    explicit axiom_automaton( const canonical_axiom& a );

    [[nodiscard]] axiom_state start() const { return {}; }
    [[nodiscard]] axiom_state prepend( const axiom_state& s, const host_cluster& c ) const;
    [[nodiscard]] axiom_state prepend_component( const axiom_state& s, const atomic_frame& f ) const;
    [[nodiscard]] bool refuted( const axiom_state& s ) const { return s.some & 1u; }
    [[nodiscard]] int points() const { return _points; }
};

} // namespace iep
